import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oplab.calculus import (
    apply_to_triangular,
    divided_differences,
    horner,
    matrix_function,
    poly_eval_tuple,
    snap_nodes,
    von_neumann_check,
)
from oplab.errors import CommutativityError, ConfluenceError, DomainError, NotContractionError
from oplab.inequalities import polydisk_proof_matrices
from oplab.linalg import operator_norm
from oplab.model import model_matrix
from oplab.multi import MultiPolynomial, random_multi_polynomial
from oplab.schur import FiniteBlaschke, Polynomial, constant, sample_random_schur

SQ = Polynomial([0, 0, 1])


def test_divided_difference_examples():
    a, b, c = 0.3 + 0.1j, -0.2j, 0.5
    assert divided_differences(SQ, [a, b]).top == pytest.approx(a + b)
    assert divided_differences(SQ, [a, a]).top == pytest.approx(2 * a)
    assert divided_differences(SQ, [a, b, c]).top == pytest.approx(1)
    t = divided_differences(SQ, [a, b, c])
    assert t.entry(0, 0) == pytest.approx(a * a)
    assert t.entry(1, 1) == pytest.approx(b + c)


def test_divided_differences_confluent_limit(rng):
    f = sample_random_schur(5, 4)
    a = 0.3 - 0.2j
    exact = divided_differences(f, [a, a, a]).top
    assert exact == pytest.approx(f.derivative(a, 2) / 2, abs=1e-12)
    near = divided_differences(f, [a, a + 1e-4, a - 1e-4j]).top
    assert near == pytest.approx(exact, abs=1e-3)


def test_snap_band():
    values, label = snap_nodes([0.1, 0.1 + 1e-13])
    assert len(values) == 1 and label == [0, 0]
    with pytest.raises(ConfluenceError):
        snap_nodes([0.1, 0.1 + 1e-10])


def test_apply_square_on_jordan_like():
    w, al, be = 0.3 + 0.2j, 0.4, -0.1j
    t = np.array([[w, al, be], [0, w, al], [0, 0, w]])
    expected = np.array([[w * w, 2 * w * al, 2 * w * be + al * al], [0, w * w, 2 * w * al], [0, 0, w * w]])
    np.testing.assert_allclose(apply_to_triangular(SQ, t), expected, atol=1e-14)


def test_blaschke_annihilates_model_matrix(rng):
    for n in range(1, 6):
        zeros = 0.9 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
        out = apply_to_triangular(FiniteBlaschke(zeros), model_matrix(zeros).matrix)
        assert np.max(np.abs(out)) <= 1e-9


def test_path_sum_matches_horner(rng):
    for _ in range(30):
        n = int(rng.integers(1, 7))
        t = np.triu(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        t /= operator_norm(t)
        p = Polynomial(rng.normal(size=6) + 1j * rng.normal(size=6))
        np.testing.assert_allclose(apply_to_triangular(p, t), horner(p, t), atol=1e-10)
        np.testing.assert_allclose(matrix_function(p, np.asarray(t) + 0.0), horner(p, t), atol=1e-9)


def test_matrix_function_general(rng):
    # Blaschke factor on a full matrix: (T - a)(I - conj(a) T)^{-1}
    for _ in range(10):
        t = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        t *= 0.9 / operator_norm(t)
        a = 0.3 - 0.4j
        expected = (t - a * np.eye(4)) @ np.linalg.inv(np.eye(4) - np.conj(a) * t)
        np.testing.assert_allclose(matrix_function(FiniteBlaschke([a]), t), expected, atol=1e-10)


def test_poly_eval_tuple_examples(rng):
    t1 = np.triu(rng.normal(size=(3, 3))) * 0.2
    t2 = 0.5 * np.eye(3) + 0.3 * t1
    x1 = MultiPolynomial.from_terms(2, {(1, 0): 1})
    np.testing.assert_allclose(poly_eval_tuple(x1, [t1, t2]), t1, atol=1e-15)
    d1, d2 = np.diag([0.1, 0.2j, -0.3]), np.diag([0.5, 0.4, 0.3j])
    x1x2 = MultiPolynomial.from_terms(2, {(1, 1): 1})
    np.testing.assert_allclose(np.diag(poly_eval_tuple(x1x2, [d1, d2])), np.diag(d1) * np.diag(d2), atol=1e-15)
    with pytest.raises(CommutativityError):
        poly_eval_tuple(x1x2, [np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])])


def test_poly_eval_tuple_two_point_structure(rng):
    for _ in range(20):
        a = 0.9 * rng.random(2) * np.exp(2j * np.pi * rng.random(2))
        b = 0.9 * rng.random(2) * np.exp(2j * np.pi * rng.random(2))
        mats, d = polydisk_proof_matrices(a, b)
        p = random_multi_polynomial(rng, 2, 3)
        pa, pb = p.value(a), p.value(b)
        np.testing.assert_allclose(poly_eval_tuple(p, mats), [[pa, d * (pa - pb)], [0, pb]], atol=1e-12)


def test_von_neumann_examples(rng):
    w = [0.3, -0.2j, 0.5 + 0.1j]
    r = von_neumann_check(sample_random_schur(2, 4), model_matrix(w).matrix)
    assert r.lhs <= 1 + 1e-9 and r.holds
    r = von_neumann_check(constant(0.4j), model_matrix(w).matrix)
    assert r.lhs == pytest.approx(0.4) and r.rhs == pytest.approx(0.4)
    with pytest.raises(NotContractionError):
        von_neumann_check(SQ, 2 * np.eye(2))


def test_von_neumann_commuting_pair(rng):
    # fine-grid oracle: the certified sup norm dominates the raw maximum on a much finer grid
    for _ in range(10):
        s = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        s *= 0.95 / operator_norm(s)
        t1, t2 = s, 0.5 * s @ s + 0.2 * s
        p = random_multi_polynomial(rng, 2, 3)
        r = von_neumann_check(p, [t1, t2])
        grid = np.exp(2j * np.pi * np.arange(512) / 512)
        fine = max(abs(p.value([u, v])) for u in grid[::4] for v in grid[::4])
        assert p.certified_sup_norm >= fine
        assert r.slack >= -(p.inflation - 1)


def test_tuple_size_limit():
    p = MultiPolynomial.from_terms(1, {(1,): 1})
    with pytest.raises(DomainError):
        von_neumann_check(p, [np.eye(4) * 0.5])


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6))
def test_von_neumann_property(seed, degree, size):
    rng = np.random.default_rng(seed)
    t = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    t *= rng.uniform(0.1, 1.0) / operator_norm(t)
    f = sample_random_schur(seed, degree)
    assert von_neumann_check(f, t).holds
