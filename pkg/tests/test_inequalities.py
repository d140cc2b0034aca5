import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oplab.disk import pseudo_hyperbolic_distance
from oplab.errors import ConfluenceError, DomainError, SeparationError
from oplab.inequalities import (
    beardon_minda,
    bm_matrix_bridge,
    bm_proof_identity_check,
    coefficient_inequalities,
    gamma,
    normalized_composition,
    peschl,
    peschl_multi,
    peschl_multi_inequality,
    peschl_multi_oracle,
    peschl_oracle,
    polydisk_derivative,
    polydisk_schwarz_pick,
    ruscheweyh,
    schwarz_pick_derivative,
    schwarz_pick_two_point,
    yamashita,
)
from oplab.multi import MultiPolynomial, SeparableBlaschke, random_multi_polynomial, sample_random_multi
from oplab.schur import FiniteBlaschke, Polynomial, constant, identity, sample_random_schur

from conftest import disk_points

SQ = FiniteBlaschke([0, 0])
AUTO = FiniteBlaschke([0.4 - 0.3j], 1j)


def test_schwarz_pick_examples():
    assert schwarz_pick_two_point(AUTO, 0.1, -0.5j).equality
    assert schwarz_pick_two_point(constant(0.3j), 0.1, -0.5j).lhs == 0
    r = schwarz_pick_two_point(SQ, 0.3, -0.4)
    assert r.lhs == pytest.approx(pseudo_hyperbolic_distance(0.09, 0.16))
    assert r.lhs == pytest.approx(0.07 / 0.9856, abs=1e-15)
    assert r.rhs == pytest.approx(0.625)
    assert r.holds and not r.equality
    with pytest.raises(SeparationError):
        schwarz_pick_two_point(SQ, 0.3, 0.3)


def test_schwarz_pick_derivative_examples():
    assert schwarz_pick_derivative(identity(), 0.2 + 0.3j).equality
    assert schwarz_pick_derivative(constant(0.5), 0.2).lhs == 0
    r = schwarz_pick_derivative(SQ, 0.5)
    assert r.lhs / r.rhs == pytest.approx(0.8)
    assert gamma(SQ, 0.5) == pytest.approx(0.8)


def test_beardon_minda_examples():
    r = beardon_minda(SQ, 0.3, 0, -0.4)
    assert r.lhs == pytest.approx(0.625) and r.rhs == pytest.approx(0.625)
    assert r.equality
    assert beardon_minda(AUTO, 0.1, 0.5j, -0.3).equality
    rng = np.random.default_rng(3)
    strict = 0
    for _ in range(50):
        f = sample_random_schur(int(rng.integers(1 << 30)), 5)
        w = 0.9 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        r = beardon_minda(f, *w)
        assert r.holds
        strict += r.slack > 1e-6
    assert strict > 40


def test_bm_identity_examples(rng):
    w = (0.1 + 0.2j, -0.4, 0.3j)
    assert bm_proof_identity_check(AUTO, *w) <= 1e-12
    assert bm_proof_identity_check(SQ, 0.3, 0, -0.4) <= 1e-12
    for _ in range(200):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(1, 7)))
        pts = 0.95 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        assert bm_proof_identity_check(f, *pts) <= 1e-10


def test_bm_matrix_bridge(rng):
    for _ in range(50):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(2, 6)))
        pts = 0.9 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        res = bm_matrix_bridge(f, *pts)
        assert res.residual <= 1e-9
        if abs(res.report.slack) > 1e-9:
            assert (res.slack_14 > 0) == (res.report.slack > 0)


def test_peschl_examples():
    p = peschl(identity(), 0.3 - 0.2j)
    assert p.d1 == pytest.approx(1) and p.d2 == pytest.approx(0, abs=1e-14)
    p = peschl(SQ, 0)
    assert p.d1 == pytest.approx(0) and p.d2 == pytest.approx(2)
    f = sample_random_schur(9, 4)
    g = normalized_composition(f, 0.4j)
    assert abs(g(0)) < 1e-14


def test_peschl_against_oracle(rng):
    for _ in range(50):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(1, 7)))
        w = 0.9 * math.sqrt(rng.random()) * complex(np.exp(2j * np.pi * rng.random()))
        p, q = peschl(f, w), peschl_oracle(f, w)
        assert abs(p.d1 - q.d1) <= 1e-7 and abs(p.d2 - q.d2) <= 1e-7


def test_yamashita_examples(rng):
    r = yamashita(SQ, 0)
    assert r.lhs == pytest.approx(2) and r.rhs == pytest.approx(2) and r.equality
    assert yamashita(AUTO, 0.3 + 0.1j).equality
    for _ in range(30):
        f = sample_random_schur(int(rng.integers(1 << 30)), 4)
        w = 0.9 * math.sqrt(rng.random()) * complex(np.exp(2j * np.pi * rng.random()))
        r = yamashita(f, w)
        assert r.holds
        if "wirtinger_gap" in r.context:
            assert r.context["wirtinger_ok"]


def test_degree_two_equality(rng):
    for _ in range(50):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(1, 3)))
        pts = 0.9 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        assert abs(beardon_minda(f, *pts).slack) <= 1e-8
        assert abs(yamashita(f, pts[0]).slack) <= 1e-8


def test_polydisk_examples():
    f = MultiPolynomial.from_terms(2, {(1, 1): 1})
    b = [0.5 + 0.1j, -0.3j]
    r = polydisk_schwarz_pick(f, [0, 0], b)
    assert r.lhs == pytest.approx(abs(b[0] * b[1]))
    assert r.rhs == pytest.approx(max(abs(b[0]), abs(b[1])))
    g = MultiPolynomial.from_terms(2, {(2, 0): 1})
    a, b = [0.3, 0.1], [-0.4, 0.7j]
    assert polydisk_schwarz_pick(g, a, b).lhs == pytest.approx(schwarz_pick_two_point(Polynomial([0, 0, 1]), 0.3, -0.4).lhs)
    r = polydisk_derivative(MultiPolynomial.from_terms(2, {(1, 0): 0.5, (0, 1): 0.5}), [0, 0])
    assert r.lhs == pytest.approx(1) and r.rhs == pytest.approx(1) and r.equality
    assert polydisk_derivative(MultiPolynomial.from_terms(2, {(0, 0): 0.3}), [0.1, 0.2]).lhs == 0


def test_peschl_multi_examples():
    avg = MultiPolynomial.from_terms(2, {(1, 0): 0.5, (0, 1): 0.5})
    p = peschl_multi(avg, [0, 0])
    assert p.d1 == pytest.approx(1) and p.d2 == pytest.approx(0, abs=1e-14)
    prod = MultiPolynomial.from_terms(2, {(1, 1): 1})
    p = peschl_multi(prod, [0, 0])
    assert p.d1 == pytest.approx(0) and p.d2 == pytest.approx(2)
    r = peschl_multi_inequality(prod, [0, 0])
    assert r.lhs == pytest.approx(2) and r.rhs == pytest.approx(2) and r.equality
    sq = MultiPolynomial.from_terms(1, {(2,): 1})
    assert peschl_multi_inequality(sq, [0]).equality
    # one variable agrees with the scalar closed form
    f = sample_random_schur(4, 3)
    pm = peschl_multi(SeparableBlaschke([f]), [0.3 - 0.1j])
    ps = peschl(f, 0.3 - 0.1j)
    assert pm.d1 == pytest.approx(ps.d1) and pm.d2 == pytest.approx(ps.d2)


def test_peschl_multi_against_oracle(rng):
    for _ in range(40):
        f = sample_random_multi(rng, 2, 3)
        w = 0.9 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
        p, q = peschl_multi(f, w), peschl_multi_oracle(f, w)
        assert abs(p.d1 - q.d1) <= 1e-6 and abs(p.d2 - q.d2) <= 1e-6
        assert peschl_multi_inequality(f, w).slack >= -1e-8


def test_coefficient_examples():
    for k in range(1, 6):
        reports = coefficient_inequalities(Polynomial([0] * k + [1]), 1, k)
        wiener = reports[0]
        assert wiener.lhs == pytest.approx(1) and wiener.rhs == pytest.approx(1)
    mob = FiniteBlaschke([-0.5])
    three = coefficient_inequalities(mob, 1, 1)[1]
    assert abs(three.lhs) <= 1e-12 and abs(three.rhs) <= 1e-12
    assert abs(0.375 * 0.75 - 0.5625 * 0.5) == 0
    with pytest.raises(DomainError):
        coefficient_inequalities(mob, 0, 1)


def test_coefficient_sweep(rng):
    for _ in range(40):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(1, 9)))
        a = f.taylor_coefficients(21)
        for n in range(1, 10):
            for k in range(1, 11 - n):
                for r in coefficient_inequalities(f, n, k, coeffs=a):
                    assert r.holds, (r.name, n, k, r.slack)


def test_normalized_coefficients_with_zero_constant(rng):
    f = FiniteBlaschke([0, 0.3 - 0.2j, -0.5])
    names = [r.name for r in coefficient_inequalities(f, 2, 3)]
    assert "coefficient-normalized" in names
    assert all(r.holds for r in coefficient_inequalities(f, 2, 3))


def test_ruscheweyh_examples(rng):
    f = sample_random_schur(21, 3)
    r = ruscheweyh(f, 0, 1)
    assert r.lhs == pytest.approx(abs(f.derivative(0)))
    assert r.rhs == pytest.approx(1 - abs(f(0)) ** 2)
    r = ruscheweyh(identity(), 0, 1)
    assert r.lhs == pytest.approx(1) and r.rhs == pytest.approx(1) and r.equality
    for _ in range(50):
        f = sample_random_schur(int(rng.integers(1 << 30)), int(rng.integers(1, 7)))
        z = 0.95 * math.sqrt(rng.random()) * complex(np.exp(2j * np.pi * rng.random()))
        for k in (1, 2, 3):
            assert ruscheweyh(f, z, k).holds


def test_three_point_errors():
    with pytest.raises((SeparationError, ConfluenceError)):
        beardon_minda(SQ, 0.1, 0.1, 0.3)


@given(st.integers(0, 2**32), st.integers(1, 6), disk_points(0.95), disk_points(0.95), disk_points(0.95))
def test_beardon_minda_property(seed, degree, w1, w2, w3):
    if min(abs(w1 - w2), abs(w2 - w3), abs(w1 - w3)) < 1e-3:
        return
    f = sample_random_schur(seed, degree)
    r = beardon_minda(f, w1, w2, w3)
    assert r.slack >= -1e-9
    # the two-point inequality follows from the three-point one
    assert schwarz_pick_two_point(f, w1, w3).holds


@given(st.integers(0, 2**32), st.integers(1, 6), disk_points(0.95))
def test_yamashita_property(seed, degree, w):
    f = sample_random_schur(seed, degree)
    p = peschl(f, w)
    assert abs(p.d2) <= 2 * (1 - abs(p.d1) ** 2) + 1e-9
    assert abs(p.d1) <= 1 + 1e-12


@given(st.integers(0, 2**32), st.integers(1, 3))
def test_polydisk_property(seed, n):
    rng = np.random.default_rng(seed)
    f = random_multi_polynomial(rng, n, 2)
    a = 0.95 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    b = 0.95 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    r = polydisk_schwarz_pick(f, a, b)
    assert r.holds
    assert r.context["tuple_deviation"] <= 1e-10
    assert polydisk_derivative(f, a).holds
