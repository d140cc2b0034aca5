import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oplab.errors import BoundaryError, ConfluenceError, DomainError
from oplab.multi import MultiPolynomial
from oplab.schur import (
    FiniteBlaschke,
    Polynomial,
    cauchy_derivative,
    confluent_hyperbolic_difference,
    constant,
    dilate,
    from_json,
    hyperbolic_divided_difference,
    identity,
    sample_random_schur,
    sup_norm_estimate,
    taylor_coefficients,
)

from conftest import disk_points


def test_evaluate_examples():
    assert FiniteBlaschke([0])(0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
    assert FiniteBlaschke([0, 0])(0.3) == pytest.approx(0.09)
    assert FiniteBlaschke([0.5])(0.5) == 0


def test_derivative_examples():
    sq = FiniteBlaschke([0, 0])
    w = 0.2 - 0.4j
    assert sq.derivative(w, 1) == pytest.approx(2 * w)
    assert sq.derivative(w, 2) == pytest.approx(2)
    assert FiniteBlaschke([0.5]).derivative(0, 1) == pytest.approx(0.75)


def test_taylor_examples():
    for k in range(5):
        a = taylor_coefficients(Polynomial([0] * k + [1]), 8)
        np.testing.assert_allclose(a, np.eye(8)[k], atol=1e-14)
    np.testing.assert_allclose(FiniteBlaschke([0.5]).taylor_coefficients(3), [-0.5, 0.75, 0.375], atol=1e-14)
    # (z + 1/2) / (1 + z/2) is the factor with zero -1/2
    mob = FiniteBlaschke([-0.5])
    np.testing.assert_allclose(mob.taylor_coefficients(3), [0.5, 0.75, -0.375], atol=1e-14)


def test_taylor_matches_exact_series(rng):
    for _ in range(20):
        f = FiniteBlaschke(0.9 * rng.random(4) * np.exp(2j * np.pi * rng.random(4)))
        np.testing.assert_allclose(f.taylor_coefficients(20), f.series(20), atol=1e-12)


def test_sup_norm_examples():
    assert sup_norm_estimate(FiniteBlaschke([0.3, -0.2j])) == 1.0
    half = sup_norm_estimate(Polynomial([0, 0.5]))
    assert 0.5 <= half <= 0.5 * 1.001
    p = MultiPolynomial.from_terms(2, {(1, 0): 0.5, (0, 1): 0.5})
    assert 1.0 <= sup_norm_estimate(p) <= 1.01


def test_divided_difference_examples():
    z, w = 0.3 + 0.2j, -0.1 + 0.5j
    assert hyperbolic_divided_difference(identity(), z, w) == pytest.approx(1)
    assert hyperbolic_divided_difference(constant(0.3), z, w) == 0
    assert hyperbolic_divided_difference(FiniteBlaschke([0, 0]), 0.3, 0) == pytest.approx(0.3)
    assert confluent_hyperbolic_difference(identity(), z) == pytest.approx(1)
    assert confluent_hyperbolic_difference(FiniteBlaschke([0, 0]), 0) == 0
    assert confluent_hyperbolic_difference(FiniteBlaschke([0, 0]), 0.5) == pytest.approx(0.8)
    with pytest.raises(ConfluenceError):
        hyperbolic_divided_difference(identity(), z, z)
    with pytest.raises(BoundaryError):
        hyperbolic_divided_difference(constant(1.0), z, w)


def test_sampling_examples():
    c = sample_random_schur(3, 0)
    assert c.degree == 0 and abs(abs(c(0.2)) - 1) < 1e-12
    f = sample_random_schur(11, 1)
    assert f.degree == 1
    g = sample_random_schur(11, 1)
    assert f.to_dict() == g.to_dict()


def test_dilate_examples():
    d = dilate(identity(), 0.5)
    np.testing.assert_allclose(d.coeffs, [0, 0.5])
    f = FiniteBlaschke([0.4, -0.3 + 0.5j], cmath.exp(0.7j))
    df = dilate(f, 0.8)
    assert df(1.0) == pytest.approx(f(0.8), abs=1e-13)
    assert sup_norm_estimate(df) <= sup_norm_estimate(f) + 1e-9


def test_validation():
    with pytest.raises(DomainError):
        FiniteBlaschke([0.2], 2.0)
    with pytest.raises(BoundaryError):
        FiniteBlaschke([1.0])
    with pytest.raises(DomainError):
        Polynomial([])
    with pytest.raises(DomainError):
        dilate(identity(), 1.0)


def test_json_round_trip():
    f = FiniteBlaschke([0.1 + 0.2j, -0.4], 1j)
    g = from_json(f.to_json())
    assert g(0.3 - 0.1j) == pytest.approx(f(0.3 - 0.1j))
    p = Polynomial([0.1, 0.2j])
    assert from_json(p.to_json())(0.5) == pytest.approx(p(0.5))


@given(st.integers(0, 2**32), st.integers(1, 6), disk_points(0.9))
def test_jet_matches_cauchy_oracle(seed, degree, z):
    f = sample_random_schur(seed, degree)
    for order in (1, 2, 3):
        assert f.derivative(z, order) == pytest.approx(cauchy_derivative(f, z, order), abs=1e-7 * 10 ** order)


@given(st.integers(0, 2**32), st.integers(1, 6), disk_points())
def test_blaschke_inner(seed, degree, z):
    f = sample_random_schur(seed, degree)
    assert abs(f(z)) < 1
    assert abs(f(cmath.exp(1j * abs(z) * 7))) == pytest.approx(1, abs=1e-12)
