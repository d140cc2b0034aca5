import math

import pytest
from hypothesis import given

from oplab.disk import (
    disk_automorphism,
    disk_point,
    hyperbolic_distance,
    pseudo_hyperbolic_complex,
    pseudo_hyperbolic_distance,
    s_product,
)
from oplab.errors import BoundaryError, DomainError

from conftest import disk_points


def test_pseudo_hyperbolic_examples():
    assert pseudo_hyperbolic_complex(0.4 + 0.1j, 0.4 + 0.1j) == 0
    assert pseudo_hyperbolic_complex(0.3 - 0.2j, 0) == 0.3 - 0.2j
    assert pseudo_hyperbolic_complex(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)
    assert pseudo_hyperbolic_distance(0.3, 0.3) == 0
    assert pseudo_hyperbolic_distance(0, 0.6j) == pytest.approx(0.6)
    assert pseudo_hyperbolic_distance(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)


def test_hyperbolic_distance_examples():
    assert hyperbolic_distance(0.2j, 0.2j) == 0
    # atanh(x) = log((1 + x) / (1 - x)) / 2
    assert hyperbolic_distance(0, 0.5) == pytest.approx(0.5 * math.log(3.0), abs=1e-15)
    assert hyperbolic_distance(0, 0.5) == pytest.approx(0.5493061, abs=1e-7)
    assert hyperbolic_distance(0, 0.9) > hyperbolic_distance(0, 0.5)


def test_s_product_examples():
    assert s_product(0, 0) == 1
    assert s_product(0.6 + 0.8j, 0.6 + 0.8j) == pytest.approx(0, abs=1e-15)
    assert s_product(0.5, 0.5j) == pytest.approx(0.5625)
    assert abs(1 - 0.25j) ** 2 - abs(0.5 - 0.5j) ** 2 == pytest.approx(0.5625)


def test_disk_point_validation():
    with pytest.raises(BoundaryError):
        disk_point(1.0)
    assert disk_point(1.0, closed=True) == 1.0
    assert abs(disk_point(1.0 + 1e-13, closed=True)) == 1.0
    with pytest.raises(BoundaryError):
        disk_point(1.1, closed=True)
    with pytest.raises(DomainError):
        disk_point(float("nan"))
    with pytest.raises(DomainError):
        hyperbolic_distance(0, 1 - 1e-17)


@given(disk_points(), disk_points())
def test_s_product_identity(u, v):
    assert s_product(u, v) == pytest.approx(abs(1 - u.conjugate() * v) ** 2 - abs(u - v) ** 2, abs=1e-12)


@given(disk_points(), disk_points())
def test_distance_symmetric_and_bounded(z, w):
    d = pseudo_hyperbolic_distance(z, w)
    assert 0 <= d < 1
    assert d == pytest.approx(pseudo_hyperbolic_distance(w, z), abs=1e-12)
    # 1 - rho^2 = S(z, w) / |1 - conj(w) z|^2
    assert 1 - d * d == pytest.approx(s_product(z, w) / abs(1 - w.conjugate() * z) ** 2, abs=1e-12)


@given(disk_points(), disk_points(), disk_points(), disk_points(0.9))
def test_automorphism_invariance(z, w, x, a):
    phi = disk_automorphism(1.3, a)
    assert pseudo_hyperbolic_distance(phi(z), phi(w)) == pytest.approx(pseudo_hyperbolic_distance(z, w), abs=1e-9)
    # triangle inequality for the hyperbolic metric
    assert hyperbolic_distance(z, w) <= hyperbolic_distance(z, x) + hyperbolic_distance(x, w) + 1e-9
