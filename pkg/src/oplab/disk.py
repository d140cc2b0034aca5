"""Pseudo-hyperbolic and hyperbolic geometry of the unit disk."""

import math

from .errors import BoundaryError, DegenerateError, DomainError

DENOM_FLOOR = 1e-14
SNAP_BAND = 1e-12
ATANH_GUARD = 1e-15


def disk_point(value, closed=False):
    """Validate a point of the unit disk and return it as a Python complex.

    With ``closed=False`` the point must satisfy ``|value| < 1``.  With
    ``closed=True`` the closed disk is admitted, and points overshooting the
    circle by at most 1e-12 (harmless roundoff from sampling and square
    roots) are snapped onto it.
    """
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite disk point {value!r}")
    r = abs(z)
    if closed:
        if r > 1.0 + SNAP_BAND:
            raise BoundaryError(f"|{z}| = {r} exceeds the closed disk")
        if r > 1.0:
            z = z / r
        return z
    if r >= 1.0:
        raise BoundaryError(f"|{z}| = {r} is not inside the open disk")
    return z


def pseudo_hyperbolic_complex(z, w):
    """(z - w) / (1 - conj(w) z)."""
    z, w = complex(z), complex(w)
    den = 1.0 - w.conjugate() * z
    if abs(den) < DENOM_FLOOR:
        raise DegenerateError(f"1 - conj(w) z vanishes for z={z}, w={w}")
    return (z - w) / den


def pseudo_hyperbolic_distance(z, w):
    return abs(pseudo_hyperbolic_complex(z, w))


def hyperbolic_distance(z, w):
    """atanh of the pseudo-hyperbolic distance; both points interior."""
    z = disk_point(z)
    w = disk_point(w)
    rho = pseudo_hyperbolic_distance(z, w)
    if rho >= 1.0 - ATANH_GUARD:
        raise DomainError(f"pseudo-hyperbolic distance {rho} too close to 1")
    return math.atanh(rho)


def s_product(u, v):
    """(1 - |u|^2)(1 - |v|^2).

    Equals |1 - conj(u) v|^2 - |u - v|^2 identically; that form is what makes
    the three-point algebra collapse.
    """
    u, v = complex(u), complex(v)
    return (1.0 - abs(u) ** 2) * (1.0 - abs(v) ** 2)


def disk_automorphism(theta, a):
    """Return zeta -> e^{i theta} (zeta - a) / (1 - conj(a) zeta)."""
    a = disk_point(a)
    rot = complex(math.cos(theta), math.sin(theta))

    def phi(zeta):
        return rot * (zeta - a) / (1.0 - a.conjugate() * zeta)

    return phi
