"""Verifiers for the Schwarz-Pick family of inequalities.

Each verifier returns an ``InequalityReport`` (lhs <= rhs with slack) and
raises a ``DomainError`` subclass outside its domain instead of producing
inf or nan.
"""

import math
from dataclasses import dataclass

import numpy as np

from .calculus import apply_to_triangular, poly_eval_tuple
from .completion import criterion_from_matrix
from .disk import disk_point, pseudo_hyperbolic_distance, s_product
from .errors import BoundaryError, DomainError, SeparationError
from .model import model_matrix
from .multi import MultiPolynomial, MultiSchurFunction, as_point
from .report import EQUALITY_TOL, FEASIBILITY_TOL, InequalityReport
from .schur import (
    confluent_hyperbolic_difference,
    hyperbolic_divided_difference,
    taylor_coefficients,
)

SEPARATION_FLOOR = 1e-8
COLLISION_FLOOR = 1e-12
UNIMODULAR_BAND = 1e-10
CRITICAL_FLOOR = 1e-6
FD_STEP = 1e-5
FD_AGREEMENT = 1e-3
ORACLE_RADIUS = 0.5
ORACLE_POINTS = 256
MAX_RUSCHEWEYH_ORDER = 4
MAX_COEFF_INDEX = 64
MAX_POLYDISK_VARS = 4
MAX_PESCHL_VARS = 3


def _interior_value(v, what="f"):
    v = complex(v)
    if abs(v) >= 1.0:
        raise BoundaryError(f"|{what}| = {abs(v)} >= 1")
    return v


def _describe(f):
    try:
        return f.to_dict()
    except AttributeError:
        return repr(f)


def schwarz_pick_two_point(f, w1, w2, tol=FEASIBILITY_TOL):
    w1, w2 = disk_point(w1), disk_point(w2)
    if w1 == w2:
        raise SeparationError("the two points must differ")
    f1, f2 = _interior_value(f(w1)), _interior_value(f(w2))
    return InequalityReport(
        "schwarz-pick",
        pseudo_hyperbolic_distance(f1, f2),
        pseudo_hyperbolic_distance(w1, w2),
        tolerance=tol,
        context={"points": [w1, w2]},
    )


def schwarz_pick_derivative(f, w, tol=FEASIBILITY_TOL):
    w = disk_point(w)
    _interior_value(f(w))
    d1 = confluent_hyperbolic_difference(f, w)
    return InequalityReport("schwarz-pick-derivative", abs(d1), 1.0, tolerance=tol,
                            context={"point": w})


def _separated(points):
    pts = [disk_point(p) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < SEPARATION_FLOOR:
                raise SeparationError(f"points {i + 1} and {j + 1} are closer than {SEPARATION_FLOOR:g}")
    return pts


def _collide(values):
    return any(abs(values[i] - values[j]) < COLLISION_FLOOR
               for i in range(len(values)) for j in range(i + 1, len(values)))


def beardon_minda(f, w1, w2, w3, tol=1e-9):
    """rho(f*(w1, w2), f*(w3, w2)) <= rho(w1, w3).

    When f takes equal values at two of the points the statement is vacuous
    and the report holds trivially.  When f* is unimodular (f is a disk
    automorphism) the left side is the 0/0 limit; it is reported equal to the
    right side.
    """
    w1, w2, w3 = _separated([w1, w2, w3])
    fv = [_interior_value(f(w)) for w in (w1, w2, w3)]
    rhs = pseudo_hyperbolic_distance(w1, w3)
    ctx = {"points": [w1, w2, w3]}
    if _collide(fv):
        return InequalityReport("beardon-minda", 0.0, rhs, tolerance=tol,
                                context={**ctx, "trivial": True})
    a = hyperbolic_divided_difference(f, w1, w2)
    b = hyperbolic_divided_difference(f, w3, w2)
    if max(abs(a), abs(b)) >= 1.0 - UNIMODULAR_BAND:
        return InequalityReport("beardon-minda", rhs, rhs, tolerance=tol,
                                context={**ctx, "automorphism": True})
    return InequalityReport("beardon-minda", pseudo_hyperbolic_distance(a, b), rhs,
                            tolerance=tol, context=ctx)


def bm_proof_identity_check(f, w1, w2, w3):
    """Largest deviation in the two algebraic identities behind the matrix proof:

        C_i = |1 - conj(f2) f_i|^2 (1 - |f*(w_i, w2)|^2),               i = 1, 3
        (1 - |f2|^2) A + B = (f*_1 - f*_3)(1 - conj(f2) f1)(1 - conj(f2) f3)
    """
    w1, w2, w3 = _separated([w1, w2, w3])
    f1, f2, f3 = (_interior_value(f(w)) for w in (w1, w2, w3))
    if _collide([f1, f2, f3]):
        return 0.0
    q12 = (f1 - f2) / (w1 - w2)
    q23 = (f2 - f3) / (w2 - w3)
    s2 = 1.0 - abs(w2) ** 2
    a_term = -w2.conjugate() * (f1 - f3) + s2 * (q12 - q23)
    b_term = f2.conjugate() * s2 * (w1 - w3) * q12 * q23
    star1 = hyperbolic_divided_difference(f, w1, w2)
    star3 = hyperbolic_divided_difference(f, w3, w2)
    dev = 0.0
    for fi, wi, star in ((f1, w1, star1), (f3, w3, star3)):
        ci = s_product(fi, f2) - s_product(wi, w2) * abs((fi - f2) / (wi - w2)) ** 2
        dev = max(dev, abs(ci - abs(1.0 - f2.conjugate() * fi) ** 2 * (1.0 - abs(star) ** 2)))
    lhs = (1.0 - abs(f2) ** 2) * a_term + b_term
    rhs = (star1 - star3) * (1.0 - f2.conjugate() * f1) * (1.0 - f2.conjugate() * f3)
    return float(max(dev, abs(lhs - rhs)))


@dataclass
class BridgeResult:
    slack_14: float
    scaled_gap: float
    residual: float
    report: InequalityReport


def bm_matrix_bridge(f, w1, w2, w3):
    """Compare the condition-(14) slack of f(T3) with the scalar inequality.

    With E = |w1-w3|^2 S(f*1, f*3) - S(w1, w3) |f*1 - f*3|^2 (same sign as the
    Beardon-Minda slack), the identity

        slack_14(f(T3)) |w1 - w3|^2 = |1 - conj(f2) f1|^2 |1 - conj(f2) f3|^2 E

    holds; ``residual`` is its absolute defect.
    """
    w1, w2, w3 = _separated([w1, w2, w3])
    t3 = model_matrix([w1, w2, w3]).matrix
    slack = criterion_from_matrix(apply_to_triangular(f, t3)).conditions["cond_14"]
    report = beardon_minda(f, w1, w2, w3)
    f1, f2, f3 = (complex(f(w)) for w in (w1, w2, w3))
    if report.context.get("trivial") or report.context.get("automorphism"):
        return BridgeResult(slack, 0.0, 0.0, report)
    a = hyperbolic_divided_difference(f, w1, w2)
    b = hyperbolic_divided_difference(f, w3, w2)
    e = abs(w1 - w3) ** 2 * s_product(a, b) - s_product(w1, w3) * abs(a - b) ** 2
    k = abs(1.0 - f2.conjugate() * f1) ** 2 * abs(1.0 - f2.conjugate() * f3) ** 2
    scaled = k * e
    return BridgeResult(slack, scaled, abs(slack * abs(w1 - w3) ** 2 - scaled), report)


@dataclass(frozen=True)
class PeschlDerivatives:
    d1: complex
    d2: complex


def peschl(f, w):
    """Closed-form D1 and D2 at w."""
    w = disk_point(w)
    j = f.jet(w, 2)
    fw = _interior_value(j[0])
    f1, f2 = j[1], 2.0 * j[2]
    s = 1.0 - abs(w) ** 2
    big_s = 1.0 - abs(fw) ** 2
    d1 = s * f1 / big_s
    d2 = s * s / big_s * (f2 - 2.0 * w.conjugate() * f1 / s + 2.0 * fw.conjugate() * f1 * f1 / big_s)
    return PeschlDerivatives(complex(d1), complex(d2))


def normalized_composition(f, w):
    """g(z) = (f(phi(z)) - f(w)) / (1 - conj(f(w)) f(phi(z))), phi(z) = (z + w)/(1 + conj(w) z)."""
    w = disk_point(w)
    fw = _interior_value(f(w))

    def g(z):
        u = f((z + w) / (1.0 + w.conjugate() * z))
        return (u - fw) / (1.0 - fw.conjugate() * u)

    return g


def peschl_oracle(f, w, radius=ORACLE_RADIUS, points=ORACLE_POINTS):
    """D1, D2 from the DFT expansion of the normalized composition."""
    c = taylor_coefficients(normalized_composition(f, w), 3, radius=radius, points=points)
    return PeschlDerivatives(complex(c[1]), complex(2.0 * c[2]))


def gamma(f, z):
    j = f.jet(z, 1)
    return (1.0 - abs(z) ** 2) * abs(j[1]) / (1.0 - abs(j[0]) ** 2)


def wirtinger_gamma(f, w, h=FD_STEP):
    """d Gamma / d w by central differences: (d/dx - i d/dy) / 2."""
    dx = (gamma(f, w + h) - gamma(f, w - h)) / (2 * h)
    dy = (gamma(f, w + 1j * h) - gamma(f, w - 1j * h)) / (2 * h)
    return 0.5 * (dx - 1j * dy)


def yamashita(f, w, tol=1e-9):
    """|D2| <= 2 (1 - |D1|^2), with a finite-difference check of the
    equivalent form |dGamma/dw| <= (1 - Gamma^2) / (1 - |w|^2)."""
    w = disk_point(w)
    p = peschl(f, w)
    ctx = {"point": w}
    if abs(f.jet(w, 1)[1]) > CRITICAL_FLOOR:
        fd = (1.0 - abs(w) ** 2) * abs(wirtinger_gamma(f, w))
        gap = abs(fd - abs(p.d2) / 2.0)
        ctx.update(wirtinger=fd, wirtinger_gap=gap, wirtinger_ok=gap <= FD_AGREEMENT)
    else:
        ctx.update(wirtinger_skipped="critical point of f")
    return InequalityReport("yamashita", abs(p.d2), 2.0 * (1.0 - abs(p.d1) ** 2), tolerance=tol,
                            context=ctx)


def _multi_point(f, a):
    if not isinstance(f, MultiSchurFunction):
        raise DomainError("expected a MultiSchurFunction")
    pt = as_point(a, f.n_vars)
    for z in pt:
        disk_point(z)
    return pt


def polydisk_proof_matrices(a, b):
    """T_i = [[a_i, d (a_i - b_i)], [0, b_i]] with d = min_i sqrt(S(a_i, b_i)) / |a_i - b_i|.

    Coordinates with a_i = b_i contribute +inf to the minimum.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    ratios = [math.sqrt(s_product(x, y)) / abs(x - y) for x, y in zip(a, b) if x != y]
    if not ratios:
        raise SeparationError("a and b coincide")
    d = min(ratios)
    mats = [np.array([[x, d * (x - y)], [0, y]], dtype=complex) for x, y in zip(a, b)]
    return mats, d


def polydisk_tuple_check(p, a, b):
    """Deviation of p(T) from [[p(a), d(p(a) - p(b))], [0, p(b)]] and ||p(T)||."""
    mats, d = polydisk_proof_matrices(a, b)
    pt = poly_eval_tuple(p, mats)
    pa, pb = p.value(a), p.value(b)
    expected = np.array([[pa, d * (pa - pb)], [0, pb]])
    return float(np.max(np.abs(pt - expected))), pt


def polydisk_schwarz_pick(f, a, b, tol=FEASIBILITY_TOL):
    a, b = _multi_point(f, a), _multi_point(f, b)
    if f.n_vars > MAX_POLYDISK_VARS:
        raise DomainError(f"at most {MAX_POLYDISK_VARS} variables")
    if np.all(a == b):
        raise SeparationError("a and b coincide")
    fa, fb = _interior_value(f.value(a)), _interior_value(f.value(b))
    rhs = max(pseudo_hyperbolic_distance(x, y) for x, y in zip(a, b))
    ctx = {"a": a, "b": b}
    if isinstance(f, MultiPolynomial):
        dev, pt = polydisk_tuple_check(f, a, b)
        ctx.update(tuple_deviation=dev)
    return InequalityReport("polydisk", pseudo_hyperbolic_distance(fa, fb), rhs, tolerance=tol,
                            context=ctx)


def polydisk_derivative(f, a, tol=FEASIBILITY_TOL):
    a = _multi_point(f, a)
    fa = _interior_value(f.value(a))
    grad = f.gradient(a)
    lhs = float(np.sum((1.0 - np.abs(a) ** 2) * np.abs(grad)))
    return InequalityReport("polydisk-derivative", lhs, 1.0 - abs(fa) ** 2, tolerance=tol,
                            context={"a": a})


def peschl_multi(f, w):
    """D1 and D2 of the normalized composition along the diagonal t -> (t, ..., t).

    D2 = sum_j d^2 g / dz_j^2 + 2 sum_{j<k} d^2 g / dz_j dz_k, where, with
    s_j = 1 - |w_j|^2 and S = 1 - |f(w)|^2,

        d^2 g / dz_j^2    = s_j^2 / S [f_jj - 2 conj(w_j) f_j / s_j + 2 conj(f) f_j^2 / S]
        d^2 g / dz_j dz_k = s_j s_k / S [f_jk + 2 conj(f) f_j f_k / S].
    """
    w = _multi_point(f, w)
    if f.n_vars > MAX_PESCHL_VARS:
        raise DomainError(f"at most {MAX_PESCHL_VARS} variables")
    fw = _interior_value(f.value(w))
    grad = f.gradient(w)
    hess = f.hessian(w)
    s = 1.0 - np.abs(w) ** 2
    big_s = 1.0 - abs(fw) ** 2
    fc = fw.conjugate()
    d1 = np.sum(s * grad) / big_s
    d2 = 0j
    n = f.n_vars
    for j in range(n):
        d2 += s[j] ** 2 / big_s * (hess[j, j] - 2.0 * w[j].conjugate() * grad[j] / s[j]
                                   + 2.0 * fc * grad[j] ** 2 / big_s)
        for k in range(j + 1, n):
            d2 += 2.0 * s[j] * s[k] / big_s * (hess[j, k] + 2.0 * fc * grad[j] * grad[k] / big_s)
    return PeschlDerivatives(complex(d1), complex(d2))


def peschl_multi_oracle(f, w, radius=ORACLE_RADIUS, points=ORACLE_POINTS):
    """Expand h(t) = g(t, ..., t) by DFT; D1 = h'(0), D2 = h''(0)."""
    w = _multi_point(f, w)
    fw = _interior_value(f.value(w))
    t = radius * np.exp(2j * np.pi * np.arange(points) / points)
    pts = (t[:, None] + w[None, :]) / (1.0 + np.conj(w)[None, :] * t[:, None])
    u = np.array([f.value(p) for p in pts])
    h = (u - fw) / (1.0 - fw.conjugate() * u)
    c = np.fft.fft(h) / points
    return PeschlDerivatives(complex(c[1] / radius), complex(2.0 * c[2] / radius ** 2))


def peschl_multi_inequality(f, w, tol=1e-8):
    p = peschl_multi(f, w)
    return InequalityReport("peschl-multi", abs(p.d2), 2.0 * (1.0 - abs(p.d1) ** 2), tolerance=tol,
                            context={"point": as_point(w, f.n_vars)})


def coefficient_inequalities(f, n, k, tol=FEASIBILITY_TOL, coeffs=None):
    """Wiener's bound, the three-term coefficient inequality and its corollaries.

    Returns [wiener, three-term, improved-wiener] plus, when |a_0| <= 1e-12,
    the normalized form |a_{n+k}| <= sqrt(1 - |a_n|^2) sqrt(1 - |a_k|^2).
    """
    n, k = int(n), int(k)
    if n < 1 or k < 1 or n + k > MAX_COEFF_INDEX:
        raise DomainError(f"need n, k >= 1 and n + k <= {MAX_COEFF_INDEX}")
    count = max(n + k, 2 * n) + 1
    a = np.asarray(coeffs if coeffs is not None else taylor_coefficients(f, count))
    a0, an, ak, ank, a2n = a[0], a[n], a[k], a[n + k], a[2 * n]
    m = 1.0 - abs(a0) ** 2
    ctx = {"n": n, "k": k}
    reports = [
        InequalityReport("wiener", abs(ak), m, tolerance=tol, context=ctx),
        InequalityReport(
            "coefficient-three-term",
            abs(ank * m + an * ak * a0.conjugate()) ** 2,
            (m * m - abs(an) ** 2) * (m * m - abs(ak) ** 2),
            tolerance=tol,
            context=ctx,
        ),
    ]
    # for |a0| = 1 every higher coefficient vanishes and the quotient is 0/0
    improved = abs(a2n * m + an * an * a0.conjugate()) / (2.0 * m) if m > 1e-14 else 0.0
    reports.append(InequalityReport("wiener-improved", improved, m - abs(an), tolerance=tol, context=ctx))
    if abs(a0) <= 1e-12:
        rhs = math.sqrt(max(0.0, 1.0 - abs(an) ** 2)) * math.sqrt(max(0.0, 1.0 - abs(ak) ** 2))
        reports.append(InequalityReport("coefficient-normalized", abs(ank), rhs, tolerance=tol, context=ctx))
    return reports


def ruscheweyh(f, z, k, tol=FEASIBILITY_TOL):
    """|f^(k)(z)| <= k! (1 - |f(z)|^2) / ((1 - |z|)^k (1 + |z|)); tolerance relative to the rhs."""
    z = disk_point(z)
    k = int(k)
    if not 1 <= k <= MAX_RUSCHEWEYH_ORDER:
        raise DomainError(f"order must lie in [1, {MAX_RUSCHEWEYH_ORDER}]")
    j = f.jet(z, k)
    fz = _interior_value(j[0])
    lhs = abs(j[k]) * math.factorial(k)
    r = abs(z)
    rhs = math.factorial(k) * (1.0 - abs(fz) ** 2) / ((1.0 - r) ** k * (1.0 + r))
    return InequalityReport("ruscheweyh", lhs, rhs, tolerance=tol * max(1.0, rhs),
                            context={"point": z, "k": k})


__all__ = [
    "EQUALITY_TOL",
    "BridgeResult",
    "PeschlDerivatives",
    "beardon_minda",
    "bm_matrix_bridge",
    "bm_proof_identity_check",
    "coefficient_inequalities",
    "gamma",
    "normalized_composition",
    "peschl",
    "peschl_multi",
    "peschl_multi_inequality",
    "peschl_multi_oracle",
    "peschl_oracle",
    "polydisk_derivative",
    "polydisk_proof_matrices",
    "polydisk_schwarz_pick",
    "polydisk_tuple_check",
    "ruscheweyh",
    "schwarz_pick_derivative",
    "schwarz_pick_two_point",
    "wirtinger_gamma",
    "yamashita",
]
