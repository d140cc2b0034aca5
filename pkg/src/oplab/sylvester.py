"""Sylvester equations AX - XB = Y and the operator-valued Schwarz-Pick and
Beardon-Minda statements built on them."""

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import matrix_function
from .completion import assemble_3x3, block_criterion_3x3, parrott_extract
from .errors import ContourError, DomainError, GapError, NotContractionError, SingularityError
from .linalg import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    defect,
    defect_adjoint,
    hermitian_sqrt,
    operator_norm,
    spectrum,
)
from .report import InequalityReport

MIN_GAP = 1e-6
CONTOUR_GAP = 0.1
MAX_BLOCK = 5
COND_LIMIT = 1e14
QUAD_TARGET = 1e-13
RADIUS_SCAN = 64


def spectral_gap(a, b):
    la, lb = spectrum(a), spectrum(b)
    return float(np.min(np.abs(la[:, None] - lb[None, :])))


@dataclass
class SylvesterProblem:
    A: np.ndarray
    B: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        self.A = as_matrix(self.A, square=True)
        self.B = as_matrix(self.B, square=True)
        self.Y = as_matrix(self.Y)
        if max(self.A.shape[0], self.B.shape[0]) > MAX_BLOCK:
            raise DomainError(f"Sylvester blocks are limited to {MAX_BLOCK}x{MAX_BLOCK}")
        if self.Y.shape != (self.A.shape[0], self.B.shape[0]):
            raise DomainError(f"Y must have shape {(self.A.shape[0], self.B.shape[0])}")

    @property
    def spectral_gap(self):
        return spectral_gap(self.A, self.B)

    def residual(self, x):
        return float(np.max(np.abs(self.A @ x - x @ self.B - self.Y)))


def _problem(prob_or_a, b=None, y=None):
    if isinstance(prob_or_a, SylvesterProblem):
        return prob_or_a
    return SylvesterProblem(prob_or_a, b, y)


def solve_sylvester(prob, b=None, y=None):
    """Solve AX - XB = Y as the Kronecker system (I kron A - B^T kron I) vec X = vec Y."""
    prob = _problem(prob, b, y)
    gap = prob.spectral_gap
    if gap < MIN_GAP:
        raise GapError(f"spectral gap {gap:.3e} below {MIN_GAP:g}")
    n, m = prob.Y.shape
    k = np.kron(np.eye(m), prob.A) - np.kron(prob.B.T, np.eye(n))
    if np.linalg.cond(k) > COND_LIMIT:
        raise SingularityError("Kronecker system is numerically singular despite the spectral gap")
    x = np.linalg.solve(k, prob.Y.reshape(-1, order="F"))
    return x.reshape((n, m), order="F")


@dataclass
class Contour:
    center: complex
    radius: float
    encloses: str
    error_estimate: float


def _circle(inner, outer, gap):
    """Circle around ``inner`` (center = centroid) avoiding ``outer``."""
    c = complex(np.mean(inner))
    r_in = float(np.max(np.abs(inner - c)))
    d_out = float(np.min(np.abs(outer - c)))
    lo, hi = r_in + gap / 4.0, d_out - gap / 4.0
    if lo > hi:
        return None
    best = None
    for r in np.linspace(lo, hi, RADIUS_SCAN):
        est = max(r_in / r, r / d_out)
        if best is None or est < best[1]:
            best = (r, est)
        if est ** 256 <= QUAD_TARGET:
            return c, float(r), est
    return c, float(best[0]), best[1]


def find_contour(a, b):
    la, lb = spectrum(a), spectrum(b)
    gap = float(np.min(np.abs(la[:, None] - lb[None, :])))
    hit = _circle(la, lb, gap)
    if hit is not None:
        return Contour(hit[0], hit[1], "A", hit[2])
    # winding 1 about sigma(B) and 0 about sigma(A) yields -X
    hit = _circle(lb, la, gap)
    if hit is not None:
        return Contour(hit[0], hit[1], "B", hit[2])
    raise ContourError("no centroid circle separates the two spectra")


def solve_sylvester_contour(prob, quad_points=256, b=None, y=None):
    """X = (1 / 2 pi i) \\oint (A - xi)^{-1} Y (B - xi)^{-1} d xi by the trapezoidal rule."""
    prob = _problem(prob, b, y)
    gap = prob.spectral_gap
    if gap < CONTOUR_GAP:
        raise GapError(f"spectral gap {gap:.3e} below {CONTOUR_GAP:g} needed for quadrature")
    if quad_points < 8:
        raise DomainError("need at least 8 quadrature points")
    contour = find_contour(prob.A, prob.B)
    n, m = prob.Y.shape
    ia, ib = np.eye(n), np.eye(m)
    acc = np.zeros((n, m), dtype=complex)
    for k in range(quad_points):
        e = np.exp(2j * math.pi * k / quad_points)
        xi = contour.center + contour.radius * e
        left = np.linalg.solve(prob.A - xi * ia, prob.Y)
        right = np.linalg.solve((prob.B - xi * ib).T, left.T).T
        acc += right * (contour.radius * e)
    x = acc / quad_points
    return x if contour.encloses == "A" else -x


def _check_contraction(m, name, tol):
    norm = operator_norm(m)
    if norm > 1.0 + tol:
        raise NotContractionError(f"||{name}|| = {norm!r} > 1")
    return norm


@dataclass
class OperatorWitness:
    report: InequalityReport
    witnesses: list
    solutions: list
    residuals: dict = field(default_factory=dict)


def operator_schwarz_pick(w1, w2, v, f, tol=DEFAULT_TOL, witness_tol=1e-9):
    """Solve W1 X - X W2 = D_{W1*} V D_{W2} and certify
    f(W1) X - X f(W2) = D_{f(W1)*} Y D_{f(W2)} with a contraction Y."""
    w1, w2, v = as_matrix(w1, square=True), as_matrix(w2, square=True), as_matrix(v)
    for m, name in ((w1, "W1"), (w2, "W2"), (v, "V")):
        _check_contraction(m, name, tol)
    rhs = defect_adjoint(w1, tol) @ v @ defect(w2, tol)
    x = solve_sylvester(SylvesterProblem(w1, w2, rhs))
    fw1, fw2 = matrix_function(f, w1), matrix_function(f, w2)
    m = fw1 @ x - x @ fw2
    n1 = w1.shape[0]
    block = np.block([[fw1, m], [np.zeros((w2.shape[0], n1), dtype=complex), fw2]])
    block_norm = operator_norm(block)
    if block_norm > 1.0 + witness_tol:
        raise NotContractionError(f"||f(T)|| = {block_norm!r} exceeds 1")
    wit = parrott_extract(block, n1, n1, tol=witness_tol)
    y = wit.W0
    recon = defect_adjoint(fw1, witness_tol) @ y @ defect(fw2, witness_tol)
    residuals = {
        "sylvester": float(np.max(np.abs(w1 @ x - x @ w2 - rhs))),
        "witness": float(np.max(np.abs(recon - m))),
    }
    report = InequalityReport("operator-schwarz-pick", operator_norm(y), 1.0, tolerance=witness_tol,
                              context={"block_norm": block_norm, **residuals})
    return OperatorWitness(report, [y], [x], residuals)


def beardon_minda_blocks(w1, w2, w3, v1, v2, v3, tol=DEFAULT_TOL):
    """A1, A2 and B of the contractive block matrix parametrized by V1, V2, V3."""
    d1s, d2, d2s, d3 = defect_adjoint(w1, tol), defect(w2, tol), defect_adjoint(w2, tol), defect(w3, tol)
    a1 = d1s @ v1 @ d2
    a2 = d2s @ v2 @ d3
    left = hermitian_sqrt(d1s @ (np.eye(w1.shape[0]) - v1 @ adjoint(v1)) @ d1s, tol=4 * tol)
    right = hermitian_sqrt(d3 @ (np.eye(w3.shape[0]) - adjoint(v2) @ v2) @ d3, tol=4 * tol)
    b = left @ v3 @ right - d1s @ v1 @ adjoint(w2) @ v2 @ d3
    return a1, a2, b


def operator_beardon_minda(w1, w2, w3, v1, v2, v3, f, tol=DEFAULT_TOL, witness_tol=1e-9):
    ws = [as_matrix(w, square=True) for w in (w1, w2, w3)]
    vs = [as_matrix(v) for v in (v1, v2, v3)]
    for m, name in zip(ws + vs, ("W1", "W2", "W3", "V1", "V2", "V3")):
        _check_contraction(m, name, tol)
    w1, w2, w3 = ws
    v1, v2, v3 = vs
    a1, a2, b = beardon_minda_blocks(w1, w2, w3, v1, v2, v3, tol)
    x1 = solve_sylvester(SylvesterProblem(w1, w2, a1))
    x2 = solve_sylvester(SylvesterProblem(w2, w3, a2))
    # the (1,3) block of T = U^{-1} diag(W) U with U = [[I, X1, X3], [0, I, X2], [0, 0, I]]
    x3 = solve_sylvester(SylvesterProblem(w1, w3, b + x1 @ w2 @ x2 - x1 @ x2 @ w3))
    f1, f2, f3 = (matrix_function(f, w) for w in ws)
    m1 = f1 @ x1 - x1 @ f2
    m2 = f2 @ x2 - x2 @ f3
    m3 = f1 @ x3 - x1 @ f2 @ x2 + (x1 @ x2 - x3) @ f3
    ft = assemble_3x3(f1, f2, f3, m1, m2, m3)
    ft_norm = operator_norm(ft)
    if ft_norm > 1.0 + witness_tol:
        raise NotContractionError(f"||f(T)|| = {ft_norm!r} exceeds 1")
    verdict = block_criterion_3x3(f1, f2, f3, m1, m2, m3, tol=witness_tol)
    residuals = {
        "sylvester_1": float(np.max(np.abs(w1 @ x1 - x1 @ w2 - a1))),
        "sylvester_2": float(np.max(np.abs(w2 @ x2 - x2 @ w3 - a2))),
        "sylvester_3": float(np.max(np.abs(w1 @ x3 - x3 @ w3 - (b + x1 @ w2 @ x2 - x1 @ x2 @ w3)))),
        "factorization": float(np.max(np.abs(matrix_function(f, assemble_3x3(w1, w2, w3, a1, a2, b)) - ft))),
    }
    ys = [verdict.V1, verdict.V2, verdict.V3]
    if verdict.is_contraction:
        y1, y2, y3 = ys
        d1s, d2, d2s, d3 = (defect_adjoint(f1, witness_tol), defect(f2, witness_tol),
                            defect_adjoint(f2, witness_tol), defect(f3, witness_tol))
        left = hermitian_sqrt(d1s @ (np.eye(f1.shape[0]) - y1 @ adjoint(y1)) @ d1s, tol=4 * witness_tol)
        right = hermitian_sqrt(d3 @ (np.eye(f3.shape[0]) - adjoint(y2) @ y2) @ d3, tol=4 * witness_tol)
        rec3 = x1 @ f2 @ x2 - x1 @ x2 @ f3 + left @ y3 @ right - d1s @ y1 @ adjoint(f2) @ y2 @ d3
        residuals["witness_1"] = float(np.max(np.abs(d1s @ y1 @ d2 - m1)))
        residuals["witness_2"] = float(np.max(np.abs(d2s @ y2 @ d3 - m2)))
        residuals["witness_3"] = float(np.max(np.abs(rec3 - (f1 @ x3 - x3 @ f3))))
    lhs = max(operator_norm(y) for y in ys if y is not None)
    if not verdict.is_contraction:
        lhs = max(lhs, 1.0 + 2 * witness_tol)
    report = InequalityReport("operator-beardon-minda", lhs, 1.0, tolerance=witness_tol,
                              context={"f_T_norm": ft_norm, "failing_equation": verdict.failing_equation,
                                       **residuals})
    return OperatorWitness(report, ys, [x1, x2, x3], residuals)
