"""Small dense complex-matrix kernels.

Matrices are plain complex numpy arrays with at most 16 rows and columns.
Singular values come from a one-sided cyclic Jacobi iteration written here;
eigen-decompositions of Hermitian and general matrices are delegated to
numpy.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, NegativityError, NotContractionError

MAX_DIM = 16
DEFAULT_TOL = 1e-10
PINV_CUTOFF = 1e-12
HERMITIAN_TOL = 1e-12
JACOBI_EPS = 1e-15
JACOBI_MAX_SWEEPS = 60


def as_matrix(m, square=False):
    """Validate and copy into a 2-d complex array."""
    a = np.array(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DomainError(f"expected a matrix, got shape {a.shape}")
    r, c = a.shape
    if not (1 <= r <= MAX_DIM and 1 <= c <= MAX_DIM):
        raise DomainError(f"matrix dimensions must lie in [1, {MAX_DIM}], got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    if square and r != c:
        raise DomainError(f"square matrix required, got {a.shape}")
    return a


def adjoint(m):
    return np.conj(np.asarray(m)).T


def _jacobi(a, want_v=False):
    """One-sided complex Jacobi on the columns of ``a`` (rows >= cols).

    Returns (rotated columns, V) with a @ V = rotated and the rotated columns
    mutually orthogonal; their norms are the singular values.
    """
    g = a.copy()
    n = g.shape[1]
    v = np.eye(n, dtype=complex) if want_v else None
    # columns below this energy cannot move any singular value by more than
    # JACOBI_EPS * ||a||_F, so rotating against them is skipped
    floor = (JACOBI_EPS * float(np.linalg.norm(g))) ** 2
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp, gq = g[:, p], g[:, q]
                alpha = float(np.vdot(gp, gp).real)
                beta = float(np.vdot(gq, gq).real)
                gamma = np.vdot(gp, gq)
                mod = abs(gamma)
                if mod == 0.0 or mod <= JACOBI_EPS * math.sqrt(alpha * beta) or min(alpha, beta) <= floor:
                    continue
                rotated = True
                phase = gamma / mod
                zeta = (beta - alpha) / (2.0 * mod)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                # 2x2 unitary J = [[c, s e^{i phi}], [-s e^{-i phi}, c]] applied on the right
                new_p = c * gp - s * np.conj(phase) * gq
                new_q = s * phase * gp + c * gq
                g[:, p], g[:, q] = new_p, new_q
                if want_v:
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - s * np.conj(phase) * vq
                    v[:, q] = s * phase * vp + c * vq
        if not rotated:
            return g, v
    raise ConvergenceError(f"Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def svd(m):
    """Thin SVD (U, s, Vh) with s descending, via one-sided Jacobi."""
    a = as_matrix(m)
    flip = a.shape[0] < a.shape[1]
    if flip:
        a = adjoint(a)
    g, v = _jacobi(a, want_v=True)
    s = np.linalg.norm(g, axis=0)
    order = np.argsort(-s, kind="stable")
    s, g, v = s[order], g[:, order], v[:, order]
    u = np.zeros_like(g)
    nz = s > 0
    u[:, nz] = g[:, nz] / s[nz]
    if flip:
        # a^H = U s V^H  =>  a = V s U^H
        return v, s, adjoint(u)
    return u, s, adjoint(v)


def singular_values(m):
    a = as_matrix(m)
    if a.shape[0] < a.shape[1]:
        a = adjoint(a)
    g, _ = _jacobi(a)
    return np.sort(np.linalg.norm(g, axis=0))[::-1]


def operator_norm(m):
    """Largest singular value."""
    return float(singular_values(m)[0])


def pinv(m, cutoff=PINV_CUTOFF):
    """Moore-Penrose inverse; singular values <= cutoff are treated as zero."""
    u, s, vh = svd(m)
    inv = np.zeros_like(s)
    keep = s > cutoff
    inv[keep] = 1.0 / s[keep]
    return adjoint(vh) @ (inv[:, None] * adjoint(u))


def is_upper_triangular(m):
    a = np.asarray(m)
    return a.shape[0] == a.shape[1] and not np.any(np.tril(a, -1))


def spectrum(m):
    """Eigenvalues with multiplicity; exact diagonal for triangular input."""
    a = as_matrix(m, square=True)
    if is_upper_triangular(a) or is_upper_triangular(a.T):
        return np.diag(a).copy()
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc


def hermitian_sqrt(h, tol=DEFAULT_TOL):
    """Positive semidefinite square root; eigenvalues in [-tol, 0) clamp to 0."""
    a = as_matrix(h, square=True)
    if np.max(np.abs(a - adjoint(a))) > HERMITIAN_TOL * max(1.0, np.max(np.abs(a))):
        raise DomainError("matrix is not Hermitian")
    a = 0.5 * (a + adjoint(a))
    w, q = np.linalg.eigh(a)
    if w[0] < -tol:
        raise NegativityError(f"eigenvalue {w[0]:.3e} below -{tol:g}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return (q * w) @ adjoint(q)


def _defect_of(gram, tol):
    n = gram.shape[0]
    # a norm of 1 + tol makes 1 - ||T||^2 about -2 tol
    return hermitian_sqrt(np.eye(n) - gram, tol=2.0 * tol + tol * tol)


def defect(t, tol=DEFAULT_TOL):
    """D_T = (I - T^*T)^{1/2}."""
    a = as_matrix(t)
    norm = operator_norm(a)
    if norm > 1.0 + tol:
        raise NotContractionError(f"||T|| = {norm!r} > 1 + {tol:g}")
    return _defect_of(adjoint(a) @ a, tol)


def defect_adjoint(t, tol=DEFAULT_TOL):
    """D_{T^*} = (I - T T^*)^{1/2}."""
    return defect(adjoint(as_matrix(t)), tol)


@dataclass(frozen=True)
class ContractionVerdict:
    is_contraction: bool
    norm: float
    margin: float
    tolerance: float

    def to_dict(self):
        return {
            "is_contraction": self.is_contraction,
            "norm": self.norm,
            "margin": self.margin,
            "tolerance": self.tolerance,
        }


def is_contraction(m, tolerance=DEFAULT_TOL):
    norm = operator_norm(m)
    return ContractionVerdict(norm <= 1.0 + tolerance, norm, 1.0 - norm, float(tolerance))


def matrix_to_dict(m):
    a = as_matrix(m)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_dict(d):
    try:
        rows, cols, entries = int(d["rows"]), int(d["cols"]), d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix record: {exc}") from exc
    if rows * cols != len(entries):
        raise DomainError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
    try:
        vals = [complex(float(re), float(im)) for re, im in entries]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"entries must be [re, im] pairs: {exc}") from exc
    return as_matrix(np.array(vals, dtype=complex).reshape(rows, cols))


def matrix_to_json(m):
    return json.dumps(matrix_to_dict(m))


def matrix_from_json(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    return matrix_from_dict(d)
