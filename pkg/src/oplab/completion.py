"""Completion machinery: Douglas factorization, Parrott completion and the
3x3 upper-triangular contraction criteria (scalar and block form).

Every factor returned here is the *minimal* one, i.e. the pseudo-inverse
solution, which kills the orthogonal complement of the relevant range.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InfeasibleError, NotContractionError, StrictnessError
from .linalg import (
    DEFAULT_TOL,
    PINV_CUTOFF,
    adjoint,
    as_matrix,
    defect,
    defect_adjoint,
    hermitian_sqrt,
    operator_norm,
    pinv,
)

BOUNDARY_THRESHOLD = 1e-9
STRICT_MARGIN = 1e-8
RECONSTRUCTION_TOL = 1e-9


def douglas_minimal(a, b, c=1.0, tol=DEFAULT_TOL):
    """Minimal C0 with B = C0 A and ||C0|| <= c.

    Solvable iff B^*B <= c^2 A^*A; the minimal solution is B A^+ and
    vanishes on range(A)^perp.  The eigenvalue test is relative to the size
    of c^2 A^*A, since roundoff in the Gram matrices scales with it.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise DomainError(f"A and B need the same column count, got {a.shape} and {b.shape}")
    gap = c * c * adjoint(a) @ a - adjoint(b) @ b
    gap = 0.5 * (gap + adjoint(gap))
    low = float(np.linalg.eigvalsh(gap)[0])
    scale = max(1.0, c * c * operator_norm(a) ** 2)
    if low < -tol * scale:
        raise InfeasibleError(f"B*B <= c^2 A*A fails: smallest eigenvalue {low:.3e}")
    return b @ pinv(a)


def _stack_check(m, tol, what):
    norm = operator_norm(m)
    if norm > 1.0 + tol:
        raise NotContractionError(f"{what} has norm {norm!r} > 1 + {tol:g}")


def parrott_column_factor(a, b, tol=DEFAULT_TOL):
    """Minimal V0 with A = V0 D_B, for a contractive column [A; B]."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise DomainError("column blocks need the same number of columns")
    _stack_check(np.vstack([a, b]), tol, "column [A; B]")
    return a @ pinv(defect(b, tol))


def parrott_row_factor(a, b, tol=DEFAULT_TOL):
    """Minimal V0 with A = D_{B^*} V0, for a contractive row [A B]."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise DomainError("row blocks need the same number of rows")
    return adjoint(parrott_column_factor(adjoint(a), adjoint(b), tol))


def parrott_complete(a, c, d, w, tol=DEFAULT_TOL):
    """B = D_{Z0^*} W D_{Y0} - Z0 C^* Y0 makes [[A, B], [C, D]] a contraction.

    Z0 and Y0 are the minimal solutions of A = Z D_C and D = D_{C^*} Y.
    """
    a, c, d, w = (as_matrix(x) for x in (a, c, d, w))
    if operator_norm(w) > 1.0 + tol:
        raise NotContractionError("W must be a contraction")
    z0 = parrott_column_factor(a, c, tol)
    y0 = parrott_row_factor(d, c, tol)
    if w.shape != (a.shape[0], d.shape[1]):
        raise DomainError(f"W must have shape {(a.shape[0], d.shape[1])}, got {w.shape}")
    return defect_adjoint(z0, tol) @ w @ defect(y0, tol) - z0 @ adjoint(c) @ y0


@dataclass
class ParrottWitness:
    Y0: np.ndarray
    Z0: np.ndarray
    W0: np.ndarray
    reconstructed_B: np.ndarray

    @property
    def norms(self):
        return {k: operator_norm(getattr(self, k)) for k in ("Y0", "Z0", "W0")}


def split_blocks(t, row, col):
    t = as_matrix(t)
    if not (0 < row < t.shape[0] and 0 < col < t.shape[1]):
        raise DomainError("block split must leave every block nonempty")
    return t[:row, :col], t[:row, col:], t[row:, :col], t[row:, col:]


def parrott_extract(t, row, col, tol=DEFAULT_TOL):
    """Recover the minimal W0 behind B in T = [[A, B], [C, D]].

    ``row`` and ``col`` locate the split; W0 = D_{Z0^*}^+ (B + Z0 C^* Y0) D_{Y0}^+.
    """
    t = as_matrix(t)
    norm = operator_norm(t)
    if norm > 1.0 + tol:
        raise NotContractionError(f"block matrix has norm {norm!r} > 1 + {tol:g}")
    a, b, c, d = split_blocks(t, row, col)
    z0 = parrott_column_factor(a, c, tol)
    y0 = parrott_row_factor(d, c, tol)
    dz = defect_adjoint(z0, tol)
    dy = defect(y0, tol)
    w0 = pinv(dz) @ (b + z0 @ adjoint(c) @ y0) @ pinv(dy)
    rec = dz @ w0 @ dy - z0 @ adjoint(c) @ y0
    return ParrottWitness(y0, z0, w0, rec)


@dataclass
class Criterion3x3Verdict:
    branch: str
    conditions: dict
    is_contraction: bool
    tolerance: float
    alternate: dict = field(default_factory=dict)
    flagged: bool = False

    @property
    def failing(self):
        return [k for k, v in self.conditions.items() if v < -self.tolerance]

    def to_dict(self):
        return {
            "branch": self.branch,
            "conditions": dict(self.conditions),
            "is_contraction": self.is_contraction,
            "tolerance": self.tolerance,
            "flagged": self.flagged,
        }


def _interior_conditions(w1, w2, w3, a1, a2, b):
    d1, d2, d3 = (1.0 - abs(w) ** 2 for w in (w1, w2, w3))
    s1 = d1 * d2 - abs(a1) ** 2
    s2 = d2 * d3 - abs(a2) ** 2
    return {
        "diag_1": d1,
        "diag_2": d2,
        "diag_3": d3,
        "cond_13_1": s1,
        "cond_13_2": s2,
        "cond_14": s1 * s2 - abs(b * d2 + a1 * a2 * w2.conjugate()) ** 2,
    }


def _boundary_conditions(w1, w2, w3, a1, a2, b):
    d1, d2, d3 = (1.0 - abs(w) ** 2 for w in (w1, w2, w3))
    return {
        "diag_1": d1,
        "diag_2": d2,
        "diag_3": d3,
        "alpha_1_zero": -abs(a1) ** 2,
        "alpha_2_zero": -abs(a2) ** 2,
        "cond_17": d1 * d3 - abs(b) ** 2,
    }


def criterion_3x3(w1, w2, w3, a1, a2, b, tol=DEFAULT_TOL, boundary_threshold=BOUNDARY_THRESHOLD):
    """Decide whether [[w1, a1, b], [0, w2, a2], [0, 0, w3]] is a contraction.

    Diagonal entries outside the closed disk are accepted and simply fail
    their ``diag_i`` condition, so the test is total on C^6.  Within
    ``boundary_threshold`` of |w2| = 1 both branches are evaluated and a
    disagreement sets ``flagged``.
    """
    w1, w2, w3, a1, a2, b = (complex(x) for x in (w1, w2, w3, a1, a2, b))
    for x in (w1, w2, w3, a1, a2, b):
        if not np.isfinite(x):
            raise DomainError("entries must be finite")
    r2 = abs(w2)
    interior = _interior_conditions(w1, w2, w3, a1, a2, b)
    boundary = _boundary_conditions(w1, w2, w3, a1, a2, b)

    def ok(conds):
        return all(v >= -tol for v in conds.values())

    if r2 < 1.0 - boundary_threshold:
        return Criterion3x3Verdict("interior", interior, ok(interior), tol)
    if r2 <= 1.0 + boundary_threshold:
        flagged = ok(interior) != ok(boundary)
        return Criterion3x3Verdict("boundary", boundary, ok(boundary), tol,
                                   alternate=interior, flagged=flagged)
    return Criterion3x3Verdict("boundary", boundary, ok(boundary), tol)


def criterion_from_matrix(t, tol=DEFAULT_TOL):
    t = as_matrix(t, square=True)
    if t.shape != (3, 3) or np.any(np.tril(t, -1)):
        raise DomainError("criterion applies to 3x3 upper-triangular matrices only")
    return criterion_3x3(t[0, 0], t[1, 1], t[2, 2], t[0, 1], t[1, 2], t[0, 2], tol=tol)


@dataclass
class BlockVerdict:
    is_contraction: bool
    failing_equation: object
    V1: object = None
    V2: object = None
    V3: object = None
    norms: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "is_contraction": self.is_contraction,
            "failing_equation": self.failing_equation,
            "norms": dict(self.norms),
            "residuals": dict(self.residuals),
        }


def _two_sided(left_pinv, m, right_pinv, left, right):
    v = left_pinv @ m @ right_pinv
    res = float(np.max(np.abs(left @ v @ right - m))) if m.size else 0.0
    return v, res


def block_criterion_3x3(w1, w2, w3, a1, a2, b, tol=DEFAULT_TOL):
    """Contractivity of [[W1, A1, B], [0, W2, A2], [0, 0, W3]] via three
    successive minimal factorizations:

        A1 = D_{W1*} V1 D_{W2},   A2 = D_{W2*} V2 D_{W3},
        B  = L V3 R - D_{W1*} V1 W2^* V2 D_{W3},

    with L = [D_{W1*}(I - V1 V1^*) D_{W1*}]^{1/2} and
    R = [D_{W3}(I - V2^* V2) D_{W3}]^{1/2}.  The block matrix is a contraction
    iff each V_i solving its equation can be chosen contractive; the minimal
    (pseudo-inverse) solution is the one to test.
    """
    w1, w2, w3, a1, a2, b = (as_matrix(x) for x in (w1, w2, w3, a1, a2, b))
    for w in (w1, w2, w3):
        if w.shape[0] != w.shape[1]:
            raise DomainError("diagonal blocks must be square")
    n1, n2, n3 = w1.shape[0], w2.shape[0], w3.shape[0]
    if a1.shape != (n1, n2) or a2.shape != (n2, n3) or b.shape != (n1, n3):
        raise DomainError("off-diagonal block shapes do not match the diagonal blocks")
    norms = {f"W{i}": operator_norm(w) for i, w in enumerate((w1, w2, w3), 1)}
    for k, v in norms.items():
        if v > 1.0 + tol:
            raise NotContractionError(f"||{k}|| = {v!r} > 1")
    if norms["W2"] >= 1.0 - STRICT_MARGIN:
        raise StrictnessError(f"||W2|| = {norms['W2']!r} is not below 1 - {STRICT_MARGIN:g}")

    d1s = defect_adjoint(w1, tol)
    d2 = defect(w2, tol)
    d2s = defect_adjoint(w2, tol)
    d3 = defect(w3, tol)
    scale = lambda m: RECONSTRUCTION_TOL * max(1.0, float(np.max(np.abs(m))))  # noqa: E731
    residuals = {}

    def verdict(ok, idx, v1=None, v2=None, v3=None):
        for name, v in (("V1", v1), ("V2", v2), ("V3", v3)):
            if v is not None:
                norms[name] = operator_norm(v)
        return BlockVerdict(ok, idx, v1, v2, v3, norms, residuals)

    v1, residuals["eq1"] = _two_sided(pinv(d1s), a1, np.linalg.inv(d2), d1s, d2)
    if residuals["eq1"] > scale(a1) or operator_norm(v1) > 1.0 + tol:
        return verdict(False, 1, v1)
    v2, residuals["eq2"] = _two_sided(np.linalg.inv(d2s), a2, pinv(d3), d2s, d3)
    if residuals["eq2"] > scale(a2) or operator_norm(v2) > 1.0 + tol:
        return verdict(False, 2, v1, v2)
    left = hermitian_sqrt(d1s @ (np.eye(n1) - v1 @ adjoint(v1)) @ d1s, tol=4 * tol)
    right = hermitian_sqrt(d3 @ (np.eye(n3) - adjoint(v2) @ v2) @ d3, tol=4 * tol)
    target = b + d1s @ v1 @ adjoint(w2) @ v2 @ d3
    v3, residuals["eq3"] = _two_sided(pinv(left), target, pinv(right), left, right)
    if residuals["eq3"] > scale(target) or operator_norm(v3) > 1.0 + tol:
        return verdict(False, 3, v1, v2, v3)
    return verdict(True, None, v1, v2, v3)


def assemble_3x3(w1, w2, w3, a1, a2, b):
    """The block upper-triangular matrix [[W1, A1, B], [0, W2, A2], [0, 0, W3]]."""
    w1, w2, w3, a1, a2, b = (np.atleast_2d(np.asarray(x, dtype=complex)) for x in (w1, w2, w3, a1, a2, b))
    z21 = np.zeros((w2.shape[0], w1.shape[1]), dtype=complex)
    z31 = np.zeros((w3.shape[0], w1.shape[1]), dtype=complex)
    z32 = np.zeros((w3.shape[0], w2.shape[1]), dtype=complex)
    return np.block([[w1, a1, b], [z21, w2, a2], [z31, z32, w3]])


__all__ = [
    "BOUNDARY_THRESHOLD",
    "PINV_CUTOFF",
    "BlockVerdict",
    "Criterion3x3Verdict",
    "ParrottWitness",
    "assemble_3x3",
    "block_criterion_3x3",
    "criterion_3x3",
    "criterion_from_matrix",
    "douglas_minimal",
    "parrott_column_factor",
    "parrott_complete",
    "parrott_extract",
    "parrott_row_factor",
    "split_blocks",
]
