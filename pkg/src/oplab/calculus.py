"""Divided differences and the holomorphic functional calculus on small matrices.

For an upper-triangular T with diagonal lambda_1..lambda_n,

    f(T)_{ij} = sum over paths i = k_0 < k_1 < ... < k_m = j of
                T_{k_0 k_1} ... T_{k_{m-1} k_m} [f(lambda_{k_0}), ..., f(lambda_{k_m})],

which is what ``apply_to_triangular`` evaluates.  Divided differences are
memoized by node multiset, so repeated eigenvalues cost nothing extra.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import CommutativityError, ConfluenceError, DomainError, NotContractionError
from .linalg import DEFAULT_TOL, adjoint, as_matrix, is_upper_triangular, operator_norm
from .multi import MultiPolynomial, MultiSchurFunction
from .report import InequalityReport
from .schur import Polynomial, SchurFunction

SNAP_TOL = 1e-12
CONFLUENT_TOL = 1e-8
MAX_NODES = 8
MAX_TUPLE_DEGREE = 32
COMMUTATOR_TOL = 1e-10
TUPLE_SIZES = (2, 3)


def snap_nodes(nodes):
    """Identify nodes closer than SNAP_TOL; reject the ambiguous band.

    Returns (distinct values, index of the distinct value for every node).
    """
    nodes = [complex(z) for z in nodes]
    reps, label = [], []
    for z in nodes:
        hit = None
        for k, r in enumerate(reps):
            d = abs(z - r)
            if d < SNAP_TOL:
                hit = k
                break
            if d < CONFLUENT_TOL:
                raise ConfluenceError(
                    f"nodes {r} and {z} are {d:.2e} apart: neither separated nor confluent"
                )
        if hit is None:
            reps.append(z)
            hit = len(reps) - 1
        label.append(hit)
    return reps, label


class _DividedDifferences:
    """Divided differences of f on multisets drawn from fixed distinct values."""

    def __init__(self, f, values, multiplicity):
        self.values = values
        self._memo = {}
        self._jets = []
        for z, m in zip(values, multiplicity):
            if hasattr(f, "jet"):
                self._jets.append(np.asarray(f.jet(z, m - 1)))
            elif m == 1:
                self._jets.append(np.array([complex(f(z))]))
            else:
                raise DomainError("confluent nodes need a function with derivatives")

    def __call__(self, counts):
        """counts[k] = multiplicity of distinct value k in the multiset."""
        key = tuple(counts)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        support = [k for k, c in enumerate(counts) if c]
        if len(support) == 1:
            k = support[0]
            out = complex(self._jets[k][counts[k] - 1])
        else:
            a, b = support[0], support[1]
            drop_a = list(counts)
            drop_a[a] -= 1
            drop_b = list(counts)
            drop_b[b] -= 1
            out = (self(drop_b) - self(drop_a)) / (self.values[a] - self.values[b])
        self._memo[key] = out
        return out


@dataclass
class DividedDifferenceTable:
    """``table[j][k]`` holds [f(z_k), ..., f(z_{k+j})]."""

    nodes: list
    table: list

    def entry(self, k, j):
        return self.table[j][k]

    @property
    def top(self):
        return self.table[-1][0]


def divided_differences(f, nodes):
    nodes = [complex(z) for z in nodes]
    if not 1 <= len(nodes) <= MAX_NODES:
        raise DomainError(f"need between 1 and {MAX_NODES} nodes")
    for z in nodes:
        if abs(z) > 1.0 + SNAP_TOL:
            raise DomainError(f"node {z} lies outside the closed disk")
    values, label = snap_nodes(nodes)
    mult = [label.count(k) for k in range(len(values))]
    dd = _DividedDifferences(f, values, mult)
    n = len(nodes)
    table = []
    for j in range(n):
        row = []
        for k in range(n - j):
            counts = [0] * len(values)
            for i in range(k, k + j + 1):
                counts[label[i]] += 1
            row.append(dd(counts))
        table.append(row)
    return DividedDifferenceTable(nodes, table)


def _check_spectrum(f, diag):
    closed = isinstance(f, Polynomial)
    for z in diag:
        r = abs(z)
        if (closed and r > 1.0 + SNAP_TOL) or (not closed and r >= 1.0):
            raise DomainError(f"eigenvalue {z} is outside the domain of f")


def apply_to_triangular(f, t):
    """f(T) for upper-triangular T by the path-sum formula."""
    t = as_matrix(t, square=True)
    if not is_upper_triangular(t):
        raise DomainError("apply_to_triangular needs an upper-triangular matrix")
    n = t.shape[0]
    diag = np.diag(t)
    _check_spectrum(f, diag)
    values, label = snap_nodes(diag)
    mult = [label.count(k) for k in range(len(values))]
    dd = _DividedDifferences(f, values, mult)
    out = np.zeros((n, n), dtype=complex)
    counts = [0] * len(values)

    def walk(i, k, weight):
        # the path currently ends at k; record it, then extend
        out[i, k] += weight * dd(counts)
        for nxt in range(k + 1, n):
            w = t[k, nxt]
            if w != 0:
                counts[label[nxt]] += 1
                walk(i, nxt, weight * w)
                counts[label[nxt]] -= 1

    for i in range(n):
        counts[label[i]] += 1
        walk(i, i, 1.0 + 0j)
        counts[label[i]] -= 1
    return out


def matrix_function(f, m):
    """f(M) through a complex Schur form M = Z T Z^*."""
    m = as_matrix(m, square=True)
    if is_upper_triangular(m):
        return apply_to_triangular(f, m)
    t, z = schur(m, output="complex")
    return z @ apply_to_triangular(f, np.triu(t)) @ adjoint(z)


def horner(f, m):
    """Polynomial evaluation by Horner's rule (independent of the path sum)."""
    m = as_matrix(m, square=True)
    out = np.zeros_like(m)
    eye = np.eye(m.shape[0], dtype=complex)
    for c in f.coeffs[::-1]:
        out = out @ m + c * eye
    return out


def _check_commuting(mats, tol):
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = operator_norm(mats[i] @ mats[j] - mats[j] @ mats[i])
            if comm > tol:
                raise CommutativityError(f"||T{i + 1}T{j + 1} - T{j + 1}T{i + 1}|| = {comm:.3e}")


def poly_eval_tuple(p, mats, tol=COMMUTATOR_TOL):
    """p(T_1, ..., T_n) for a commuting tuple, with memoized powers."""
    if not isinstance(p, MultiPolynomial):
        raise DomainError("tuple evaluation needs a MultiPolynomial")
    mats = [as_matrix(m, square=True) for m in mats]
    if len(mats) != p.n_vars:
        raise DomainError(f"{p.n_vars}-variable polynomial given {len(mats)} matrices")
    size = mats[0].shape[0]
    if any(m.shape[0] != size for m in mats):
        raise DomainError("all matrices in the tuple must have the same size")
    if max(p.degrees) > MAX_TUPLE_DEGREE:
        raise DomainError(f"per-variable degree above {MAX_TUPLE_DEGREE}")
    _check_commuting(mats, tol)
    eye = np.eye(size, dtype=complex)
    powers = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = eye if e == 0 else power(i, e - 1) @ mats[i]
        return powers[key]

    out = np.zeros((size, size), dtype=complex)
    for idx, c in p.terms():
        term = eye
        for i, e in enumerate(idx):
            if e:
                term = term @ power(i, e)
        out += c * term
    return out


def von_neumann_check(f, t, tol=1e-9):
    """||f(T)|| against the certified sup norm of f."""
    if isinstance(f, MultiSchurFunction):
        mats = [as_matrix(m, square=True) for m in t]
        for m in mats:
            if m.shape[0] not in TUPLE_SIZES:
                raise DomainError("tuple von Neumann inequality is only available for 2x2 and 3x3")
            if operator_norm(m) > 1.0 + DEFAULT_TOL:
                raise NotContractionError("every matrix in the tuple must be a contraction")
        lhs = operator_norm(poly_eval_tuple(f, mats))
        rhs = f.certified_sup_norm
        # the tuple acceptance bound is multiplicative in the certificate
        return InequalityReport("von-neumann-tuple", lhs, rhs, tolerance=tol * rhs,
                                context={"size": mats[0].shape[0], "n_vars": f.n_vars})
    if not isinstance(f, SchurFunction):
        raise DomainError("von_neumann_check needs a Schur function")
    t = as_matrix(t, square=True)
    norm = operator_norm(t)
    if norm > 1.0 + DEFAULT_TOL:
        raise NotContractionError(f"||T|| = {norm!r} > 1")
    lhs = operator_norm(matrix_function(f, t))
    return InequalityReport("von-neumann", lhs, f.sup_norm, tolerance=tol,
                            context={"size": t.shape[0], "degree": f.degree, "norm_T": norm})

