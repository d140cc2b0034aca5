"""Schur-class functions of several variables.

Two families: dense polynomials (coefficient array indexed by multi-index)
with a certified torus sup-norm bound, and separable products of one-variable
finite Blaschke products, which are inner and have sup norm exactly 1.
"""

import json
import math
from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError
from .schur import FiniteBlaschke, grid_inflation, random_blaschke

MAX_VARS = 4
TORUS_MIN_POINTS = 64
TORUS_POINTS_PER_DEGREE = 32
# N_i >= 22.5 n d_i keeps the total phase offset below pi / 22.5, so the
# inflation factor stays under 1 + 1e-2
TORUS_DENSITY = 22.5
TORUS_CHUNK = 1 << 21


def as_point(z, n):
    a = np.asarray(z, dtype=complex).ravel()
    if a.size != n:
        raise DomainError(f"expected a point of C^{n}, got {a.size} coordinates")
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite coordinates")
    return a


class MultiSchurFunction(ABC):
    n_vars = None

    @abstractmethod
    def value(self, z):
        """f at a single point of C^n."""

    @abstractmethod
    def gradient(self, z):
        pass

    @abstractmethod
    def hessian(self, z):
        pass

    @abstractmethod
    def to_dict(self):
        pass

    @property
    @abstractmethod
    def certified_sup_norm(self):
        pass

    def __call__(self, z):
        a = np.asarray(z, dtype=complex)
        if a.ndim <= 1:
            return self.value(a)
        flat = a.reshape(-1, a.shape[-1])
        return np.array([self.value(p) for p in flat]).reshape(a.shape[:-1])

    @property
    def sup_norm(self):
        return self.certified_sup_norm

    def to_json(self):
        return json.dumps(self.to_dict())


def torus_grid_sizes(degrees):
    degrees = [int(d) for d in degrees]
    n_active = sum(1 for d in degrees if d > 0)
    sizes = []
    for d in degrees:
        if d == 0:
            sizes.append(1)
        else:
            sizes.append(max(TORUS_MIN_POINTS, TORUS_POINTS_PER_DEGREE * d,
                             math.ceil(TORUS_DENSITY * n_active * d)))
    return sizes


def torus_phase_step(degrees, sizes):
    """Frequency bound times the largest grid offset: sum_i pi d_i / N_i."""
    return sum(math.pi * d / n for d, n in zip(degrees, sizes) if d > 0)


def torus_max_modulus(coeffs, sizes):
    """max |p| over the product grid, evaluated by zero-padded FFTs.

    The first axis is split into slabs so the transient array stays small.
    """
    c = np.asarray(coeffs, dtype=complex)
    sizes = list(sizes)
    # transform every axis except the first on the coefficient slab, then
    # evaluate the first variable pointwise per chunk of grid angles
    rest = sizes[1:]
    inner = np.fft.ifftn(c, s=rest, axes=tuple(range(1, c.ndim))) * math.prod(rest) if rest else c
    n0 = sizes[0]
    per = max(1, TORUS_CHUNK // max(1, math.prod(rest)))
    best = 0.0
    k = np.arange(c.shape[0])
    for start in range(0, n0, per):
        theta = 2 * np.pi * np.arange(start, min(n0, start + per)) / n0
        basis = np.exp(1j * np.outer(theta, k))  # (chunk, d0+1)
        vals = np.tensordot(basis, inner, axes=(1, 0))
        best = max(best, float(np.max(np.abs(vals))))
    return best


class MultiPolynomial(MultiSchurFunction):
    """sum_alpha c_alpha z^alpha with c stored as an n-dimensional array."""

    kind = "multipoly"

    def __init__(self, coeffs, _certificate=None):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 0 or c.ndim > MAX_VARS:
            raise DomainError(f"number of variables must lie in [1, {MAX_VARS}]")
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite and nonempty")
        c.setflags(write=False)
        self.coeffs = c
        self.n_vars = c.ndim
        self._certificate = _certificate

    @classmethod
    def from_terms(cls, n_vars, terms):
        """Build from a mapping multi-index -> coefficient."""
        terms = {tuple(int(i) for i in k): complex(v) for k, v in dict(terms).items()}
        for k in terms:
            if len(k) != n_vars or min(k) < 0:
                raise DomainError(f"bad multi-index {k} for {n_vars} variables")
        shape = [1 + max((k[i] for k in terms), default=0) for i in range(n_vars)]
        c = np.zeros(shape, dtype=complex)
        for k, v in terms.items():
            c[k] += v
        return cls(c)

    @property
    def degrees(self):
        return [s - 1 for s in self.coeffs.shape]

    @property
    def total_degree(self):
        idx = np.argwhere(self.coeffs != 0)
        return int(idx.sum(axis=1).max()) if idx.size else 0

    def terms(self):
        for idx in np.argwhere(self.coeffs != 0):
            yield tuple(int(i) for i in idx), complex(self.coeffs[tuple(idx)])

    def _eval(self, c, z):
        v = c
        for zi in z:
            v = P.polyval(zi, v, tensor=False) if v.ndim > 1 else P.polyval(zi, v)
        return complex(v)

    def value(self, z):
        return self._eval(self.coeffs, as_point(z, self.n_vars))

    def partial(self, z, orders):
        """Mixed partial derivative of the given per-variable orders."""
        c = self.coeffs
        for axis, m in enumerate(orders):
            if m:
                if c.shape[axis] <= m:
                    return 0j
                c = P.polyder(c, m=m, axis=axis)
        return self._eval(c, as_point(z, self.n_vars))

    def gradient(self, z):
        n = self.n_vars
        return np.array([self.partial(z, [1 if i == j else 0 for i in range(n)]) for j in range(n)])

    def hessian(self, z):
        n = self.n_vars
        h = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k in range(j, n):
                orders = [0] * n
                orders[j] += 1
                orders[k] += 1
                h[j, k] = h[k, j] = self.partial(z, orders)
        return h

    @cached_property
    def grid_sizes(self):
        return torus_grid_sizes(self.degrees)

    @cached_property
    def inflation(self):
        return grid_inflation(torus_phase_step(self.degrees, self.grid_sizes))

    @cached_property
    def certified_sup_norm(self):
        if self._certificate is not None:
            return self._certificate
        if all(d == 0 for d in self.degrees):
            return float(abs(self.coeffs.flat[0]))
        return torus_max_modulus(self.coeffs, self.grid_sizes) * self.inflation

    def scaled(self, factor):
        """factor * p, with the certificate rescaled instead of recomputed."""
        factor = complex(factor)
        cert = self.certified_sup_norm * abs(factor) * (1.0 + 4e-16)
        return MultiPolynomial(self.coeffs * factor, _certificate=cert)

    def to_dict(self):
        return {
            "kind": "multipoly",
            "n_vars": self.n_vars,
            "terms": [[list(k), [v.real, v.imag]] for k, v in self.terms()],
        }


class SeparableBlaschke(MultiSchurFunction):
    """prod_i B_i(z_i) with one finite Blaschke product per variable."""

    kind = "separable-blaschke"

    def __init__(self, factors):
        factors = list(factors)
        if not 1 <= len(factors) <= MAX_VARS:
            raise DomainError(f"number of variables must lie in [1, {MAX_VARS}]")
        for b in factors:
            if not isinstance(b, FiniteBlaschke):
                raise DomainError("factors must be FiniteBlaschke instances")
        self.factors = factors
        self.n_vars = len(factors)

    def _jets(self, z, order):
        z = as_point(z, self.n_vars)
        return [b.jet(zi, order) for b, zi in zip(self.factors, z)]

    def value(self, z):
        return complex(np.prod([j[0] for j in self._jets(z, 0)]))

    def gradient(self, z):
        jets = self._jets(z, 1)
        vals = np.array([j[0] for j in jets])
        out = np.empty(self.n_vars, dtype=complex)
        for i in range(self.n_vars):
            out[i] = jets[i][1] * np.prod(np.delete(vals, i))
        return out

    def hessian(self, z):
        jets = self._jets(z, 2)
        n = self.n_vars
        vals = np.array([j[0] for j in jets])
        h = np.zeros((n, n), dtype=complex)
        for i in range(n):
            h[i, i] = 2.0 * jets[i][2] * np.prod(np.delete(vals, i))
            for k in range(i + 1, n):
                h[i, k] = h[k, i] = jets[i][1] * jets[k][1] * np.prod(np.delete(vals, [i, k]))
        return h

    @property
    def certified_sup_norm(self):
        return 1.0

    def to_dict(self):
        return {"kind": "separable-blaschke", "factors": [b.to_dict() for b in self.factors]}


def from_dict(d):
    kind = d.get("kind")
    if kind == "multipoly":
        terms = {tuple(k): complex(re, im) for k, (re, im) in d["terms"]}
        return MultiPolynomial.from_terms(int(d["n_vars"]), terms)
    if kind == "separable-blaschke":
        from .schur import from_dict as one_var

        return SeparableBlaschke([one_var(f) for f in d["factors"]])
    raise DomainError(f"unknown multivariate kind {kind!r}")


def random_multi_polynomial(rng, n_vars, degree, scale=1.0):
    """Random complex coefficients, normalized so the certified sup norm is ``scale``."""
    if not 1 <= n_vars <= MAX_VARS:
        raise DomainError(f"number of variables must lie in [1, {MAX_VARS}]")
    shape = (degree + 1,) * n_vars
    c = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    p = MultiPolynomial(c)
    return p.scaled(scale / p.certified_sup_norm)


def random_separable_blaschke(rng, n_vars, degree):
    """Per-variable degrees in [0, degree], at least one of them positive."""
    degrees = rng.integers(0, degree + 1, size=n_vars)
    if degree > 0 and not degrees.any():
        degrees[rng.integers(0, n_vars)] = rng.integers(1, degree + 1)
    return SeparableBlaschke([random_blaschke(rng, int(d)) for d in degrees])


def sample_random_multi(rng, n_vars, degree):
    """Alternates between the two families with equal probability."""
    if rng.random() < 0.5:
        return random_separable_blaschke(rng, n_vars, degree)
    return random_multi_polynomial(rng, n_vars, degree)
