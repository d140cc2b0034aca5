"""One-variable Schur-class functions: polynomials and finite Blaschke products.

Both representations expose the same surface: vectorized evaluation, exact
Taylor jets at a point (hence derivatives of any order), Taylor coefficients
at the origin, and a certified upper bound for the sup norm on the closed disk.
"""

import json
import math
from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.signal import lfilter

from .disk import disk_point
from .errors import BoundaryError, ConfluenceError, DomainError, PoleError

POLE_FLOOR = 1e-14
CONFLUENCE_FLOOR = 1e-10
MAX_SAMPLE_DEGREE = 64
MAX_TAYLOR_COUNT = 4096
SAMPLE_RADIUS = 0.95
DILATE_ACCURACY = 1e-14


class SchurFunction(ABC):
    """An analytic self-map of the unit disk (into the closed disk)."""

    kind = None

    @abstractmethod
    def __call__(self, z):
        """Evaluate at a scalar or an array of points."""

    @abstractmethod
    def jet(self, z, order):
        """Taylor coefficients of f at z: [f(z), f'(z), f''(z)/2!, ...]."""

    @property
    @abstractmethod
    def degree(self):
        pass

    @abstractmethod
    def series(self, count):
        """Exact Taylor coefficients a_0..a_{count-1} at the origin."""

    @abstractmethod
    def to_dict(self):
        pass

    def derivative(self, z, order=1):
        if order < 0:
            raise DomainError("derivative order must be nonnegative")
        return complex(self.jet(z, order)[order] * math.factorial(order))

    def taylor_coefficients(self, count, radius=1.0, points=None):
        return taylor_coefficients(self, count, radius=radius, points=points)

    @cached_property
    def sup_norm(self):
        return sup_norm_estimate(self)

    def to_json(self):
        return json.dumps(self.to_dict())

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class Polynomial(SchurFunction):
    """Complex polynomial, coefficients in ascending powers."""

    kind = "poly"

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise DomainError("polynomial needs a nonempty 1-d coefficient list")
        if not np.all(np.isfinite(c)):
            raise DomainError("polynomial coefficients must be finite")
        # keep at least the constant term
        nz = np.flatnonzero(c)
        c = c[: (nz[-1] + 1 if nz.size else 1)]
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, z):
        out = P.polyval(np.asarray(z, dtype=complex), self.coeffs)
        return complex(out) if np.ndim(out) == 0 else out

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return Polynomial(P.polymul(self.coeffs, other.coeffs))

    def jet(self, z, order):
        z = complex(z)
        out = np.zeros(order + 1, dtype=complex)
        c = self.coeffs
        for m in range(order + 1):
            if c.size == 0:
                break
            out[m] = P.polyval(z, c) / math.factorial(m)
            c = P.polyder(c) if c.size > 1 else np.zeros(0, dtype=complex)
        return out

    def series(self, count):
        out = np.zeros(count, dtype=complex)
        n = min(count, self.coeffs.size)
        out[:n] = self.coeffs[:n]
        return out

    def to_dict(self):
        return {"kind": "poly", "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}


class FiniteBlaschke(SchurFunction):
    """c * prod_k (z - a_k) / (1 - conj(a_k) z) with |c| = 1, |a_k| < 1."""

    kind = "blaschke"

    def __init__(self, zeros, constant=1.0):
        zs = np.array([disk_point(a) for a in np.atleast_1d(zeros)], dtype=complex)
        c = complex(constant)
        if abs(abs(c) - 1.0) > 1e-12:
            raise DomainError(f"unimodular constant required, got |c| = {abs(c)}")
        zs.setflags(write=False)
        self.zeros = zs
        self.constant = c / abs(c)

    @property
    def degree(self):
        return self.zeros.size

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            den = 1.0 - np.conj(a) * z
            if np.any(np.abs(den) < POLE_FLOOR):
                raise PoleError(f"pole of the factor with zero {a}")
            out = out * (z - a) / den
        return complex(out) if out.ndim == 0 else out

    def jet(self, z, order):
        z = complex(z)
        out = np.zeros(order + 1, dtype=complex)
        out[0] = self.constant
        for a in self.zeros:
            ac = a.conjugate()
            den = 1.0 - ac * z
            if abs(den) < POLE_FLOOR:
                raise PoleError(f"pole of the factor with zero {a}")
            fac = np.empty(order + 1, dtype=complex)
            fac[0] = (z - a) / den
            # b^(m)(z)/m! = conj(a)^(m-1) (1-|a|^2) / (1 - conj(a) z)^(m+1)
            for m in range(1, order + 1):
                fac[m] = ac ** (m - 1) * (1.0 - abs(a) ** 2) / den ** (m + 1)
            out = np.convolve(out, fac)[: order + 1]
        return out

    def series(self, count):
        x = np.zeros(count, dtype=complex)
        x[0] = self.constant
        for a in self.zeros:
            # multiply the power series by (z - a) / (1 - conj(a) z)
            x = lfilter([-a, 1.0], [1.0, -a.conjugate()], x)
        return x

    def to_dict(self):
        return {
            "kind": "blaschke",
            "zeros": [[float(a.real), float(a.imag)] for a in self.zeros],
            "constant": [float(self.constant.real), float(self.constant.imag)],
        }


def identity():
    return Polynomial([0.0, 1.0])


def constant(c):
    return Polynomial([c])


def from_dict(d):
    kind = d.get("kind")
    if kind == "poly":
        return Polynomial([complex(re, im) for re, im in d["coeffs"]])
    if kind == "blaschke":
        zeros = [complex(re, im) for re, im in d["zeros"]]
        re, im = d.get("constant", [1.0, 0.0])
        return FiniteBlaschke(zeros, complex(re, im))
    raise DomainError(f"unknown Schur function kind {kind!r}")


def from_json(text):
    return from_dict(json.loads(text))


def evaluate(f, z):
    return f(z)


def derivative(f, z, order=1):
    return f.derivative(z, order)


def cauchy_derivative(f, z, order, radius=None, points=256):
    """k-th derivative by trapezoidal Cauchy quadrature on a small circle.

    Independent of ``jet``; used as a cross-check.
    """
    z = complex(z)
    if radius is None:
        radius = 0.5 * (1.0 - abs(z)) if abs(z) < 1 else 0.05
    theta = 2 * np.pi * np.arange(points) / points
    samples = f(z + radius * np.exp(1j * theta))
    coeff = np.mean(samples * np.exp(-1j * order * theta)) / radius**order
    return complex(coeff * math.factorial(order))


def _dft_points(f, count, points):
    n = max(2048, 2 * count) if points is None else int(points)
    if points is None and isinstance(f, FiniteBlaschke) and f.degree:
        # aliasing decays like max|a|^n
        rmax = float(np.max(np.abs(f.zeros)))
        if rmax > 0:
            n = max(n, int(math.ceil(-40.0 / math.log(rmax))))
    return 1 << (n - 1).bit_length()


def taylor_coefficients(f, count, radius=1.0, points=None):
    """Taylor coefficients a_0..a_{count-1} of f at 0 by FFT of boundary samples.

    Samples f at ``points`` equispaced nodes on |z| = radius and divides the
    k-th discrete Fourier coefficient by radius**k.  Error is roughly
    eps * max|f| / radius**k plus aliasing from a_{k+points}, so the unit
    circle is the right radius for functions analytic past it (every finite
    Blaschke product is); smaller radii are for maps only known inside.
    """
    if not 1 <= count <= MAX_TAYLOR_COUNT:
        raise DomainError(f"count must be in [1, {MAX_TAYLOR_COUNT}]")
    if not 0 < radius <= 1:
        raise DomainError("radius must lie in (0, 1]")
    n = _dft_points(f, count, points)
    if n < count:
        raise DomainError("need at least as many sample points as coefficients")
    zs = radius * np.exp(2j * np.pi * np.arange(n) / n)
    c = np.fft.fft(f(zs)) / n
    return c[:count] / radius ** np.arange(count)


def circle_grid_size(degree):
    return max(4096, 64 * degree)


def grid_inflation(step_phase):
    """Certified inflation for a grid max with phase offset ``step_phase``.

    If |p| attains its max M at theta*, the real trigonometric polynomial
    t = Re(conj(phase) p) has t(theta*) = M, t' = 0 there, and by Bernstein's
    inequality |t''| <= Lambda^2 M along any segment whose frequencies are
    bounded by Lambda.  The nearest grid point therefore sees at least
    M (1 - Lambda^2 / 2), so max_grid / (1 - Lambda^2 / 2) bounds M.
    """
    lam = float(step_phase)
    if lam * lam >= 2.0:
        raise DomainError("grid too coarse for certification")
    return 1.0 / (1.0 - 0.5 * lam * lam)


def sup_norm_estimate(f):
    """Certified upper bound for sup_{|z|<=1} |f(z)|.

    Finite Blaschke products are inner, so the answer is exactly 1.  For a
    polynomial of degree d the modulus is sampled on max(4096, 64 d) circle
    points and inflated by ``grid_inflation(pi d / N)``.
    """
    if isinstance(f, FiniteBlaschke):
        return 1.0
    if isinstance(f, Polynomial):
        d = f.degree
        if d == 0:
            return float(abs(f.coeffs[0]))
        n = circle_grid_size(d)
        padded = np.zeros(n, dtype=complex)
        padded[: d + 1] = f.coeffs
        vals = np.fft.ifft(padded) * n
        return float(np.max(np.abs(vals)) * grid_inflation(np.pi * d / n))
    if hasattr(f, "certified_sup_norm"):
        return float(f.certified_sup_norm)
    raise DomainError(f"no sup-norm certificate for {type(f).__name__}")


def hyperbolic_divided_difference(f, z, w):
    """f*(z, w) = [(f(z)-f(w))/(z-w)] * [(1 - conj(w) z) / (1 - conj(f(w)) f(z))]."""
    z = disk_point(z)
    w = disk_point(w)
    if abs(z - w) < CONFLUENCE_FLOOR:
        raise ConfluenceError(f"|z - w| = {abs(z - w)}; use the confluent form")
    fz, fw = complex(f(z)), complex(f(w))
    if abs(fw) >= 1.0 or abs(fz) >= 1.0:
        raise BoundaryError("f takes a unimodular value; f* is undefined")
    return (fz - fw) / (z - w) * (1.0 - w.conjugate() * z) / (1.0 - fw.conjugate() * fz)


def confluent_hyperbolic_difference(f, z):
    """(1 - |z|^2) f'(z) / (1 - |f(z)|^2); its modulus is Gamma(z, f)."""
    z = disk_point(z)
    j = f.jet(z, 1)
    if abs(j[0]) >= 1.0:
        raise BoundaryError("|f(z)| >= 1")
    return (1.0 - abs(z) ** 2) * j[1] / (1.0 - abs(j[0]) ** 2)


def random_disk_points(rng, size, radius=SAMPLE_RADIUS):
    """Uniform (area measure) points in the disk of the given radius."""
    r = radius * np.sqrt(rng.random(size))
    t = 2 * np.pi * rng.random(size)
    return r * np.exp(1j * t)


def random_blaschke(rng, degree, radius=SAMPLE_RADIUS):
    if not 0 <= degree <= MAX_SAMPLE_DEGREE:
        raise DomainError(f"degree must be in [0, {MAX_SAMPLE_DEGREE}]")
    zeros = random_disk_points(rng, degree, radius)
    c = np.exp(2j * np.pi * rng.random())
    return FiniteBlaschke(zeros, c)


def sample_random_schur(rng_seed, degree):
    """Deterministic random finite Blaschke product of the given degree."""
    return random_blaschke(np.random.default_rng(rng_seed), degree)


def _blaschke_tail_index(f, r):
    """Smallest K with sum_{k>=K} |a_k| r^k <= DILATE_ACCURACY / 2.

    Cauchy estimate on |z| = s, 1 < s < 1/max|a|:  |a_k| <= M(s) / s^k with
    M(s) = prod (s + |a|) / (1 - |a| s).
    """
    if f.degree == 0:
        return 1
    rmax = float(np.max(np.abs(f.zeros)))
    s = 0.5 * (1.0 + 1.0 / rmax) if rmax > 0 else 2.0
    m = float(np.prod([(s + abs(a)) / (1.0 - abs(a) * s) for a in f.zeros]))
    q = r / s
    k = math.log(0.5 * DILATE_ACCURACY * (1.0 - q) / m) / math.log(q)
    k = max(int(math.ceil(k)), f.degree + 1)
    if k > 1 << 22:
        raise DomainError("dilation needs more than 2^22 coefficients")
    return k


def dilate(f, r):
    """The polynomial z -> f(r z).

    Blaschke products are re-expanded from their exact Taylor series and
    truncated once the neglected tail sum of |a_k| r^k falls below 1e-14.
    """
    r = float(r)
    if not 0 < r < 1:
        raise DomainError("dilation radius must lie in (0, 1)")
    if isinstance(f, Polynomial):
        return Polynomial(f.coeffs * r ** np.arange(f.coeffs.size))
    if isinstance(f, FiniteBlaschke):
        count = _blaschke_tail_index(f, r)
        a = f.series(count) * r ** np.arange(count)
        tail = np.cumsum(np.abs(a)[::-1])[::-1]
        keep = np.flatnonzero(tail > 0.5 * DILATE_ACCURACY)
        k = int(keep[-1]) + 1 if keep.size else 1
        return Polynomial(a[:k])
    raise DomainError(f"cannot dilate {type(f).__name__}")
