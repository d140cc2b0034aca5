"""Takenaka-Malmquist basis and the compressed-shift matrices built from it."""

import math
from dataclasses import dataclass

import numpy as np

from .disk import disk_point
from .errors import DomainError, SeparationError

SEPARATION_FLOOR = 1e-8
MAX_ZEROS = 8


def _zeros(zeros):
    zs = [disk_point(z) for z in np.atleast_1d(zeros)]
    if not 1 <= len(zs) <= MAX_ZEROS:
        raise DomainError(f"need between 1 and {MAX_ZEROS} zeros")
    return zs


def tm_basis_eval(zeros, k, z):
    """phi_k(z) = prod_{j<k} b_{w_j}(z) * sqrt(1 - |w_k|^2) / (1 - conj(w_k) z), k >= 1."""
    zs = _zeros(zeros)
    if not 1 <= k <= len(zs):
        raise DomainError(f"basis index must lie in [1, {len(zs)}]")
    z = np.asarray(z, dtype=complex)
    out = np.ones(z.shape, dtype=complex)
    for w in zs[: k - 1]:
        out = out * (z - w) / (1.0 - w.conjugate() * z)
    w = zs[k - 1]
    out = out * math.sqrt(1.0 - abs(w) ** 2) / (1.0 - w.conjugate() * z)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ModelOperator:
    zeros: tuple
    matrix: np.ndarray


def model_matrix(zeros):
    """Matrix of the compressed shift S_Theta in the Takenaka-Malmquist basis.

    Entry (i, j), i < j: prod_{i<k<j} (-conj(w_k)) * sqrt(1-|w_i|^2) sqrt(1-|w_j|^2).
    """
    zs = _zeros(zeros)
    n = len(zs)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) < SEPARATION_FLOOR:
                raise SeparationError(f"zeros {i} and {j} are closer than {SEPARATION_FLOOR:g}")
    root = [math.sqrt(1.0 - abs(w) ** 2) for w in zs]
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        m[i, i] = zs[i]
        prod = 1.0 + 0j
        for j in range(i + 1, n):
            m[i, j] = prod * root[i] * root[j]
            prod *= -zs[j].conjugate()
    m.setflags(write=False)
    return ModelOperator(tuple(zs), m)


def t3_confluent(w):
    """[[w, a, b], [0, w, a], [0, 0, w]] with a = 1 - |w|^2, b = -conj(w)(1 - |w|^2)."""
    w = disk_point(w)
    a = 1.0 - abs(w) ** 2
    b = -w.conjugate() * a
    return np.array([[w, a, b], [0, w, a], [0, 0, w]], dtype=complex)


def gram_matrix(zeros, points=4096):
    """Gram matrix of phi_1..phi_n under the equispaced rule on the unit circle."""
    zs = _zeros(zeros)
    z = np.exp(2j * np.pi * np.arange(points) / points)
    phi = np.array([tm_basis_eval(zs, k, z) for k in range(1, len(zs) + 1)])
    return phi.conj() @ phi.T / points
