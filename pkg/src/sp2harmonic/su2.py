"""The compact group SU(2), its one-parameter families and Haar quadrature.

An element is stored as the pair (a, b) of the matrix [[a, b], [-conj(b), conj(a)]].
The fields may also be numpy arrays of equal shape, in which case the object
represents a batch of elements; all operations broadcast over the batch.
"""
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SU2Element",
    "identity",
    "r",
    "d",
    "u",
    "random_su2",
    "haar_average",
    "su2_to_so3",
]

_UNIT_TOL = 1e-12
_PRODUCT_DRIFT_TOL = 1e-10


@dataclass(frozen=True)
class SU2Element:
    """Element [[a, b], [-conj(b), conj(a)]] of SU(2), possibly batched."""

    a: complex
    b: complex

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.shape != b.shape:
            raise ValueError("a and b must have the same shape")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("non-finite entries")
        if np.any(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1.0) > _UNIT_TOL):
            raise ValueError("|a|^2 + |b|^2 != 1")
        if a.ndim == 0:
            a, b = complex(a), complex(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def shape(self):
        return np.shape(self.a)

    @property
    def c(self):
        """Lower-left entry, -conj(b)."""
        return -np.conj(self.b)

    @property
    def d(self):
        """Lower-right entry, conj(a)."""
        return np.conj(self.a)

    def matrix(self):
        """The 2x2 complex matrix; batched elements give shape (..., 2, 2)."""
        a, b = np.asarray(self.a), np.asarray(self.b)
        return np.stack([np.stack([a, b], -1),
                         np.stack([-np.conj(b), np.conj(a)], -1)], -2)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        if np.max(np.abs(m[..., 1, 1] - np.conj(m[..., 0, 0]))) > 1e-10 or \
                np.max(np.abs(m[..., 1, 0] + np.conj(m[..., 0, 1]))) > 1e-10:
            raise ValueError("matrix is not of the form [[a, b], [-b*, a*]]")
        return cls(m[..., 0, 0], m[..., 0, 1])

    def __matmul__(self, other):
        a = self.a * other.a - self.b * np.conj(other.b)
        b = self.a * other.b + self.b * np.conj(other.a)
        nrm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
        if np.any(np.abs(nrm - 1.0) > _PRODUCT_DRIFT_TOL):
            raise ValueError("product left SU(2) beyond drift tolerance")
        return SU2Element(a / nrm, b / nrm)

    def inverse(self):
        """Conjugate transpose."""
        return SU2Element(np.conj(self.a), -self.b)

    def __neg__(self):
        return SU2Element(-np.asarray(self.a), -np.asarray(self.b))

    def __getitem__(self, idx):
        return SU2Element(np.asarray(self.a)[idx], np.asarray(self.b)[idx])


def identity():
    return SU2Element(1.0, 0.0)


def r(theta):
    """Rotation [[cos, -sin], [sin, cos]]."""
    theta = np.asarray(theta, dtype=float)
    return SU2Element(np.cos(theta) + 0j, -np.sin(theta) + 0j)


def d(theta):
    """Diagonal diag(e^{i theta}, e^{-i theta})."""
    theta = np.asarray(theta, dtype=float)
    return SU2Element(np.exp(1j * theta), np.zeros_like(theta) + 0j)


def u(theta):
    """(1/sqrt 2) [[e^{i theta}, -1], [1, e^{-i theta}]]."""
    theta = np.asarray(theta, dtype=float)
    s = 1.0 / np.sqrt(2.0)
    return SU2Element(s * np.exp(1j * theta), np.full(theta.shape, -s) + 0j)


def random_su2(rng, size=None):
    """Haar-random elements from a normalized Gaussian pair (a, b)."""
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    z = rng.standard_normal(shape + (4,))
    z /= np.linalg.norm(z, axis=-1, keepdims=True)
    return SU2Element(z[..., 0] + 1j * z[..., 1], z[..., 2] + 1j * z[..., 3])


def _euler_nodes(resolution):
    n = int(resolution)
    ang = 2.0 * np.pi * np.arange(n) / n
    x, w = np.polynomial.legendre.leggauss(n)
    alpha, gamma = np.meshgrid(ang, ang, indexing="ij")
    return alpha.ravel(), gamma.ravel(), x, w / 2.0


def haar_average(f, resolution=64, vectorized=True):
    """Average of ``f`` over SU(2) with respect to normalized Haar measure.

    Elements are parametrized as d(alpha) r(Theta/2) d(gamma), that is
    a = cos(Theta/2) e^{i(alpha+gamma)}, b = -sin(Theta/2) e^{i(alpha-gamma)},
    with Haar density proportional to sin(Theta).  The two circle angles use
    the trapezoid rule and cos(Theta) uses Gauss-Legendre, both with
    ``resolution`` nodes; the rule is exact on matrix coefficients of the
    spin-l representation whenever 2l < resolution.

    With ``vectorized`` true, ``f`` receives one batched SU2Element per
    Gauss node (``resolution**2`` elements) and must return values whose
    leading axis indexes the batch.
    """
    if int(resolution) < 2:
        raise ValueError("resolution must be >= 2")
    alpha, gamma, xs, ws = _euler_nodes(resolution)
    total = None
    for x, w in zip(xs, ws):
        half = np.arccos(x) / 2.0
        a = np.cos(half) * np.exp(1j * (alpha + gamma))
        b = -np.sin(half) * np.exp(1j * (alpha - gamma))
        g = SU2Element(a, b)
        if vectorized:
            vals = np.asarray(f(g))
        else:
            vals = np.stack([np.asarray(f(g[k])) for k in range(len(alpha))])
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite integrand")
        part = w * vals.mean(axis=0)
        total = part if total is None else total + part
    return complex(total) if np.ndim(total) == 0 else total


def su2_to_so3(g):
    """Covering map SU(2) -> SO(3); batched input gives shape (..., 3, 3)."""
    al, be = np.asarray(g.a), np.asarray(g.b)
    s, t = al ** 2 + be ** 2, al ** 2 - be ** 2
    ab, abc = al * be, al * np.conj(be)
    rows = [
        [s.real, (be ** 2 - al ** 2).imag, 2 * ab.imag],
        [s.imag, t.real, -2 * ab.real],
        [2 * abc.imag, 2 * abc.real, np.abs(al) ** 2 - np.abs(be) ** 2],
    ]
    return np.stack([np.stack(row, -1) for row in rows], -2)
