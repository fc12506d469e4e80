"""Sp(2,R) as 4x4 real matrices: the compact part K, KAK and closed forms.

Symplectic matrices satisfy g^T J g = J with J = [[0, I], [-I, 0]] and are
represented as plain (4, 4) float arrays.  K = Sp(2,R) n O(4) is the image of
U(2) under iota(A + iB) = [[A, -B], [B, A]].
"""
import math
from dataclasses import dataclass

import numpy as np

from .su2 import SU2Element, u as su2_u

__all__ = [
    "J",
    "iota",
    "iota_inv",
    "KElement",
    "is_symplectic",
    "check_symplectic",
    "D",
    "v",
    "w",
    "rot",
    "SL2Polar",
    "sl2_polar",
    "KAKResult",
    "kak",
    "random_unitary2",
    "random_symplectic",
    "structural_so2_predict",
    "structural_so2_product",
    "structural_u1_predict",
    "structural_u1_product",
]

J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
J.setflags(write=False)


def iota(x):
    """[[Re x, -Im x], [Im x, Re x]] for a 2x2 complex matrix (or batch)."""
    x = np.asarray(x, dtype=complex)
    a, b = x.real, x.imag
    return np.concatenate([np.concatenate([a, -b], -1), np.concatenate([b, a], -1)], -2)


def iota_inv(k):
    """Recover A + iB from a matrix of the form [[A, -B], [B, A]]."""
    k = np.asarray(k, dtype=float)
    return k[..., :2, :2] + 1j * k[..., 2:, :2]


@dataclass(frozen=True)
class KElement:
    """Element of K, stored as the 2x2 unitary u with k = iota(u)."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (2, 2):
            raise ValueError("u must be 2x2")
        if np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-10:
            raise ValueError("u is not unitary")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def matrix(self):
        return iota(self.u)

    @classmethod
    def from_su2(cls, h):
        return cls(h.matrix())


def is_symplectic(g, tol=1e-10):
    g = np.asarray(g, dtype=float)
    return g.shape[-2:] == (4, 4) and bool(np.max(np.abs(np.swapaxes(g, -1, -2) @ J @ g - J)) <= tol)


def check_symplectic(g, tol=1e-10):
    g = np.asarray(g, dtype=float)
    if g.shape != (4, 4) or not np.all(np.isfinite(g)):
        raise ValueError("expected a finite 4x4 matrix")
    # relative tolerance: g^T J g scales with |g|^2
    scale = max(1.0, float(np.sum(g * g)))
    if np.max(np.abs(g.T @ J @ g - J)) > tol * scale:
        raise ValueError("not symplectic")
    return g


def D(beta, gamma):
    """diag(e^beta, e^gamma, e^-beta, e^-gamma)."""
    return np.diag(np.exp([beta, gamma, -beta, -gamma]))


def v(s):
    """iota(e^{is} I)."""
    return iota(np.exp(1j * s) * np.eye(2))


def w(theta, theta_prime):
    """iota(diag(e^{i theta}, e^{i theta'}))."""
    return iota(np.diag([np.exp(1j * theta), np.exp(1j * theta_prime)]))


def rot(phi):
    """2x2 rotation [[cos, -sin], [sin, cos]]."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class SL2Polar:
    """r_phi diag(lam, mu) r_phi with phi in [-pi/4, pi/4] and lam, mu >= 0."""

    phi: float
    lam: float
    mu: float

    def matrix(self):
        r = rot(self.phi)
        return r @ np.diag([self.lam, self.mu]) @ r


def sl2_polar(a, c, d):
    """Write [[a, -c], [c, d]] (a, d >= 0) as r_phi diag(lam, mu) r_phi.

    lam + mu = sqrt((a+d)^2 + 4c^2) and lam - mu = a - d, hence
    lam mu = ad + c^2 >= 0; tan(2 phi) = 2c / (a + d), and when a = d = 0
    phi = pi/4 for c >= 0 and -pi/4 for c < 0.
    """
    a, c, d = float(a), float(c), float(d)
    if a < 0 or d < 0:
        raise ValueError("a and d must be >= 0")
    total = math.hypot(a + d, 2 * c)
    lam = 0.5 * ((a - d) + total)
    mu = lam - (a - d)
    if a + d == 0.0:
        phi = math.pi / 4 if c >= 0 else -math.pi / 4
    else:
        phi = 0.5 * math.atan2(2 * c, a + d)
    return SL2Polar(phi, lam, max(mu, 0.0))


@dataclass(frozen=True)
class KAKResult:
    """g = iota(k1) D(beta, gamma) iota(k2) with beta >= gamma >= 0."""

    k1: KElement
    beta: float
    gamma: float
    k2: KElement

    def reconstruct(self):
        return self.k1.matrix() @ D(self.beta, self.gamma) @ self.k2.matrix()


def _symplectic_frame(x1, x2):
    """Orthonormal [x1, x2, -J x1, -J x2] after J-aware Gram-Schmidt; lies in K."""
    x1 = x1 / np.linalg.norm(x1)
    jx1 = J @ x1
    x2 = x2 - (x2 @ x1) * x1 - (x2 @ jx1) * jx1
    x2 = x2 / np.linalg.norm(x2)
    return np.column_stack([x1, x2, -J @ x1, -J @ x2])


def _canonical_signs(u):
    """+-1 per column making the largest entry point into the right half plane."""
    signs = np.ones(2)
    for j in range(2):
        col = u[:, j]
        z = col[int(np.argmax(np.abs(col) + 1e-12 * np.arange(2, 0, -1)))]
        key = z.real if abs(z.real) > 1e-12 else z.imag
        signs[j] = -1.0 if key < 0 else 1.0
    return signs


def kak(g, tol=1e-10):
    """KAK decomposition g = iota(k1) D(beta, gamma) iota(k2).

    The top right singular vector x1 of g (singular value e^beta) and the
    top right singular vector x2 of g restricted to the complement of
    span(x1, J x1) (singular value e^gamma) give
    k2^T = [x1, x2, -J x1, -J x2]; the symplectic structure puts the
    remaining singular vectors at -J x1, -J x2.  Working in that complement
    keeps the frame inside iota(U(2)) even for degenerate spectra.

    The columns of k1 (rows of k2) are determined up to a simultaneous
    sign; the sign is fixed so that the largest entry of each column of
    iota^{-1}(k1) has positive real part (positive imaginary part when the
    real part vanishes).
    """
    g = check_symplectic(g, tol)
    _, sig, vt = np.linalg.svd(g)
    beta = max(0.0, 0.5 * (math.log(sig[0]) - math.log(sig[3])))
    x1 = vt[0]
    # the complement of span(x1, J x1) is J-invariant and invariant under g^T g;
    # taking x2 there keeps the frame symplectic even for degenerate spectra
    basis = np.linalg.svd(np.column_stack([x1, J @ x1]).T)[2][2:].T
    _, sig2, vt2 = np.linalg.svd(g @ basis)
    x2 = basis @ vt2[0]
    # clamp rounding so that beta >= gamma >= 0 holds exactly
    gamma = min(beta, max(0.0, 0.5 * (math.log(sig2[0]) - math.log(sig2[1]))))
    frame = _symplectic_frame(x1, x2)
    x1, x2 = frame[:, 0], frame[:, 1]
    k1m = _symplectic_frame(g @ x1 * math.exp(-beta), g @ x2 * math.exp(-gamma))
    u1 = iota_inv(k1m)
    u2 = iota_inv(frame).conj().T
    s = _canonical_signs(u1)
    u1 = u1 * s[None, :]
    u2 = u2 * s[:, None]
    return KAKResult(KElement(_unitarize(u1)), beta, gamma, KElement(_unitarize(u2)))


def _unitarize(u):
    # polar projection removes rounding drift of order 1e-15
    a, _, bh = np.linalg.svd(u)
    return a @ bh


def random_unitary2(rng):
    """Haar-random 2x2 unitary."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2)
    q, rr = np.linalg.qr(z)
    ph = np.diag(rr) / np.abs(np.diag(rr))
    return q * ph[None, :]


def random_symplectic(rng, beta_max=3.0):
    """iota(u1) D(beta, gamma) iota(u2) with Haar u's and uniform beta >= gamma >= 0."""
    b, c = np.sort(rng.uniform(0.0, beta_max, 2))[::-1]
    return iota(random_unitary2(rng)) @ D(b, c) @ iota(random_unitary2(rng))


@dataclass(frozen=True)
class StructuralSO2:
    beta: float
    gamma: float
    phi: float
    phi_prime: float

    def reconstruct(self):
        ww = w(self.phi, self.phi_prime)
        return ww @ D(self.beta, self.gamma) @ ww


def structural_so2_product(alpha, theta):
    """D(alpha, alpha) w(theta, pi/2 - theta) D(alpha, alpha)."""
    da = D(alpha, alpha)
    return da @ w(theta, math.pi / 2 - theta) @ da


def structural_so2_predict(alpha, theta):
    """Closed-form factors of D(a,a) w(theta, pi/2-theta) D(a,a) = w D(beta,gamma) w.

    sinh(beta) = sinh(2a) cos(theta), sinh(gamma) = sinh(2a) sin(theta),
    tan(2 phi) = tan(theta)/cosh(2a), tan(2 phi') = 1/(tan(theta) cosh(2a)),
    with phi, phi' in [0, pi/4].  Note gamma > beta once theta > pi/4, so the
    pair is the Weyl-chamber point only after sorting.
    """
    alpha, theta = float(alpha), float(theta)
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    if not 0.0 <= theta <= math.pi / 2 + 1e-15:
        raise ValueError("theta must lie in [0, pi/2]")
    sh, ch = math.sinh(2 * alpha), math.cosh(2 * alpha)
    c, s = math.cos(theta), math.sin(theta)
    return StructuralSO2(math.asinh(sh * c), math.asinh(sh * s),
                         0.5 * math.atan2(s, c * ch), 0.5 * math.atan2(c, s * ch))


@dataclass(frozen=True)
class StructuralU1:
    beta: float
    gamma: float
    phi: float
    omega1: float
    omega2: float

    def reconstruct(self):
        kr = iota(rot(self.phi))
        ww = w(self.omega1, self.omega2)
        return kr @ ww @ D(self.beta, self.gamma) @ ww @ kr


def structural_u1_product(alpha, theta):
    """D(alpha, 0) iota(u_theta) D(alpha, 0)."""
    da = D(alpha, 0.0)
    return da @ iota(su2_u(theta).matrix()) @ da


def structural_u1_predict(alpha, theta):
    """Closed-form factors of D(a,0) iota(u_theta) D(a,0).

    sinh(beta) sinh(gamma) = sinh(a)^2 / 2 and
    sinh(beta) - sinh(gamma) = sinh(2a) cos(theta) / sqrt 2 are solved as a
    quadratic in sinh(beta); tan(2 phi) = 1/(cosh(a) cos(theta)) and
    sin(2 w1) cosh(beta) = sin(theta)/sqrt 2 = -sin(2 w2) cosh(gamma).
    """
    alpha, theta = float(alpha), float(theta)
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    if not abs(theta) <= math.pi / 2 + 1e-15:
        raise ValueError("theta must lie in [-pi/2, pi/2]")
    c = max(math.cos(theta), 0.0)
    diff = math.sinh(2 * alpha) * c / math.sqrt(2.0)
    prod = 0.5 * math.sinh(alpha) ** 2
    sb = 0.5 * (diff + math.sqrt(diff * diff + 4 * prod))
    beta = math.asinh(sb)
    gamma = math.asinh(prod / sb)
    phi = 0.5 * math.atan2(1.0, math.cosh(alpha) * c)
    st = math.sin(theta) / math.sqrt(2.0)
    om1 = 0.5 * math.asin(st / math.cosh(beta))
    om2 = -0.5 * math.asin(st / math.cosh(gamma))
    return StructuralU1(beta, gamma, phi, om1, om2)
