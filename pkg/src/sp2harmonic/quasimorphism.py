"""The universal cover of Sp(2,R) as pairs (g, t) and the quasi-morphism Phi.

For g = [[A, C], [B, D]] (2x2 blocks) the circle function is
c(g) = det(A + D + i(B - C)) / |det(A + D + i(B - C))|; note
iota(A + D + i(B - C)) = g + (g^T)^{-1}.  The cover consists of pairs (g, t)
with e^{it} = c(g), multiplied through the cocycle
eta(g1, g2) = arg(c(g1 g2) / (c(g1) c(g2))) taken in (-pi, pi).
"""
import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, logm

from . import symplectic as sp
from .su2 import SU2Element, random_su2

__all__ = [
    "BranchCutWarning",
    "circle_c",
    "eta",
    "eta_continuation",
    "CoverElement",
    "cover_identity",
    "cover_v",
    "cover_D",
    "cover_h",
    "cover_mul",
    "cover_inv",
    "phi",
    "CoverKAK",
    "cover_kak",
    "random_cover",
]

NEAR_CUT = 1e-6


class BranchCutWarning(RuntimeWarning):
    """eta came within 1e-6 of +-pi."""


def _det_arg_matrix(g):
    g = np.asarray(g, dtype=float)
    a, c, b, d = g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]
    return a + d + 1j * (b - c)


def circle_c(g, check=True):
    """Unit complex number c(g) for symplectic g."""
    g = np.asarray(g, dtype=float)
    x = _det_arg_matrix(g)
    if check:
        # iota(x) = g - J g J always; it equals g + g^{-T} only for symplectic g
        resid = np.max(np.abs(sp.iota(x) - (g + np.linalg.inv(g).T)))
        if resid > 1e-8 * max(1.0, np.abs(g).max()) ** 2:
            raise ValueError("degenerate c(g): block identity fails")
    det = complex(np.linalg.det(x))
    if abs(det) < 1e-12:
        raise ValueError("degenerate c(g)")
    return det / abs(det)


def eta(g1, g2, warn=True):
    """Cocycle eta(g1, g2) in (-pi, pi]; warns with BranchCutWarning near +-pi."""
    g1, g2 = np.asarray(g1, float), np.asarray(g2, float)
    z = circle_c(g1 @ g2) / (circle_c(g1) * circle_c(g2))
    val = cmath.phase(z)
    if warn and math.pi - abs(val) < NEAR_CUT:
        warnings.warn("near branch cut", BranchCutWarning, stacklevel=2)
    return val


def _path(g):
    """Continuous path s -> g(s) from the identity to g through the KAK factors."""
    r = sp.kak(g)
    l1, l2 = logm(r.k1.u), logm(r.k2.u)

    def at(s):
        return (sp.iota(expm(s * l1)) @ sp.D(s * r.beta, s * r.gamma)
                @ sp.iota(expm(s * l2)))

    return at


def eta_continuation(g1, g2, steps=400):
    """eta obtained by continuing arg(c(g1 g2)/(c(g1)c(g2))) from (1, 1).

    Independent of any branch choice: the phase is unwrapped along paths
    from the identity to g1 and g2.
    """
    p1, p2 = _path(g1), _path(g2)
    prev, total = 0.0, 0.0
    for s in np.linspace(0.0, 1.0, steps + 1)[1:]:
        a, b = p1(s), p2(s)
        z = circle_c(a @ b, check=False) / (circle_c(a, check=False) * circle_c(b, check=False))
        cur = cmath.phase(z)
        step = (cur - prev + math.pi) % (2 * math.pi) - math.pi
        total += step
        prev = cur
    return total


@dataclass(frozen=True)
class CoverElement:
    """(g, t) with e^{it} = c(g)."""

    g: np.ndarray
    t: float

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        sp.check_symplectic(g, 1e-9)
        if abs(cmath.exp(1j * self.t) - circle_c(g)) > 1e-8:
            raise ValueError("e^{it} != c(g)")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "t", float(self.t))

    def __matmul__(self, other):
        return cover_mul(self, other)


def cover_identity():
    return CoverElement(np.eye(4), 0.0)


def cover_v(t):
    """Lift (v_t, 2t) of the central circle."""
    return CoverElement(sp.v(t), 2.0 * t)


def cover_D(beta, gamma):
    return CoverElement(sp.D(beta, gamma), 0.0)


def cover_h(h):
    """Lift (iota(h), 0) of h in SU(2); c(iota(h)) = 1."""
    return CoverElement(sp.iota(h.matrix()), 0.0)


def _trusted(g, t):
    # skips validation for products of validated elements
    out = object.__new__(CoverElement)
    g = np.asarray(g, dtype=float)
    g.setflags(write=False)
    object.__setattr__(out, "g", g)
    object.__setattr__(out, "t", float(t))
    return out


def cover_mul(x, y):
    """(g1, t1)(g2, t2) = (g1 g2, t1 + t2 + eta(g1, g2)).

    c(g1) c(g2) is read off as e^{i(t1 + t2)}, so only c(g1 g2) is computed.
    """
    g = x.g @ y.g
    z = circle_c(g, check=False) * cmath.exp(-1j * (x.t + y.t))
    val = cmath.phase(z)
    if math.pi - abs(val) < NEAR_CUT:
        warnings.warn("near branch cut", BranchCutWarning, stacklevel=2)
    return _trusted(g, x.t + y.t + val)


def cover_inv(x):
    gi = np.linalg.inv(x.g)
    return CoverElement(gi, -x.t - eta(x.g, gi))


def phi(x):
    """Quasi-morphism Phi(g, t) = t / 2."""
    return 0.5 * x.t


@dataclass(frozen=True)
class CoverKAK:
    """x = h1~ v~_t D~(beta, gamma) v~_s h2~ with s in [0, pi)."""

    h1: SU2Element
    t: float
    beta: float
    gamma: float
    s: float
    h2: SU2Element

    def reconstruct(self):
        out = cover_h(self.h1)
        for part in (cover_v(self.t), cover_D(self.beta, self.gamma),
                     cover_v(self.s), cover_h(self.h2)):
            out = cover_mul(out, part)
        return out


def _split_unitary(u):
    """u = e^{i a} h with h in SU(2) and a = arg(det u)/2 in (-pi/2, pi/2]."""
    a = 0.5 * cmath.phase(np.linalg.det(u))
    h = u * cmath.exp(-1j * a)
    return a, h


def cover_kak(x):
    """KAK of a cover element with the central phases made explicit.

    The base K-parts u1, u2 are split as e^{i t1} h1 and e^{i s} h2 with
    h1, h2 in SU(2) and s moved into [0, pi) (flipping the sign of h2).  The
    lift is then fixed by Phi(x) = t + s, i.e. t = x.t/2 - s; since t and t1
    agree modulo pi, h1 absorbs the sign (-1)^k with k = (t - t1)/pi.
    """
    r = sp.kak(x.g)
    t1, h1 = _split_unitary(r.k1.u)
    s, h2 = _split_unitary(r.k2.u)
    if s < 0:
        s += math.pi
        h2 = -h2
    if s >= math.pi:
        s -= math.pi
        h2 = -h2
    t = phi(x) - s
    k = round((t - t1) / math.pi)
    if k % 2:
        h1 = -h1
    return CoverKAK(SU2Element.from_matrix(h1), t, r.beta, r.gamma, s,
                    SU2Element.from_matrix(h2))


def random_cover(rng, factors=4, beta_max=1.5, t_max=math.pi):
    """Product of random generators v~_t, D~(beta, gamma) and h~."""
    out = cover_identity()
    for _ in range(factors):
        kind = rng.integers(3)
        if kind == 0:
            part = cover_v(rng.uniform(-t_max, t_max))
        elif kind == 1:
            b, c = np.sort(rng.uniform(0, beta_max, 2))[::-1]
            part = cover_D(b, c)
        else:
            part = cover_h(random_su2(rng))
        out = cover_mul(out, part)
    return out
