"""Decay-rate arithmetic for matrix coefficients of Sp(2,R) and its cover.

With Hoelder exponents s1 (for the SO(2)-averaged operator) and s2 (for the
U(1)-averaged operator) and a rate s below the smallest root s_- of

    P(s) = s^2 - (2 s1 + s2) s + s1 s2,

a coefficient at k D(beta, gamma) k' is controlled by

    eps(beta, gamma) = exp(-P(s) max(beta / (s1 + s2 - s),
                                     (beta + gamma) / (2 s1 + s2 - s))).

On the universal cover the envelope picks up the factor exp(kappa |Phi|).
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import quasimorphism as qm

__all__ = [
    "EnvelopeParams",
    "s_minus",
    "p_poly",
    "epsilon",
    "epsilon_grid",
    "epsilon_cover",
    "decay_rate",
    "crossover_ratio",
    "holder_exponents",
]


def s_minus(s1, s2):
    """Smallest root s1 + s2/2 - sqrt(s1^2 + s2^2/4) of P.

    Written as s1 s2 / (s1 + s2/2 + sqrt(...)) to avoid cancellation.
    """
    if not (s1 > 0 and s2 > 0):
        raise ValueError("s1 and s2 must be positive")
    return s1 * s2 / (s1 + 0.5 * s2 + math.hypot(s1, 0.5 * s2))


@dataclass(frozen=True)
class EnvelopeParams:
    """Exponents s1, s2, the rate s < s_-(s1, s2) and the cover weight kappa.

    ``L`` is the growth constant of the representation; it only enters the
    multiplicative constant in front of eps and is kept as metadata.
    """

    s1: float
    s2: float
    s: float = 0.0
    kappa: float = 0.0
    L: float = 0.0

    def __post_init__(self):
        for name in ("s1", "s2", "s", "kappa", "L"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        if self.s1 <= 0 or self.s2 <= 0:
            raise ValueError("s1 and s2 must be positive")
        if self.s < 0 or self.kappa < 0 or self.L < 0:
            raise ValueError("s, kappa and L must be nonnegative")
        if self.s >= s_minus(self.s1, self.s2):
            raise ValueError(
                f"s={self.s} must be below s_minus={s_minus(self.s1, self.s2)}")
        if self.s1 > 1 or self.s2 > 1:
            warnings.warn("exponents above 1 only occur for X = 0", RuntimeWarning,
                          stacklevel=3)

    @property
    def s_minus(self):
        return s_minus(self.s1, self.s2)


def p_poly(params, s=None):
    """P(s); defaults to the rate stored in ``params``."""
    s = params.s if s is None else s
    return s * s - (2 * params.s1 + params.s2) * s + params.s1 * params.s2


def _check_chamber(beta, gamma):
    beta, gamma = np.asarray(beta, float), np.asarray(gamma, float)
    if np.any(gamma < 0) or np.any(beta < gamma):
        raise ValueError("not in closed Weyl chamber: need beta >= gamma >= 0")
    return beta, gamma


def epsilon_grid(params, beta, gamma):
    """Vectorized eps over broadcast arrays of (beta, gamma)."""
    beta, gamma = _check_chamber(beta, gamma)
    s1, s2, s = params.s1, params.s2, params.s
    rate = np.maximum(beta / (s1 + s2 - s), (beta + gamma) / (2 * s1 + s2 - s))
    return np.exp(-p_poly(params) * rate)


def epsilon(params, beta, gamma):
    """Envelope eps at D(beta, gamma) for a point of the closed Weyl chamber."""
    return float(epsilon_grid(params, beta, gamma))


def decay_rate(params):
    """c = P(s) / (2 s1 + s2 - s), so that eps(beta, gamma) <= exp(-c beta)."""
    return p_poly(params) / (2 * params.s1 + params.s2 - params.s)


def crossover_ratio(params):
    """beta / gamma at which both arguments of the max coincide."""
    return (params.s1 + params.s2 - params.s) / params.s1


def epsilon_cover(params, x):
    """eps at the base KAK of a cover element times exp(kappa |Phi(x)|)."""
    k = qm.cover_kak(x)
    gamma = min(max(k.gamma, 0.0), k.beta)
    return epsilon(params, k.beta, gamma) * math.exp(params.kappa * abs(qm.phi(x)))


def holder_exponents(p, q):
    """Default (s1, s2) from the Hoelder exponents 1/2 - 2/p and 1/4 - 5/(2q).

    These are the Schatten-class exponents of the two averaging operators
    (p > 4, q > 10).  How they transfer to a given Banach space is left to
    the caller; override them when sharper values are known.
    """
    if not p > 4 or not q > 10:
        raise ValueError("need p > 4 and q > 10")
    s1 = 0.5 - (0.0 if math.isinf(p) else 2.0 / p)
    s2 = 0.25 - (0.0 if math.isinf(q) else 2.5 / q)
    return s1, s2
