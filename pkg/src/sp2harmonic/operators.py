"""Spectra of the averaging operators T_theta and S_theta and their Schatten norms.

Both operators act on L^2(SU(2)) and are diagonal in the Wigner basis:

* S_theta multiplies f^l_{p,p'} by exp(2 i p theta) c_p^l, so each (l, p)
  eigenvalue has multiplicity 2l+1 (the free index p');
* T_theta vanishes off the integer-spin blocks and on block n has the single
  nonzero eigenvalue <pi_n(d_theta) w_n, w_n>, w_n the rotation-invariant
  vector, with multiplicity 2n+1.

Schatten sums are truncated and the omitted part is bounded through
:func:`numerics.tail_bound` using fitted envelope constants times a safety
factor of 1.1.
"""
import functools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import numerics, wigner

__all__ = [
    "SAFETY",
    "SpectralModelS",
    "SpectralModelT",
    "SchattenResult",
    "TruncationError",
    "t_eigenvalue",
    "t_eigenvalues",
    "t_envelope_constant",
    "s_envelope_constant",
    "cpl_moments",
    "schatten_T",
    "schatten_S",
    "HolderPoint",
    "HolderFit",
    "holder_fit",
    "default_threads",
]

SAFETY = 1.1
T_FIT_NMAX = 2000
S_FIT_LMAX = 100
QUARTER = math.pi / 4


def default_threads():
    """Thread count from SP2HARMONIC_THREADS, default 1."""
    try:
        return max(1, int(os.environ.get("SP2HARMONIC_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SpectralModelS:
    """Eigenvalues exp(2 i p theta) c_p^l of S_theta, multiplicity 2l+1."""

    table: wigner.CplTable

    def eigenvalue(self, ell, p, theta):
        return np.exp(2j * wigner.twice(p) / 2 * theta) * self.table(ell, p)

    @staticmethod
    def multiplicity(ell):
        return wigner.twice(ell) + 1


@dataclass(frozen=True)
class SpectralModelT:
    """Eigenvalue of T_theta on the integer block n, multiplicity 2n+1."""

    def eigenvalue(self, n, theta):
        return t_eigenvalue(n, theta)

    @staticmethod
    def multiplicity(n):
        return 2 * int(n) + 1


@functools.lru_cache(maxsize=256)
def _invariant_weights(n):
    w = wigner.so2_invariant_vector(n)
    return np.abs(w) ** 2


def t_eigenvalue(n, theta):
    """<pi_n(d_theta) w_n, w_n> for the rotation-invariant unit vector w_n."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    weights = _invariant_weights(n)
    p = np.arange(2 * n + 1) - n
    val = np.sum(weights * np.exp(-2j * p * theta))
    if abs(val.imag) > 1e-10:
        raise ArithmeticError("imaginary residue in T eigenvalue")
    return float(val.real)


def t_eigenvalues(nmax, theta):
    """lambda_n(theta) for n = 0..nmax, shape (nmax+1,) + shape(theta).

    Uses lambda_n(theta) = P_n(cos 2 theta), which is checked against
    :func:`t_eigenvalue` in the test suite; the recurrence is what makes
    sums over 10^5 blocks affordable.
    """
    return numerics.legendre_table(nmax, np.clip(np.cos(2 * np.asarray(theta, float)), -1, 1))


def t_envelope_constant(theta, nfit=T_FIT_NMAX):
    """max over 1 <= n <= nfit of sqrt(n) |lambda_n(theta)|."""
    lam = t_eigenvalues(nfit, theta)[1:]
    n = np.arange(1, nfit + 1)
    return float(np.max(np.sqrt(n) * np.abs(lam)))


def s_envelope_constant(lmax=S_FIT_LMAX):
    """Fitted constant of the c_p^l envelope over l <= lmax."""
    return wigner.fit_cpl_envelope(lmax)


@dataclass(frozen=True)
class SchattenResult:
    """Truncated Schatten norm with a bound on the omitted q-th power tail.

    ``certified_value_interval`` is ``(value, (value**q + tail)**(1/q))``.
    ``certified`` is false when the requested relative tail was not reached.
    """

    q: float
    value: float
    lmax: float
    tail: float
    certified_value_interval: tuple
    certified: bool = True
    warning: str = None
    theta1: float = None
    theta2: float = None

    @property
    def upper(self):
        return self.certified_value_interval[1]


class TruncationError(RuntimeError):
    """Tail target not reached at the truncation cap; ``partial`` holds the result."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def _interval(value, tail, q):
    if math.isinf(q):
        return (value, max(value, tail))
    if math.isinf(tail):
        return (value, math.inf)
    return (value, (value ** q + tail) ** (1.0 / q))


def _t_tail(p, k, n):
    # (2m+1)|d lambda_m|^p <= 3 m k^p m^{-p/2} for m > n
    return 3.0 * k ** p * numerics.tail_bound(p / 2.0 - 1.0, n).bound


def _t_power_sum(p, theta, n):
    lam = t_eigenvalues(n, np.array([theta, QUARTER]))
    diff = np.abs(lam[:, 0] - lam[:, 1])
    mult = 2 * np.arange(n + 1) + 1.0
    return float(np.sum(mult * diff ** p)), diff


def schatten_T(p, theta, rel_tol=1e-8, nmax=None, nmax_cap=100_000, nfit=T_FIT_NMAX):
    """Schatten p-norm of T_theta - T_{pi/4}.

    The truncation degree N is the smallest for which the tail bound is at
    most ``rel_tol`` times the p-th power of the value (the quantity the
    tail is measured in).  The tail uses |lambda_n| <= K n^{-1/2} with K
    fitted over n <= ``nfit`` and multiplied by 1.1.  ``p = inf`` gives the
    operator norm.  If N would exceed ``nmax_cap``, TruncationError is
    raised with the result at the cap attached.
    """
    p = float(p)
    theta = float(theta)
    if not p > 2:
        raise ValueError("p must be > 2")
    k = SAFETY * (t_envelope_constant(theta, nfit) + t_envelope_constant(QUARTER, nfit))
    if math.isinf(p):
        n = nfit if nmax is None else int(nmax)
        lam = t_eigenvalues(n, np.array([theta, QUARTER]))
        value = float(np.max(np.abs(lam[:, 0] - lam[:, 1])))
        tail = k / math.sqrt(n + 1)
        return SchattenResult(p, value, n, tail, _interval(value, tail, p),
                              tail <= value, None, theta, QUARTER)
    warn = None
    if p <= 4:
        warn = "p <= 4: series may diverge, tail not certified"
    if math.isclose(math.cos(2 * theta), 0.0, abs_tol=1e-15) and warn is None:
        return SchattenResult(p, 0.0, 0, 0.0, (0.0, 0.0), True, None, theta, QUARTER)
    if nmax is not None:
        n = int(nmax)
    elif warn is not None:
        n = nmax_cap
    else:
        s0, _ = _t_power_sum(p, theta, nfit)
        alpha = p / 2.0 - 1.0
        if s0 == 0.0:
            n = nmax_cap + 1
        else:
            need = 3.0 * k ** p * alpha / (alpha - 1.0) / (rel_tol * s0)
            n = max(nfit, int(math.ceil(need ** (1.0 / (alpha - 1.0)))))
    capped = n > nmax_cap
    n = min(n, nmax_cap)
    s, _ = _t_power_sum(p, theta, n)
    value = s ** (1.0 / p)
    tail = math.inf if warn else _t_tail(p, k, n)
    certified = warn is None and tail <= rel_tol * s
    res = SchattenResult(p, value, n, tail, _interval(value, tail, p), certified,
                         warn, theta, QUARTER)
    if warn:
        warnings.warn(warn, RuntimeWarning, stacklevel=2)
    if capped and nmax is None and warn is None:
        raise TruncationError("truncation failure", res)
    return res


@functools.lru_cache(maxsize=16)
def cpl_moments(two_lmax, qs, checkpoints):
    """Weighted power sums of |c_p^l| by l-band.

    Returns ``{q: A}`` where ``A[k, j]`` is the sum over
    ``checkpoints[k-1] < 2l <= checkpoints[k]`` of ``(2l+1) |c_{j/2}^l|**q``
    (``p = j/2 >= 0``), accumulated cumulatively so row k covers all
    ``2l <= checkpoints[k]``.  Arguments are tuples/ints so results cache.
    """
    cps = np.asarray(checkpoints, dtype=int)
    if cps[-1] != two_lmax or np.any(np.diff(cps) <= 0):
        raise ValueError("checkpoints must increase and end at two_lmax")
    acc = {q: np.zeros((len(cps), two_lmax + 1)) for q in qs}
    for n, two_p, y, log_s in wigner.iter_cpl_columns(two_lmax):
        two_l = two_p + 2 * n
        band = np.searchsorted(cps, two_l)
        with np.errstate(divide="ignore", under="ignore"):
            logc = np.log(np.abs(y)) + log_s
            for q in qs:
                acc[q][band, two_p] += (two_l + 1) * np.exp(q * logc)
    out = {}
    for q in qs:
        a = np.cumsum(acc[q], axis=0)
        a.setflags(write=False)
        out[q] = a
    return out


def _s_tail(q, c, lmax):
    # sum over l > lmax of (2l+1) sum_p 2^q (c * envelope)^q
    base = numerics.tail_bound(q / 4.0 - 1.5, 1.0 + lmax).bound
    return (2.0 * c) ** q * 2.0 * (6.0 + 4.0 * q / (q - 2.0)) * 2.0 * base


def _checkpoints(two_cap, start=128):
    cps = []
    c = min(start, two_cap)
    while c < two_cap:
        cps.append(c)
        c *= 2
    cps.append(two_cap)
    return tuple(cps)


def _s_operator_norm(theta1, theta2, two_lmax):
    best = 0.0
    for n, two_p, y, log_s in wigner.iter_cpl_columns(two_lmax):
        c = np.abs(y) * np.exp(log_s)
        gap = np.abs(np.exp(1j * two_p * theta1) - np.exp(1j * two_p * theta2)) * c
        best = max(best, float(gap.max()))
    return best


def schatten_S(q, theta1, theta2, rel_tol=1e-6, lmax=None, lmax_cap=4096,
               c_fit=None):
    """Schatten q-norm of S_theta1 - S_theta2 from the eigenvalue expansion.

    The sum over (l, p) is truncated at the first l-checkpoint (128, 256,
    ... up to ``lmax_cap``) whose tail bound is at most ``rel_tol`` times
    the q-th power of the value; the bound uses the c_p^l envelope with the
    fitted constant times 1.1.  ``q = inf`` gives the operator norm over
    l <= lmax (default 200).  Raises TruncationError (carrying the result at
    the cap) when the target is not met.
    """
    q = float(q)
    theta1, theta2 = float(theta1), float(theta2)
    if not q > 2:
        raise ValueError("q must be > 2")
    c = SAFETY * (s_envelope_constant() if c_fit is None else float(c_fit))
    if math.isinf(q):
        two_l = wigner.twice(200 if lmax is None else lmax, "lmax")
        value = _s_operator_norm(theta1, theta2, two_l)
        tail = 2.0 * c * (1.0 + two_l / 2) ** -0.25
        return SchattenResult(q, value, two_l / 2, tail, _interval(value, tail, q),
                              tail <= value, None, theta1, theta2)
    warn = None if q > 10 else "q <= 10: envelope tail bound diverges, not certified"
    if warn:
        warnings.warn(warn, RuntimeWarning, stacklevel=2)
    if theta1 == theta2:
        return SchattenResult(q, 0.0, 0.0, 0.0, (0.0, 0.0), True, warn, theta1, theta2)
    two_cap = wigner.twice(lmax_cap if lmax is None else lmax, "lmax")
    cps = _checkpoints(two_cap) if lmax is None else (two_cap,)
    moments = cpl_moments(two_cap, (q,), cps)[q]
    j = np.arange(two_cap + 1)
    gap = np.abs(np.exp(1j * j * theta1) - np.exp(1j * j * theta2)) ** q
    gap[0] = 0.0
    res = None
    for k, cp in enumerate(cps):
        s = 2.0 * float(np.dot(moments[k], gap))
        tail = math.inf if warn else _s_tail(q, c, cp / 2)
        ok = warn is None and tail <= rel_tol * s
        res = SchattenResult(q, s ** (1.0 / q), cp / 2, tail,
                             _interval(s ** (1.0 / q), tail, q), ok, warn, theta1, theta2)
        if ok:
            return res
    if lmax is None and warn is None:
        raise TruncationError("truncation failure", res)
    return res


@dataclass(frozen=True)
class HolderPoint:
    theta1: float
    theta2: float
    value: float
    upper: float
    tail: float
    lmax: float
    ratio: float
    ratio_upper: float
    certified: bool


@dataclass(frozen=True)
class HolderFit:
    """Hölder-constant fit; ``max_ratio`` is the fitted constant."""

    kind: str
    q: float
    exponent_expected: float
    max_ratio: float
    max_ratio_upper: float
    table: list
    notes: list = field(default_factory=list)

    @property
    def all_certified(self):
        return all(pt.certified for pt in self.table)


def holder_exponent(kind, q):
    if kind == "S":
        return 0.25 - 2.5 / q
    if kind == "T":
        return 0.5 - 2.0 / q
    raise ValueError("kind must be 'S' or 'T'")


def holder_fit(kind, q_or_p, theta_grid, threads=None, **kwargs):
    """Fit the Hölder constant of theta -> S_theta or T_theta in Schatten norm.

    ``theta_grid`` is a list of angle pairs (theta1, theta2); for ``kind="T"``
    plain angles are accepted and paired with pi/4, the only reference point
    for which the estimate is stated, and angles outside [pi/6, pi/3] are
    skipped.  Pairs with equal angles are skipped.  Points whose tail target
    is not reached contribute their truncated value and are marked
    uncertified; ``max_ratio_upper`` uses the upper interval endpoints.
    """
    q = float(q_or_p)
    exponent = holder_exponent(kind, q)
    if kind == "S" and not q > 10:
        raise ValueError("S fit needs q > 10")
    if kind == "T" and not q > 4:
        raise ValueError("T fit needs p > 4")
    notes, pairs = [], []
    for item in theta_grid:
        t1, t2 = (item, QUARTER) if np.ndim(item) == 0 else (float(item[0]), float(item[1]))
        if kind == "T":
            if not math.isclose(t2, QUARTER, abs_tol=1e-12):
                notes.append(f"skipped ({t1}, {t2}): reference angle must be pi/4")
                continue
            if not (math.pi / 6 - 1e-12 <= t1 <= math.pi / 3 + 1e-12):
                notes.append(f"skipped {t1}: outside [pi/6, pi/3]")
                continue
        if t1 == t2 or math.isclose(t1, t2, abs_tol=1e-15):
            notes.append(f"skipped ({t1}, {t2}): zero separation")
            continue
        pairs.append((t1, t2))
    if not pairs:
        raise ValueError("no usable grid points")

    def one(pair):
        fn = schatten_S if kind == "S" else schatten_T
        args = (q, *pair) if kind == "S" else (q, pair[0])
        try:
            return fn(*args, **kwargs)
        except TruncationError as exc:
            return exc.partial

    nthreads = default_threads() if threads is None else max(1, int(threads))
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(pr) for pr in pairs]
    table = []
    for (t1, t2), res in zip(pairs, results):
        scale = abs(t1 - t2) ** exponent
        table.append(HolderPoint(t1, t2, res.value, res.upper, res.tail, res.lmax,
                                 res.value / scale, res.upper / scale, res.certified))
    return HolderFit(kind, q, exponent, max(pt.ratio for pt in table),
                     max(pt.ratio_upper for pt in table), table, notes)
