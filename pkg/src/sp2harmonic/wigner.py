"""Irreducible representations of SU(2) and the eigenvalue table c_p^l.

Conventions
-----------
The spin-l representation acts on homogeneous polynomials of degree 2l by
``pi_l(g) P(z1, z2) = P(a z1 + c z2, b z1 + d z2)`` where g = [[a, b], [c, d]].
The basis vector with weight p (p = -l, ..., l) is the monomial
``h_p = z1**(l-p) * z2**(l+p)`` with squared norm ``(l-p)! (l+p)! / (2l)!``;
matrices are written in the orthonormal basis ``e_p = h_p / |h_p|`` ordered by
increasing p, so row/column index ``i`` corresponds to ``p = -l + i``.
With these choices ``pi_l(d_theta) e_p = exp(-2 i p theta) e_p`` and
``pi_{1/2}(g)`` is the matrix of g itself.

Half-integers are passed either as floats (0.5, 1.5, ...) or anything
whose double is an integer; internally everything uses ``two_l = 2l``.
"""
import csv
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import gammaln

from . import numerics
from .su2 import SU2Element, d as d_elem, u as u_elem

__all__ = [
    "twice",
    "IrrepMatrix",
    "irrep",
    "generator_matrix",
    "wigner_coeff",
    "basis_norms",
    "cpl_closed_form",
    "cpl_integral",
    "cpl_group_average",
    "cpl_jacobi",
    "saddle_radius",
    "iter_cpl_columns",
    "CplTable",
    "cpl_table",
    "so2_invariant_vector",
    "cpl_envelope",
    "cpl_envelope_ratios",
    "fit_cpl_envelope",
]

BINOMIAL_MAX_TWO_L = 30


def twice(x, name="value"):
    """Return the integer 2*x, rejecting anything that is not a half-integer."""
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise ValueError(f"{name} must be a half-integer")
        return int(t)
    t = 2.0 * float(x)
    k = int(round(t))
    if not math.isfinite(t) or abs(t - k) > 1e-9:
        raise ValueError(f"{name} must be a half-integer")
    return k


def _check_ell(ell):
    two_l = twice(ell, "ell")
    if two_l < 0:
        raise ValueError("ell must be >= 0")
    return two_l


def _check_index(two_l, p, name="p"):
    two_p = twice(p, name)
    if abs(two_p) > two_l or (two_l - two_p) % 2:
        raise ValueError(f"index {name}={p} does not match ell={two_l / 2}")
    return two_p


@dataclass(frozen=True)
class IrrepMatrix:
    """Matrix of pi_l(g) in the orthonormal weight basis (p = -l, ..., l)."""

    ell: float
    entries: np.ndarray

    def index(self, p):
        return (twice(p) + twice(self.ell)) // 2


def basis_norms(two_l):
    """|h_p| for p = -l, ..., l, via log-gamma."""
    i = np.arange(two_l + 1)
    m, n = two_l - i, i
    return np.exp(0.5 * (gammaln(m + 1) + gammaln(n + 1) - gammaln(two_l + 1)))


def _irrep_binomial(two_l, g):
    """Expand (a z1 + c z2)^m (b z1 + d z2)^n; batched over g."""
    a, b = np.asarray(g.a), np.asarray(g.b)
    c, dd = -np.conj(b), np.conj(a)
    shape = a.shape
    size = two_l + 1
    comb = np.array([[math.comb(n, k) for k in range(size)] for n in range(size)],
                    dtype=float)
    pw = {}
    for key, z in (("a", a), ("b", b), ("c", c), ("d", dd)):
        pw[key] = np.stack([z ** k for k in range(size)], -1)
    mh = np.zeros(shape + (size, size), dtype=complex)
    for col in range(size):
        m, n = two_l - col, col
        # first factor contributes z1^i1, second z1^j1; row index is 2l - i1 - j1
        for i1 in range(m + 1):
            t1 = comb[m, i1] * pw["a"][..., i1] * pw["c"][..., m - i1]
            for j1 in range(n + 1):
                t2 = comb[n, j1] * pw["b"][..., j1] * pw["d"][..., n - j1]
                mh[..., two_l - i1 - j1, col] += t1 * t2
    nrm = basis_norms(two_l)
    return mh * (nrm[:, None] / nrm[None, :])


def generator_matrix(two_l, x, y):
    """Derived representation of X = [[i x, y], [-conj(y), -i x]].

    Returned in the orthonormal basis; the matrix is skew-Hermitian and
    tridiagonal.
    """
    i = np.arange(two_l + 1)
    m, n = two_l - i, i
    out = np.diag(1j * x * (m - n)).astype(complex)
    lower = -np.conj(y) * np.sqrt(m[:-1] * (n[:-1] + 1.0))
    upper = y * np.sqrt(n[1:] * (m[1:] + 1.0))
    out[i[1:], i[:-1]] = lower
    out[i[:-1], i[1:]] = upper
    return out


def _su2_log(g):
    """(x, y) with g = exp([[i x, y], [-conj(y), -i x]])."""
    a, b = complex(g.a), complex(g.b)
    s = math.hypot(a.imag, abs(b))
    psi = math.atan2(s, a.real)
    if s == 0.0:
        return (0.0, 0j) if a.real > 0 else (math.pi, 0j)
    k = psi / s
    return k * a.imag, k * b


def _irrep_exp(two_l, g):
    x, y = _su2_log(g)
    herm = -1j * generator_matrix(two_l, x, y)
    lam, vec = np.linalg.eigh((herm + herm.conj().T) / 2)
    return (vec * np.exp(1j * lam)) @ vec.conj().T


def irrep(ell, g, method="auto"):
    """Matrix of pi_l(g) in the orthonormal weight basis.

    ``method`` is "binomial" (explicit expansion of the polynomial action),
    "exp" (exponential of the tridiagonal derived representation) or "auto",
    which uses the expansion for 2l <= 30 and the exponential beyond, where
    the expansion suffers cancellation between terms of size about 2**l.
    Batched elements are supported by both methods.
    """
    two_l = _check_ell(ell)
    if method == "auto":
        method = "binomial" if two_l <= BINOMIAL_MAX_TWO_L else "exp"
    if method == "binomial":
        ent = _irrep_binomial(two_l, g)
    elif method == "exp":
        shape = g.shape
        if shape == ():
            ent = _irrep_exp(two_l, g)
        else:
            flat = SU2Element(np.ravel(g.a), np.ravel(g.b))
            ent = np.stack([_irrep_exp(two_l, flat[k]) for k in range(flat.a.size)])
            ent = ent.reshape(shape + ent.shape[-2:])
    else:
        raise ValueError(f"unknown method {method!r}")
    return IrrepMatrix(two_l / 2, ent)


def wigner_coeff(ell, p, p_prime, g):
    """f^l_{p,p'}(g) = <pi_l(g) h_{p'}, h_p> in the unnormalized monomial basis.

    Equals the orthonormal matrix entry times |h_p| |h_{p'}|.
    """
    two_l = _check_ell(ell)
    i = (_check_index(two_l, p) + two_l) // 2
    j = (_check_index(two_l, p_prime, "p_prime") + two_l) // 2
    nrm = basis_norms(two_l)
    val = irrep(ell, g).entries[..., i, j] * nrm[i] * nrm[j]
    return complex(val) if np.ndim(val) == 0 else val


def cpl_closed_form(ell, p):
    """Exact value 2^{-l} sum_k (-1)^k C(l-p, k) C(l+p, k), rounded once.

    This is the constant term of the contour integrand, summed in integer
    arithmetic; intended as a reference oracle for moderate l.
    """
    two_l = _check_ell(ell)
    two_p = _check_index(two_l, p)
    m, n = (two_l - two_p) // 2, (two_l + two_p) // 2
    s = sum((-1) ** k * math.comb(m, k) * math.comb(n, k) for k in range(min(m, n) + 1))
    val = float(Fraction(s, 2 ** (two_l // 2)))
    return val / math.sqrt(2.0) if two_l % 2 else val


def saddle_radius(ell, p):
    """Contour radius that keeps the integrand free of cancellation.

    The integrand's saddle points lie on the circle of radius
    sqrt((l-p)/(l+p)); half-unit shifts keep the endpoints p = +-l finite.
    """
    two_l = _check_ell(ell)
    two_p = _check_index(two_l, p)
    return math.sqrt((two_l - two_p + 1) / (two_l + two_p + 1))


def _contour_mean_mp(m, n, r, nodes, dps):
    """Trapezoid mean of the contour integrand with samples in ``dps`` digits."""
    with mpmath.workdps(dps):
        r = mpmath.mpf(r)
        scale = mpmath.mpf(2) ** (-mpmath.mpf(m + n) / 2)
        total = mpmath.mpc(0)
        for k in range(nodes):
            z = mpmath.expjpi(mpmath.mpf(2 * k) / nodes)
            total += (1 + 1 / (r * z)) ** m * (1 - r * z) ** n
        val = scale * total / nodes
        return complex(val)


def cpl_integral(ell, p, r=None):
    """c_p^l from the contour-integral formula by circle quadrature.

    Evaluates the mean over phi of
    2^{-l} (1 + e^{-i phi}/r)^{l-p} (1 - r e^{i phi})^{l+p}
    with 2*(2l)+4 nodes, which is exact because the integrand is a
    trigonometric polynomial.  The value does not depend on r > 0, but the
    rounding error does: it scales with the largest modulus of the integrand,
    which is about 2^l at r = 1 when |p| is close to l.  ``r=None`` uses
    :func:`saddle_radius`, which avoids that loss.  For other radii, when the
    double-precision rounding floor would exceed 1e-12, the same quadrature
    is repeated with the samples evaluated in extended precision (mpmath).
    """
    two_l = _check_ell(ell)
    two_p = _check_index(two_l, p)
    if r is None:
        r = saddle_radius(ell, p)
    r = float(r)
    if not r > 0.0:
        raise ValueError("r must be > 0")
    m, n = (two_l - two_p) // 2, (two_l + two_p) // 2
    scale = 2.0 ** (-two_l / 2)

    def f(phi):
        z = np.exp(1j * phi)
        return scale * (1 + 1 / (r * z)) ** m * (1 - r * z) ** n

    nodes = 2 * two_l + 4
    phi = 2 * np.pi * np.arange(nodes) / nodes
    peak = float(np.max(np.abs(f(phi))))
    floor = 64 * np.finfo(float).eps * peak
    if floor > 1e-12:
        val = _contour_mean_mp(m, n, r, nodes, 20 + int(math.ceil(math.log10(peak))))
        floor = 1e-15
    else:
        val = numerics.circle_quadrature(f, nodes)
    # imaginary residue is pure rounding; its floor is set by the integrand size
    if abs(val.imag) > max(1e-10, floor):
        raise ArithmeticError("imaginary residue in contour integral")
    return val.real


@functools.lru_cache(maxsize=64)
def _conjugation_average(two_l):
    u0 = irrep(two_l / 2, u_elem(0.0)).entries
    weights = np.arange(two_l + 1) - two_l / 2

    def f(phi):
        ph = np.exp(-2j * np.outer(phi, weights))
        return ph[:, :, None] * u0[None] * np.conj(ph)[:, None, :]

    avg = numerics.circle_quadrature(f, 2 * two_l + 4)
    avg.setflags(write=False)
    return avg


def cpl_group_average(ell, p):
    """c_p^l as the diagonal entry of the average of pi_l(d_phi u_0 d_-phi).

    The conjugation average is taken by circle quadrature over phi with
    4l+4 nodes, using pi_l(d_phi) = diag(exp(-2 i p phi)).
    """
    two_l = _check_ell(ell)
    two_p = _check_index(two_l, p)
    i = (two_p + two_l) // 2
    val = _conjugation_average(two_l)[i, i]
    if abs(val.imag) > 1e-10:
        raise ArithmeticError("imaginary residue in group average")
    return val.real


def cpl_jacobi(ell, p):
    """2^{-|p|} P^{(0, 2|p|)}_{l-|p|}(0) by the Jacobi recurrence.

    The normalization (a power of two in |p|, not in l-p) was fixed by
    comparison with the other methods; see the tests.
    """
    two_l = _check_ell(ell)
    two_p = abs(_check_index(two_l, p))
    n = (two_l - two_p) // 2
    return 2.0 ** (-two_p / 2) * numerics.jacobi(n, 0.0, float(two_p), 0.0)


def iter_cpl_columns(two_lmax):
    """Run the Jacobi recurrence in l for every p >= 0 at once.

    Yields ``(n, two_p, mantissa, log_scale)`` for n = 0, 1, ...; entry k of
    the arrays belongs to p = two_p[k]/2 and l = p + n, and
    ``c_p^l = mantissa * exp(log_scale)``.  Only columns with l <= lmax are
    included.  Columns are rescaled independently so that neither the
    starting values 2^{-p} nor later growth leave the double range.
    """
    two_lmax = int(two_lmax)
    j = np.arange(two_lmax + 1, dtype=float)
    beta = j
    y_prev = np.ones_like(j)
    log_s = -0.5 * j * math.log(2.0)
    yield 0, j.astype(int), y_prev, log_s
    if two_lmax < 2:
        return
    y = -0.5 * j
    k = two_lmax - 1
    yield 1, j[:k].astype(int), y[:k], log_s[:k]
    n = 1
    while 2 * (n + 1) <= two_lmax:
        k = two_lmax - 2 * (n + 1) + 1
        j, beta, y_prev, y, log_s = j[:k], beta[:k], y_prev[:k], y[:k], log_s[:k]
        s = 2 * n + beta
        num = (s + 1) * (-beta * beta) * y - 2 * n * (n + beta) * (s + 2) * y_prev
        y_prev, y = y, num / (2 * (n + 1) * (n + beta + 1) * s)
        big = np.maximum(np.abs(y), np.abs(y_prev))
        rescale = (big > 1e150) | ((big < 1e-150) & (big > 0))
        if rescale.any():
            f = np.where(rescale, big, 1.0)
            y, y_prev = y / f, y_prev / f
            log_s = log_s + np.log(f)
        n += 1
        yield n, j.astype(int), y, log_s


@dataclass(frozen=True)
class CplTable:
    """Table of c_p^l for l <= lmax.

    ``values[two_l, i]`` holds c_p^l with p = -l + i; entries with i > 2l are
    unused (NaN).
    """

    two_lmax: int
    values: np.ndarray

    @property
    def lmax(self):
        return self.two_lmax / 2

    def __call__(self, ell, p):
        two_l = _check_ell(ell)
        if two_l > self.two_lmax:
            raise KeyError(f"ell={ell} beyond table")
        two_p = _check_index(two_l, p)
        return float(self.values[two_l, (two_p + two_l) // 2])

    def rows(self):
        """(l, p, c) triples in order of increasing l, then p."""
        for two_l in range(self.two_lmax + 1):
            for i in range(two_l + 1):
                yield two_l / 2, (2 * i - two_l) / 2, float(self.values[two_l, i])

    def row_values(self, two_l):
        return self.values[two_l, : two_l + 1]

    def to_csv(self, stream, digits=15):
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["ell", "p", "c"])
        for ell, p, c in self.rows():
            w.writerow([repr(ell), repr(p + 0.0), format(c, f".{digits}g")])


def cpl_table(lmax, method="recurrence"):
    """Build the table c_p^l for all l <= lmax.

    ``method``: "recurrence" (vectorized Jacobi recurrence, any size),
    "integral" (contour quadrature at the saddle radius), "group"
    (conjugation average of the representation) or "closed_form" (integer
    arithmetic).  The last three are per-entry reference methods.
    """
    two_lmax = _check_ell(lmax)
    vals = np.full((two_lmax + 1, two_lmax + 1), np.nan)
    if method == "recurrence":
        for n, two_p, y, log_s in iter_cpl_columns(two_lmax):
            c = y * np.exp(log_s)
            two_l = two_p + 2 * n
            vals[two_l, (two_l + two_p) // 2] = c
            vals[two_l, (two_l - two_p) // 2] = c
    else:
        fn = {"integral": cpl_integral, "group": cpl_group_average,
              "closed_form": cpl_closed_form}.get(method)
        if fn is None:
            raise ValueError(f"unknown method {method!r}")
        for two_l in range(two_lmax + 1):
            for i in range(two_l + 1):
                vals[two_l, i] = fn(two_l / 2, (2 * i - two_l) / 2)
    vals.setflags(write=False)
    return CplTable(two_lmax, vals)


def so2_invariant_vector(ell):
    """Unit vector of the spin-l space fixed by every rotation r_theta.

    Built as the dominant eigenvector of the average of pi_l(r_theta) over
    theta (circle quadrature with 4l+4 nodes).  The average is assembled
    from the spectral decomposition of the rotation generator, on which the
    quadrature acts diagonally.  Phase: the largest entry is real positive.
    """
    two_l = _check_ell(ell)
    if two_l % 2:
        raise ValueError("no invariant vector")
    # r_theta = exp(theta X) with X = [[0, -1], [1, 0]], i.e. x = 0, y = -1
    herm = -1j * generator_matrix(two_l, 0.0, -1.0)
    lam, vec = np.linalg.eigh((herm + herm.conj().T) / 2)
    avg = numerics.circle_quadrature(lambda t: np.exp(1j * np.outer(t, lam)),
                                     2 * two_l + 4)
    proj = (vec * avg) @ vec.conj().T
    ev, evec = np.linalg.eigh((proj + proj.conj().T) / 2)
    if ev[-1] < 0.5 or (len(ev) > 1 and ev[-2] > 0.5):
        raise ArithmeticError("invariant space is not one-dimensional")
    w = evec[:, -1]
    k = int(np.argmax(np.abs(w)))
    w = w * (abs(w[k]) / w[k])
    return w / np.linalg.norm(w)


def cpl_envelope(ell, p):
    """min((1+l)^{-1/4}, ||p| - l/sqrt 2|^{-1/2}), broadcasting over arrays."""
    ell = np.asarray(ell, dtype=float)
    gap = np.abs(np.abs(np.asarray(p, dtype=float)) - ell / np.sqrt(2.0))
    with np.errstate(divide="ignore"):
        second = np.where(gap > 0, gap ** -0.5, np.inf)
    return np.minimum((1.0 + ell) ** -0.25, second)


def cpl_envelope_ratios(table):
    """Per-l maximum of |c_p^l| / cpl_envelope(l, p); index is 2l."""
    out = np.empty(table.two_lmax + 1)
    for two_l in range(table.two_lmax + 1):
        p = (np.arange(two_l + 1) * 2 - two_l) / 2
        out[two_l] = np.max(np.abs(table.row_values(two_l)) / cpl_envelope(two_l / 2, p))
    return out


def fit_cpl_envelope(lmax=100, table=None):
    """Empirical constant C with |c_p^l| <= C * cpl_envelope(l, p) for l <= lmax."""
    two_lmax = _check_ell(lmax)
    if table is None:
        table = _cached_table(two_lmax)
    return float(np.max(cpl_envelope_ratios(table)[: two_lmax + 1]))


@functools.lru_cache(maxsize=8)
def _cached_table(two_lmax):
    return cpl_table(two_lmax / 2)
