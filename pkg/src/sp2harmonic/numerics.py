"""Quadrature, orthogonal-polynomial recurrences and elementary analytic bounds.

Everything here is a pure function of its arguments.  Complex scalars are
plain Python/numpy complex numbers and dense matrices are numpy arrays.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "circle_quadrature",
    "legendre",
    "legendre_table",
    "jacobi",
    "TailBound",
    "tail_bound",
    "gaussian_ridge_integral",
    "gaussian_ridge_ratio",
    "gaussian_ridge_grid",
    "gaussian_ridge_sup",
]


def circle_quadrature(f, nodes, vectorized=True):
    """Equal-weight trapezoid average of a 2*pi-periodic function.

    Parameters
    ----------
    f : callable
        Called with the array of ``nodes`` equally spaced angles in
        ``[0, 2*pi)`` when ``vectorized`` is true, otherwise once per angle.
        The leading axis of the result must index the nodes; any trailing
        axes (e.g. matrix entries) are averaged independently.
    nodes : int
        Number of nodes.  The rule is exact for trigonometric polynomials of
        degree ``< nodes``.

    Returns
    -------
    complex or ndarray
    """
    nodes = int(nodes)
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    phi = 2.0 * np.pi * np.arange(nodes) / nodes
    if vectorized:
        vals = np.asarray(f(phi))
        if vals.ndim == 0:
            vals = np.broadcast_to(vals, (nodes,))
    else:
        vals = np.stack([np.asarray(f(x)) for x in phi])
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite integrand")
    out = vals.mean(axis=0)
    return complex(out) if np.ndim(out) == 0 else out


def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("out of domain")
    return x


def legendre(n, x):
    """Legendre polynomial P_n(x) on [-1, 1] by the three-term recurrence.

    ``x`` may be an array; the result has the same shape.
    """
    n = int(n)
    if n < 0:
        raise ValueError("degree must be >= 0")
    x = _check_unit_interval(x)
    p_prev, p = np.ones_like(x), x.copy()
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p if p.ndim else float(p)


def legendre_table(nmax, x):
    """All of P_0(x), ..., P_nmax(x); shape ``(nmax + 1,) + x.shape``."""
    nmax = int(nmax)
    if nmax < 0:
        raise ValueError("degree must be >= 0")
    x = _check_unit_interval(x)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def jacobi(n, alpha, beta, x):
    """Jacobi polynomial P_n^(alpha, beta)(x) by the standard recurrence."""
    n = int(n)
    if n < 0:
        raise ValueError("degree must be >= 0")
    a, b = float(alpha), float(beta)
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(1, n):
        s = 2 * k + a + b
        c1 = 2 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b)
        c3 = 2 * (k + a) * (k + b) * (s + 2)
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return p if p.ndim else float(p)


@dataclass(frozen=True)
class TailBound:
    """Bound on sum of k**-alpha over a shifted lattice above x."""

    alpha: float
    x: float
    bound: float


def tail_bound(alpha, x):
    """Bound ``alpha/(alpha-1) * x**(1-alpha)`` on the lattice tail sum.

    For x >= 1 and every offset u, the sum of k**-alpha over k in (u + Z)
    with k > x is at most this value: the first term is at most x**-alpha
    and the rest is dominated by the integral from x.  For 0 < x < 1 it can
    fail, since a lattice point just above x contributes nearly x**-alpha
    alone (alpha=2, x=0.1: bound 20, sum above 100).  The operator tails
    only call it with x >= 1.
    """
    alpha, x = float(alpha), float(x)
    if not alpha > 1.0:
        raise ValueError("divergent tail")
    if not x > 0.0:
        raise ValueError("x must be > 0")
    return TailBound(alpha, x, alpha / (alpha - 1.0) * x ** (1.0 - alpha))


def gaussian_ridge_integral(u, v, tol=1e-10):
    """(1/pi) * integral over [0, pi] of exp(-(u - v cos s)**2) ds."""
    u, v = float(u), float(v)

    def f(s):
        return np.exp(-((u - v * np.cos(s)) ** 2))

    # the integrand peaks where v cos s = u; split the interval there
    points = None
    if v != 0.0 and abs(u) < abs(v):
        points = [float(np.arccos(u / v))]
    val, _ = integrate.quad(f, 0.0, np.pi, points=points, epsabs=tol,
                            epsrel=0.0, limit=200)
    return val / np.pi


def gaussian_ridge_ratio(u, v, tol=1e-10):
    """Ridge integral times ``sqrt((|u+v|+1)(|u-v|+1))``.

    Its supremum over the plane is the ridge constant, which is
    not explicit; sweeps of this ratio estimate it.
    """
    weight = np.sqrt((abs(u + v) + 1.0) * (abs(u - v) + 1.0))
    return gaussian_ridge_integral(u, v, tol) * weight


def gaussian_ridge_grid(extent, step=0.5, tol=1e-10):
    """Nodes ``grid`` of [0, extent] and the ratio matrix ``R[i, j]`` at (grid[i], grid[j])."""
    grid = np.arange(0.0, float(extent) + 0.5 * step, step)
    vals = np.array([[gaussian_ridge_ratio(u, v, tol) for v in grid] for u in grid])
    return grid, vals


def gaussian_ridge_sup(extent, step=0.5, tol=1e-10):
    """Maximum of :func:`gaussian_ridge_ratio` on the grid [0, extent]^2.

    Returns ``(sup, u, v)`` at the maximizing node.
    """
    grid, vals = gaussian_ridge_grid(extent, step, tol)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    return float(vals[i, j]), float(grid[i]), float(grid[j])
