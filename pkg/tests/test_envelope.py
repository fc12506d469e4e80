import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from sp2harmonic import envelope as env, quasimorphism as qm


def params(s1=1.0, s2=1.0, s=0.2, kappa=0.0):
    return env.EnvelopeParams(s1, s2, s, kappa)


def test_p_poly_examples():
    pr = params()
    assert env.p_poly(pr, 0.0) == pytest.approx(1.0)
    assert env.p_poly(pr) == pytest.approx(0.44)
    pr = params(0.3, 0.7, 0.0)
    assert env.p_poly(pr, 0.0) == pytest.approx(0.21)


def test_s_minus_examples():
    assert env.s_minus(1, 1) == pytest.approx(1.5 - math.sqrt(1.25), abs=1e-15)
    assert env.s_minus(1, 1) == pytest.approx(0.3819660, abs=1e-7)
    # not symmetric in its arguments
    assert env.s_minus(1, 2) != pytest.approx(env.s_minus(2, 1))
    assert env.s_minus(1, 2) == pytest.approx(2 - math.sqrt(2))
    assert env.s_minus(2, 1) == pytest.approx(2.5 - math.sqrt(4.25))
    with pytest.raises(ValueError):
        env.s_minus(0, 1)


@given(s1=st.floats(1e-3, 1.0), s2=st.floats(1e-3, 1.0))
def test_s_minus_is_smallest_root(s1, s2):
    sm = env.s_minus(s1, s2)
    assert 0 < sm < s1 and sm < s2
    pr = env.EnvelopeParams(s1, s2, 0.0)
    assert abs(env.p_poly(pr, sm)) < 1e-12
    xs = np.linspace(0, sm, 1000, endpoint=False)
    assert np.all(env.p_poly(pr, xs) > 0)


def test_params_validation():
    with pytest.raises(ValueError, match="below s_minus"):
        params(s=0.39)
    with pytest.raises(ValueError):
        params(s1=0.0)
    with pytest.raises(ValueError):
        params(kappa=-1.0)
    with pytest.warns(RuntimeWarning):
        env.EnvelopeParams(1.5, 1.0, 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        params()


def test_epsilon_examples():
    pr = params()
    assert env.epsilon(pr, 0.0, 0.0) == 1.0
    b = 3.0
    assert env.epsilon(pr, b, 0.0) == pytest.approx(math.exp(-0.44 * b / 1.8))
    assert env.epsilon(pr, 2.0, 1.0) == pytest.approx(math.exp(-0.44 * max(2 / 1.8, 3 / 2.8)))
    with pytest.raises(ValueError, match="not in closed Weyl chamber"):
        env.epsilon(pr, 1.0, 2.0)
    with pytest.raises(ValueError, match="not in closed Weyl chamber"):
        env.epsilon(pr, 1.0, -0.1)


def test_crossover_locus():
    pr = params(0.4, 0.15, 0.05)
    k = env.crossover_ratio(pr)
    for gamma in (0.1, 1.0, 3.0):
        beta = k * gamma
        a = beta / (pr.s1 + pr.s2 - pr.s)
        b = (beta + gamma) / (2 * pr.s1 + pr.s2 - pr.s)
        assert a == pytest.approx(b)


def test_decay_bound_and_monotonicity():
    for s1, s2 in [(1.0, 1.0), (0.3, 0.1), (0.5, 0.9)]:
        pr = env.EnvelopeParams(s1, s2, 0.5 * env.s_minus(s1, s2))
        c = env.decay_rate(pr)
        beta = np.linspace(0, 20, 81)
        B, G = np.meshgrid(beta, beta, indexing="ij")
        mask = G <= B
        eps = env.epsilon_grid(pr, B[mask], G[mask])
        assert np.all(eps <= np.exp(-c * B[mask]) * (1 + 1e-12))
        grid = np.where(mask, 0.0, np.nan)
        grid[mask] = eps
        # nonincreasing along beta (columns) and gamma (rows) inside the chamber
        d_beta = np.diff(grid, axis=0)
        d_gamma = np.diff(grid, axis=1)
        assert np.all(d_beta[~np.isnan(d_beta)] <= 1e-15)
        assert np.all(d_gamma[~np.isnan(d_gamma)] <= 1e-15)


def test_epsilon_cover_examples():
    pr = params(kappa=0.3)
    assert env.epsilon_cover(pr, qm.cover_D(2.0, 0.0)) == pytest.approx(env.epsilon(pr, 2.0, 0.0))
    assert env.epsilon_cover(pr, qm.cover_v(1.2)) == pytest.approx(math.exp(0.3 * 1.2))
    vals = [env.epsilon_cover(pr, qm.cover_v(0.5) @ qm.cover_D(n, 0.0)) for n in range(1, 30, 4)]
    expected = [math.exp(0.15) * env.epsilon(pr, n, 0.0) for n in range(1, 30, 4)]
    np.testing.assert_allclose(vals, expected, rtol=1e-9)
    assert vals[-1] < 1e-3


def test_holder_exponents():
    assert env.holder_exponents(8, 20) == pytest.approx((0.25, 0.125))
    s1, s2 = env.holder_exponents(math.inf, math.inf)
    assert (s1, s2) == (0.5, 0.25)
    with pytest.raises(ValueError):
        env.holder_exponents(4, 20)
