import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sp2harmonic import numerics, operators as op, su2, wigner

QUARTER = math.pi / 4


def test_t_eigenvalue_examples():
    for th in (0.0, 0.3, 1.1):
        assert op.t_eigenvalue(0, th) == pytest.approx(1.0)
        assert op.t_eigenvalue(1, th) == pytest.approx(math.cos(2 * th), abs=1e-14)


def test_t_eigenvalue_is_legendre():
    thetas = np.linspace(0.05, 3.0, 20)
    worst = 0.0
    for n in range(101):
        for th in thetas:
            worst = max(worst, abs(op.t_eigenvalue(n, th) - numerics.legendre(n, math.cos(2 * th))))
    assert worst < 1e-10


def test_t_eigenvalues_table_matches_blocks():
    lam = op.t_eigenvalues(30, np.array([0.2, QUARTER]))
    for n in range(31):
        assert lam[n, 0] == pytest.approx(op.t_eigenvalue(n, 0.2), abs=1e-12)
        assert lam[n, 1] == pytest.approx(op.t_eigenvalue(n, QUARTER), abs=1e-12)


def test_spectral_models():
    table = wigner.cpl_table(4)
    s = op.SpectralModelS(table)
    assert s.eigenvalue(0.5, 0.5, 0.2) == pytest.approx(np.exp(0.2j) * 2 ** -0.5)
    assert s.multiplicity(1.5) == 4
    t = op.SpectralModelT()
    assert t.eigenvalue(1, 0.2) == pytest.approx(math.cos(0.4))
    assert t.multiplicity(3) == 7
    for two_l in range(9):
        for two_p in range(-two_l, two_l + 1, 2):
            assert abs(s.eigenvalue(two_l / 2, two_p / 2, 1.3)) <= 1 + 1e-12


def test_s_diagonal_in_wigner_basis():
    # assemble <S_theta f_{q,q'}, f_{p,p'}> by Haar quadrature of the defining average
    th = 0.35
    phis = 2 * np.pi * np.arange(32) / 32
    conj_inv = [(su2.d(f) @ su2.u(th) @ su2.d(-f)).inverse() for f in phis]
    for ell in (0.5, 1, 1.5, 2, 3):
        n = wigner.twice(ell) + 1

        def gram(x):
            fx = wigner.irrep(ell, x).entries
            sf = np.mean([wigner.irrep(ell, g @ x).entries for g in conj_inv], axis=0)
            return sf[:, :, :, None, None] * np.conj(fx)[:, None, None, :, :]

        m = su2.haar_average(gram, resolution=16) * n
        p = np.arange(n) - ell
        c = np.array([wigner.cpl_closed_form(ell, q) for q in p])
        expected = np.zeros((n, n, n, n), complex)
        for i in range(n):
            for j in range(n):
                expected[i, j, i, j] = np.exp(2j * p[i] * th) * c[i]
        assert np.max(np.abs(m - expected)) < 1e-8


def test_schatten_t_zero_at_reference():
    assert op.schatten_T(6, QUARTER).value == 0.0


def test_schatten_t_two_truncations_agree_within_tail():
    th = math.pi / 6
    a = op.schatten_T(6, th, nmax=2000)
    b = op.schatten_T(6, th, nmax=8000)
    assert b.value ** 6 - a.value ** 6 <= a.tail
    assert b.value >= a.value
    assert a.certified_value_interval[0] <= b.value <= a.upper


def test_schatten_t_truncation_error_carries_partial():
    with pytest.raises(op.TruncationError) as exc:
        op.schatten_T(6, math.pi / 6, nmax_cap=3000)
    part = exc.value.partial
    assert part.lmax == 3000 and not part.certified and part.value > 0


def test_schatten_t_certified_for_large_p():
    res = op.schatten_T(12, math.pi / 6)
    assert res.certified and res.tail <= 1e-8 * res.value ** 12


def test_schatten_t_low_p_warns():
    with pytest.warns(RuntimeWarning):
        res = op.schatten_T(3, 0.6, nmax_cap=500)
    assert not res.certified and res.warning


def test_operator_norm_lower_bounds():
    for th in np.linspace(0.0, math.pi, 50):
        res = op.schatten_T(math.inf, th, nmax=200)
        assert res.value >= abs(math.cos(2 * th)) - 1e-8
    for t2 in np.linspace(-math.pi, math.pi, 50):
        res = op.schatten_S(math.inf, 0.4, t2, lmax=20)
        assert res.value >= abs(np.exp(0.4j) - np.exp(1j * t2)) / math.sqrt(2) - 1e-8


def test_schatten_s_examples():
    assert op.schatten_S(12, 0.7, 0.7).value == 0.0
    res = op.schatten_S(40, 0.0, math.pi / 2)
    assert res.certified
    assert res.tail <= 1e-6 * res.value ** 40


def test_schatten_s_q12_point_is_truncation_limited():
    # the envelope tail decays like l^{-1/2} at q = 12, so the cap is reached
    with pytest.raises(op.TruncationError) as exc:
        op.schatten_S(12, 0.0, math.pi / 2, lmax_cap=512)
    part = exc.value.partial
    assert part.value == pytest.approx(1.31, abs=0.01)
    assert not part.certified


def test_schatten_s_monotone_in_q():
    vals = [op.schatten_S(q, 0.1, 1.2, lmax=64).value for q in (11, 12, 16, 20, 40)]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_schatten_s_low_q_warns():
    with pytest.warns(RuntimeWarning):
        res = op.schatten_S(8, 0.0, 1.0, lmax=32)
    assert not res.certified


@given(t1=st.floats(-3, 3), t2=st.floats(-3, 3))
def test_schatten_s_truncation_monotone(t1, t2):
    a = op.schatten_S(16, t1, t2, lmax=16).value
    b = op.schatten_S(16, t1, t2, lmax=32).value
    assert b >= a - 1e-12


def test_holder_exponents():
    assert op.holder_exponent("S", 20) == pytest.approx(1 / 8)
    assert op.holder_exponent("T", 8) == pytest.approx(1 / 4)
    with pytest.raises(ValueError):
        op.holder_exponent("X", 8)


def test_holder_fit_s_small():
    grid = [(0.0, d) for d in np.geomspace(1e-3, math.pi / 2, 5)] + [(0.4, 0.4)]
    fit = op.holder_fit("S", 40, grid, lmax_cap=512)
    assert fit.exponent_expected == pytest.approx(0.25 - 2.5 / 40)
    assert len(fit.table) == 5 and any("zero separation" in n for n in fit.notes)
    assert math.isfinite(fit.max_ratio) and fit.max_ratio_upper >= fit.max_ratio


def test_holder_fit_t_restricts_grid():
    grid = [0.3, math.pi / 6, 0.7, math.pi / 3]
    fit = op.holder_fit("T", 8, grid, nmax_cap=4000)
    assert fit.exponent_expected == pytest.approx(0.25)
    assert len(fit.table) == 3
    assert any("outside" in n for n in fit.notes)


def test_holder_fit_thread_count_does_not_change_results():
    grid = list(np.linspace(math.pi / 6, math.pi / 3, 6))
    a = op.holder_fit("T", 8, grid, threads=1, nmax_cap=4000)
    b = op.holder_fit("T", 8, grid, threads=3, nmax_cap=4000)
    assert [p.value for p in a.table] == [p.value for p in b.table]


def test_holder_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        op.holder_fit("S", 9, [(0, 1)])
    with pytest.raises(ValueError):
        op.holder_fit("T", 8, [0.1])


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("SP2HARMONIC_THREADS", "3")
    assert op.default_threads() == 3
    monkeypatch.setenv("SP2HARMONIC_THREADS", "x")
    assert op.default_threads() == 1
