import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sp2harmonic import numerics, su2, wigner

HALVES = [k / 2 for k in range(0, 13)]


def test_irrep_trivial_and_defining(rng):
    g = su2.random_su2(rng)
    np.testing.assert_allclose(wigner.irrep(0, g).entries, [[1.0]])
    # basis (z1, z2): pi_{1/2}(g) is the matrix of g itself
    np.testing.assert_allclose(wigner.irrep(0.5, g).entries, g.matrix(), atol=1e-15)


@pytest.mark.parametrize("ell", [0.5, 1, 2.5, 7, 20])
def test_irrep_of_diagonal(ell):
    th = 0.41
    m = wigner.irrep(ell, su2.d(th)).entries
    p = np.arange(wigner.twice(ell) + 1) - ell
    np.testing.assert_allclose(m, np.diag(np.exp(-2j * p * th)), atol=1e-12)


@pytest.mark.parametrize("ell", [1, 3.5, 9, 15, 40])
def test_irrep_unitary_and_multiplicative(ell, rng):
    g, h = su2.random_su2(rng), su2.random_su2(rng)
    pg, ph = wigner.irrep(ell, g).entries, wigner.irrep(ell, h).entries
    n = pg.shape[0]
    np.testing.assert_allclose(pg.conj().T @ pg, np.eye(n), atol=1e-10)
    np.testing.assert_allclose(wigner.irrep(ell, g @ h).entries, pg @ ph, atol=1e-9)


@pytest.mark.parametrize("ell", [2, 7.5, 15])
def test_binomial_and_exp_routes_agree(ell, rng):
    g = su2.random_su2(rng, 3)
    a = wigner.irrep(ell, g, method="binomial").entries
    b = wigner.irrep(ell, g, method="exp").entries
    np.testing.assert_allclose(a, b, atol=1e-11)


def test_irrep_rejects_bad_ell():
    g = su2.identity()
    for bad in (-0.5, 0.3, 1.25):
        with pytest.raises(ValueError):
            wigner.irrep(bad, g)
    with pytest.raises(ValueError):
        wigner.irrep(1, g, method="nope")


@given(ell=st.sampled_from(HALVES), seed=st.integers(0, 2 ** 32 - 1))
def test_irrep_homomorphism_property(ell, seed):
    r = np.random.default_rng(seed)
    g, h = su2.random_su2(r), su2.random_su2(r)
    lhs = wigner.irrep(ell, g @ h).entries
    rhs = wigner.irrep(ell, g).entries @ wigner.irrep(ell, h).entries
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_wigner_coeff_examples():
    assert wigner.wigner_coeff(0, 0, 0, su2.random_su2(np.random.default_rng(0))) == pytest.approx(1)
    th = 0.3
    # basis vector p = 1/2 is z2; d_theta sends it to e^{-i theta} z2
    assert wigner.wigner_coeff(0.5, 0.5, 0.5, su2.d(th)) == pytest.approx(np.exp(-1j * th))
    with pytest.raises(ValueError):
        wigner.wigner_coeff(1, 0.5, 0, su2.identity())
    with pytest.raises(ValueError):
        wigner.wigner_coeff(1, 2, 0, su2.identity())


def test_wigner_coeff_scale():
    g = su2.u(0.2)
    two_l = 4
    nrm = wigner.basis_norms(two_l)
    m = wigner.irrep(2, g).entries
    assert wigner.wigner_coeff(2, -1, 1, g) == pytest.approx(m[1, 3] * nrm[1] * nrm[3])
    assert nrm[0] == 1.0 and nrm[2] == pytest.approx(math.sqrt(2 * 2 / 24))


def test_peter_weyl_orthogonality():
    ells = [0, 0.5, 1, 1.5, 2, 2.5, 3]

    def f(g):
        blocks = [wigner.irrep(l, g).entries.reshape(g.shape + (-1,)) for l in ells]
        return np.concatenate(blocks, -1)

    def gram(g):
        v = f(g)
        return v[:, :, None] * np.conj(v[:, None, :])

    # products of coefficients have degree up to 12, so 16 nodes are exact
    got = su2.haar_average(gram, resolution=16)
    dims = [wigner.twice(l) + 1 for l in ells]
    expected = np.diag(np.concatenate([np.full(d * d, 1.0 / d) for d in dims]))
    assert np.max(np.abs(got - expected)) < 1e-10


def test_cpl_integral_examples():
    assert wigner.cpl_integral(0, 0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert wigner.cpl_integral(0.5, 0.5, 1.0) == pytest.approx(2 ** -0.5, abs=1e-12)
    vals = [wigner.cpl_integral(5, 2, r) for r in (0.5, 1.0, 2.0)]
    assert max(vals) - min(vals) < 1e-10
    with pytest.raises(ValueError):
        wigner.cpl_integral(1, 0, 0.0)


def test_cpl_integral_r_independence_small_ell():
    for two_l in range(0, 19):
        for two_p in range(-two_l, two_l + 1, 2):
            vals = [wigner.cpl_integral(two_l / 2, two_p / 2, r) for r in (0.5, 1.0, 2.0)]
            ref = wigner.cpl_closed_form(two_l / 2, two_p / 2)
            assert max(abs(v - ref) for v in vals) < 1e-10


def test_cpl_integral_fixed_radius_at_large_ell():
    # at r = 1 the integrand reaches 2^l, so these take the extended-precision path
    for ell, p in [(25, 20), (30, -29), (27.5, 0.5)]:
        ref = wigner.cpl_closed_form(ell, p)
        for r in (0.5, 1.0, 2.0):
            assert abs(wigner.cpl_integral(ell, p, r) - ref) < 1e-12


def test_closed_form_small_values():
    assert wigner.cpl_closed_form(1, 0) == 0.0
    assert wigner.cpl_closed_form(2, 0) == -0.5
    assert wigner.cpl_closed_form(1, 1) == 0.5
    assert wigner.cpl_closed_form(1.5, 0.5) == pytest.approx(-2 ** -1.5)


def test_group_average_examples():
    assert wigner.cpl_group_average(0.5, 0.5) == pytest.approx(2 ** -0.5, abs=1e-12)
    assert wigner.cpl_group_average(4.5, 1.5) == pytest.approx(wigner.cpl_group_average(4.5, -1.5),
                                                               abs=1e-12)
    assert wigner.cpl_group_average(3, 0) == pytest.approx(wigner.cpl_integral(3, 0, 1.0), abs=1e-9)


def test_group_average_matches_haar_definition():
    # c_p^l e^{2ip theta} is the diagonal of the conjugation average of pi_l(u_theta)
    th = 0.3
    for ell in (1, 1.5):
        phis = 2 * np.pi * np.arange(12) / 12
        avg = np.mean([wigner.irrep(ell, su2.d(f) @ su2.u(th) @ su2.d(-f)).entries
                       for f in phis], axis=0)
        p = np.arange(wigner.twice(ell) + 1) - ell
        c = np.array([wigner.cpl_group_average(ell, q) for q in p])
        np.testing.assert_allclose(avg, np.diag(np.exp(-2j * p * th) * c), atol=1e-12)


def _jacobi_at_zero(ell, p):
    two_l, two_p = wigner.twice(ell), wigner.twice(p)
    return numerics.jacobi((two_l - two_p) // 2, 0.0, float(two_p), 0.0)


def test_jacobi_normalization_is_power_of_two_in_p():
    probes = [(1, 0), (1.5, 0.5), (2, 0), (2.5, 0.5), (3, 1)]
    # neither sign of the factor (+-2)^{l-p} reproduces the Jacobi values
    for sign in (2.0, -2.0):
        ok = all(abs(wigner.cpl_closed_form(l, p) * sign ** (l - p) - _jacobi_at_zero(l, p)) < 1e-9
                 for l, p in probes)
        assert not ok
    # c_p^l * 2^p matches for all l <= 50, p >= 0
    worst = 0.0
    for two_l in range(0, 101):
        for two_p in range(two_l % 2, two_l + 1, 2):
            l, p = two_l / 2, two_p / 2
            c = wigner.cpl_closed_form(l, p)
            worst = max(worst, abs(c * 2.0 ** p - _jacobi_at_zero(l, p)) / max(1.0, 2.0 ** p))
            assert wigner.cpl_jacobi(l, p) == pytest.approx(c, abs=1e-9)
    assert worst < 1e-9


def test_table_matches_exact_values():
    table = wigner.cpl_table(30)
    worst = 0.0
    for ell, p, c in table.rows():
        worst = max(worst, abs(c - wigner.cpl_closed_form(ell, p)))
    assert worst < 1e-12
    assert table(0.5, 0.5) == pytest.approx(2 ** -0.5)
    with pytest.raises(KeyError):
        table(31, 0)


def test_table_invariants_large():
    table = wigner.cpl_table(200)
    for two_l in range(0, 401, 7):
        row = table.row_values(two_l)
        assert np.max(np.abs(row - row[::-1])) < 1e-10
        assert np.max(np.abs(row)) <= 1.0 + 1e-12


def test_table_methods_agree():
    ref = wigner.cpl_table(6, "closed_form").values
    for method in ("recurrence", "integral", "group"):
        np.testing.assert_allclose(wigner.cpl_table(6, method).values, ref, atol=1e-12)
    with pytest.raises(ValueError):
        wigner.cpl_table(2, "magic")


def test_table_csv():
    buf = io.StringIO()
    wigner.cpl_table(1.5).to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "ell,p,c"
    assert "0.5,0.5,0.707106781186548" in lines
    assert "1.5,-0.5,-0.353553390593274" in lines
    assert len(lines) == 1 + 1 + 2 + 3 + 4


def test_invariant_vectors():
    np.testing.assert_allclose(wigner.so2_invariant_vector(0), [1.0])
    with pytest.raises(ValueError, match="no invariant vector"):
        wigner.so2_invariant_vector(0.5)
    for ell in (1, 4, 11):
        w = wigner.so2_invariant_vector(ell)
        assert np.linalg.norm(w) == pytest.approx(1.0)
        m = wigner.irrep(ell, su2.r(0.7)).entries
        np.testing.assert_allclose(m @ w, w, atol=1e-10)


def test_envelope_constant_and_stabilization():
    fitted = wigner.fit_cpl_envelope(100)
    assert fitted == pytest.approx(1.0, abs=1e-12)  # attained at l = 0
    ratios = wigner.cpl_envelope_ratios(wigner.cpl_table(200))
    assert ratios[201:].max() <= 1.05 * fitted
    assert np.all(np.isfinite(ratios))


def test_twice_accepts_fractions():
    assert wigner.twice(Fraction(3, 2)) == 3
    with pytest.raises(ValueError):
        wigner.twice(Fraction(1, 3))
