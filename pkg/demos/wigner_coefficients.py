"""The diagonal coefficients c_p^l of the SU(2) irreps.

c_p^l is the coefficient of the SO(2)-invariant vector on the p-th weight
vector.  We compute it three ways (contour integral, Haar average, Jacobi
value at 0), then look at how the envelope (1+l)^{-1/4} controls it.
"""
import numpy as np

from sp2harmonic import wigner

print("l    p     integral            group average       Jacobi")
for ell, p in [(0.5, 0.5), (1, 0), (2, 0), (1.5, 0.5), (3, 1), (4.5, 2.5)]:
    a = wigner.cpl_integral(ell, p)
    b = wigner.cpl_group_average(ell, p)
    c = wigner.cpl_jacobi(ell, p)
    print(f"{ell:<4} {p:<5} {a: .15f} {b: .15f} {c: .15f}")

# The envelope ratio stays bounded and its sup is attained at l = 0.
table = wigner.cpl_table(200)
ratios = wigner.cpl_envelope_ratios(table)
print("\nsup of |c| / envelope over l <= 100:", ratios[:201].max())
print("sup of |c| / envelope over 100 < l <= 200:", ratios[201:].max())

# Largest coefficients sit near |p| = l / sqrt(2).
two_l = 200
col = np.abs([wigner.cpl_jacobi(two_l / 2, tp / 2) for tp in range(0, two_l + 1, 2)])
p_star = 2 * np.argmax(col) / 2
print(f"\nl=100: largest |c_p| at p={p_star}, l/sqrt(2)={100 / np.sqrt(2):.2f}")
