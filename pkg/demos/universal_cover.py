"""The universal cover of Sp(2,R) and the quasi-morphism Phi.

Cover elements are pairs (g, t) with c(g) = e^{it}.  Phi is additive up to a
bounded defect, which we sample here.
"""
import math

import numpy as np

from sp2harmonic import quasimorphism as qm

rng = np.random.default_rng(7)
worst = 0.0
for _ in range(2000):
    x, y = qm.random_cover(rng), qm.random_cover(rng)
    worst = max(worst, abs(qm.phi(qm.cover_mul(x, y)) - qm.phi(x) - qm.phi(y)))
print(f"max defect over 2000 pairs: {worst:.4f} (bound pi/2 = {math.pi / 2:.4f})")

# Phi is a homomorphism on the central one-parameter subgroup v_t.
for t in (0.3, 2.0, 7.5):
    print(f"Phi(v_{t}) = {qm.phi(qm.cover_v(t)):.6f}")

# v_pi lies over -1 and v_{2 pi} over 1, yet neither is trivial upstairs.
for t in (math.pi, 2 * math.pi):
    x = qm.cover_v(t)
    print(f"v_{t:.4f}: base = {np.round(x.g[0, 0]):+.0f} * identity, t = {x.t:.4f}")
