"""Decay envelope of matrix coefficients built from the Hoelder exponents."""
import numpy as np

from sp2harmonic import envelope as env

s1, s2 = env.holder_exponents(8, 40)
params = env.EnvelopeParams(s1, s2, s=0.5 * env.s_minus(s1, s2))
print(f"s1={s1}, s2={s2}, s_minus={params.s_minus:.6f}, P(s)={env.p_poly(params):.6f}")
print("uniform rate:", env.decay_rate(params), "crossover beta/gamma:", env.crossover_ratio(params))

beta = np.linspace(0, 10, 6)
for frac in (0.0, 0.5, 1.0):
    print(f"gamma = {frac} beta:", np.round(env.epsilon_grid(params, beta, frac * beta), 6))
