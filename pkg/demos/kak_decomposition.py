"""KAK decomposition of Sp(2,R) and the two structural products."""
import numpy as np

from sp2harmonic import symplectic as sp

rng = np.random.default_rng(3)
g = sp.random_symplectic(rng, 2.0)
res = sp.kak(g)
print("beta, gamma =", res.beta, res.gamma)
print("reconstruction error:", np.linalg.norm(res.reconstruct() - g))

# D(a,0) rot D(a,0) has closed-form Cartan parameters.
alpha, theta = 0.7, 0.9
pred = sp.structural_so2_predict(alpha, theta)
got = sp.kak(sp.structural_so2_product(alpha, theta))
print("\nSO(2) product: predicted", (pred.beta, pred.gamma), "computed", (got.beta, got.gamma))
print("sinh beta vs sinh(2a) cos(theta):", np.sinh(pred.beta), np.sinh(2 * alpha) * np.cos(theta))

pred = sp.structural_u1_predict(alpha, theta)
got = sp.kak(sp.structural_u1_product(alpha, theta))
print("U(1) product: predicted", (pred.beta, pred.gamma), "computed", (got.beta, got.gamma))
