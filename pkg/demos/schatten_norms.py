"""Schatten norms of differences of the averaging operators T and S.

Each value is a truncated spectral sum with a certified bound on the tail.
When the tolerance cannot be reached under the truncation cap a
TruncationError carries the partial result.
"""
import math
import warnings

import numpy as np

from sp2harmonic import operators as op

# The T eigenvalues decay like n^{-1/2}, so for p = 6 the tail only falls
# like N^{-2} and the relative target is out of reach at the cap.
try:
    res = op.schatten_T(6, math.pi / 6)
except op.TruncationError as err:
    res = err.partial
    print("p=6:", err)
print("||T_{pi/6} - T_{pi/4}||_6 ~", res.value, "tail", res.tail, "interval", res.certified_value_interval)

print("\nexponent 1/2 - 2/p fit on [pi/6, pi/3]:")
fit = op.holder_fit("T", 6, list(np.linspace(math.pi / 6, math.pi / 3, 8)))
for pt in fit.table:
    print(f"  theta={pt.theta1:.4f}  value {pt.value:.6f}  ratio {pt.ratio:.4f}  certified {pt.certified}")

# S needs large q before its tail can be certified at a modest cutoff.
res = op.schatten_S(40, 0.0, math.pi / 2)
print("\n||S_0 - S_{pi/2}||_40 =", res.value, "lmax", res.lmax, "tail", res.tail)

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    try:
        op.schatten_S(12, 0.0, math.pi / 2)
    except op.TruncationError as err:
        print("q=12:", err, "| partial value", err.partial.value)

# Operator norms dominate the eigenvalue lower bounds.
print("\n||T_0.4||_op =", op.schatten_T(math.inf, 0.4).value, ">= |cos 0.8| =", abs(math.cos(0.8)))
