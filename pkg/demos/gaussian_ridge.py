"""Sup of the weighted Gaussian ridge integral over growing boxes."""
import time

from sp2harmonic import numerics

for extent in (10.0, 25.0, 50.0):
    t0 = time.perf_counter()
    sup, u, v = numerics.gaussian_ridge_sup(extent, 0.5)
    print(f"[0,{extent:g}]^2: sup {sup:.6f} at ({u}, {v})  [{time.perf_counter() - t0:.1f}s]")
