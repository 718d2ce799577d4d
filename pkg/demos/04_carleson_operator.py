"""
The discrete Carleson operator along the primes
===============================================

sup over lam in Lambda of |sum_p f(n - p) log|p| e(lam p) / p|, once by direct
convolution and once through the multipliers m(lam, .) on a DFT grid.
"""
import numpy as np

from carleson_primes import maximal as mx
from carleson_primes.lambdaset import lacunary

# on a point mass the modulation drops out
out = mx.carleson_direct(mx.SignalZ.delta(), lacunary(2, 5), p_max=30)
for n, v in zip(out.sites, out.samples):
    if n > 0 and v:
        print(f"n = {n:2d}: {v:.5f}   log(n)/n = {np.log(n) / n:.5f}")

rng = np.random.default_rng(1)
f = mx.SignalZ(0, rng.normal(size=48))
lam = lacunary(2, 7, include_limit=False)
j_max = 12
d = mx.carleson_direct(f, lam, None, j_max=j_max)
m = mx.carleson_multiplier(f, lam, j_max)
print("direct vs multiplier, max relative difference:", np.max(np.abs(d.samples - m.samples)) / d.samples.max())
print("l2 norms: f", round(f.norm(2), 3), " C f", round(d.norm(2), 3))
