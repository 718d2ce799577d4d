"""
The lifting factorization
=========================

For s-separated frequencies theta_k and small lam, a sum of truncated bumps
with coefficients splits into a coefficient-free part times a diagonal
multiplier built from the wider bumps chi~_s.
"""
import numpy as np

from carleson_primes import multiplier as mm
from carleson_primes.smooth import CutoffConstants

C = CutoffConstants()
rng = np.random.default_rng(0)
s = 1
theta = np.array([0.05, 0.3, 0.55, 0.8])
coef = rng.normal(size=4) + 1j * rng.normal(size=4)
lam = 0.5 * float(C.chi_s_radius(s))

grid = mm.FreqGrid.torus(2**16)
left, diag = mm.lifting_factorize(coef, theta, s, C, grid, lam)
direct = mm.lifted_direct(coef, theta, s, C, grid, lam)
print("max |left * diag - direct| =", np.max(np.abs(left.values * diag.values - direct.values)))
print("sup |direct| =", np.max(np.abs(direct.values)))

try:
    mm.lifting_factorize(coef, [0.1, 0.11], s, C, grid)
except mm.SeparationError as exc:
    print("unseparated frequencies rejected:", exc)
