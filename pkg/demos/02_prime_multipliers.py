"""
Dyadic prime multipliers and their major-arc approximants
=========================================================

m_j(lam, beta) = sum_p log|p| psi_j(p) e((lam - beta) p) over signed primes,
evaluated on a DFT grid. Near a/q it looks like mu(q)/phi(q) psi_j-hat; the
approximant nu_j only switches on once j passes the cutoff j(s).
"""
import numpy as np

from carleson_primes import multiplier as mm
from carleson_primes.smooth import CutoffConstants

j, M = 12, 2**14
m = mm.m_j_grid(j, 0.0, M)
beta = m.grid.points
print(f"m_{j}: sup |m| = {np.max(np.abs(m.values)):.4f}, max |Re m| = {np.max(np.abs(m.values.real)):.1e}")

# peaks sit at fractions with small square-free denominators
top = np.argsort(-np.abs(m.values))[:8]
for k in sorted(top):
    print(f"  beta = {beta[k]:.5f}   |m| = {abs(m.values[k]):.3f}")

# with the default alpha the first qualifying j is far beyond reach
C = CutoffConstants()
print("j(s) for s = 0..4 at alpha = 20:", [mm.j_cutoff(s, C.alpha) for s in range(5)])

# a relaxed alpha makes nu_j visible at desk scale and shrinks the error
relaxed = CutoffConstants(alpha=1.0, strict=False)
print("shells used by nu_14 at alpha = 1:", list(mm.nu_s_range(14, relaxed.alpha)))
for consts, label in ((C, "alpha=20"), (relaxed, "alpha=1")):
    e = mm.error_sup_E_j(14, [0.0, 0.25], consts, 2**16)
    print(f"sup |m_14 - nu_14| ({label}) = {e:.4f}")

# the completion identity Psi_s + Psi^s = -pi i sgn
grid = mm.FreqGrid.interval(-0.5, 0.5, 201)
up, lo = mm.psi_upper_lower(1, C, grid)
err = np.abs(up.values + lo.values + np.pi * 1j * np.sign(grid.points))
print(f"completion identity error at s=1: {err[grid.points != 0].max():.1e}")
