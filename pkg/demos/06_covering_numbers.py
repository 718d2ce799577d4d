"""
Covering numbers and pseudo-lacunary sets
=========================================

N(delta) for finite modulation sets, the constants C_d = sup delta^d N(delta),
and the log-log fit of C_{1/j} against j.
"""
import numpy as np

from carleson_primes import lambdaset as ls

lam = ls.lacunary(2.0, 30)
for k in range(6):
    d = 0.75 * 2.0**-k
    print(f"delta = {d:.4f}: N = {ls.covering_number(lam, d)}  (k + 2 = {k + 2})")

prof = ls.covering_profile(lam)
print("C_1, C_1/2, C_1/8:", [round(prof.c_d(d), 4) for d in (1, 1 / 2, 1 / 8)])

for name, S in (("lacunary 2", ls.lacunary(2.0, 200)),
                ("lacunary 2 u 3", ls.union(ls.lacunary(2.0, 200), ls.lacunary(3.0, 120))),
                ("uniform 5", ls.uniform(5))):
    fit = ls.pseudo_lacunary_fit(S, 64)
    print(f"{name:15s} A = {fit.A:.3f}  M = {fit.M:.3f}")

# a delta-net gives the sup over Lambda up to delta times a Lipschitz bound
f = lambda x: np.sin(20 * x)
est, err, net = ls.net_sup_estimate(f, 20.0, lam, 0.05)
print(f"net of {net.size} points: {est:.4f} (+- {err}), exact {np.max(np.abs(f(lam.points))):.4f}")
