"""
Truncated partial sums, the multi-frequency maximal operator and C^s
====================================================================

Everything on a periodic grid on the line. Norms are estimated from random
structured inputs, so each estimate is a lower bound for the operator norm.
"""
import numpy as np

from carleson_primes import maximal as mx
from carleson_primes.config import RunConfig
from carleson_primes.experiments import norm_growth_setup, shell_grid
from carleson_primes.lambdaset import lacunary
from carleson_primes.smooth import CutoffConstants

C = CutoffConstants()
rng = np.random.default_rng(3)

# domination by the variational Carleson operator over all grid cuts
n, h = 512, 0.5
f = mx.SignalR(h, -n * h / 2, rng.normal(size=n) + 1j * rng.normal(size=n))
lams = np.arange(-60, 61, 5) / (n * h)
res = mx.domination_check(f, 0, C, lams)
print("sup side ratio", np.max(res["sup_lhs"] / res["sup_rhs"]).round(3),
      " V^3 side ratio", np.max(res["var_lhs"] / res["var_rhs"]).round(3))

# multi-frequency maximal operator: L2 estimates as K grows
cfg = RunConfig(grid_size=2**13, trials=10)
for K in (2, 4, 8):
    tpl, th, lam_grid, active = norm_growth_setup(cfg, K)
    op = mx.multifreq_operator(th, 0, C, lam_grid, tpl)
    print(f"K = {K}: L2 estimate {mx.estimate_opnorm(op, tpl, 2.0, cfg.trials, 0, active).value:.4f}")

# the reduced operator C^s at a coarser N, where every shell fits the grid
small = CutoffConstants(c=1 / 128, a=1 / 4, N=2)
lam = lacunary(2, 15, include_limit=False)
tpl = shell_grid(small, 2, lam.points, 1024)
for s in range(3):
    op, br = mx.cs_precomputed(tpl, s, lam, small)
    est = mx.estimate_opnorm(op, tpl, 2.0, 10, 0, mx.cs_active(s, small, lam))
    print(f"s = {s}: L2 estimate {est.value:.4f}, Plancherel bracket {br.max():.3f}")
