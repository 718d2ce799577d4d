"""
r-variation, jump counts and chaining
=====================================

Exact V^r and J_t by dynamic programming, the jump inequality
t J_t^(1/r) <= V^r, and the chaining tree used to bound sups of exponential
sums over a finite set of coefficient vectors.
"""
import numpy as np

from carleson_primes import variation as vv
from carleson_primes.smooth import CutoffConstants

rng = np.random.default_rng(2)
path = vv.VectorPath.from_sequence(np.cumsum(rng.normal(size=(40, 2)), axis=0))
for r in (1, 2, 2.5, 4):
    print(f"V^{r} = {vv.variation_norm(path, r):.3f}")
print("V^inf proxy =", round(vv.vinf_proxy(path), 3))

V3 = vv.variation_norm(path, 3)
for t in (0.5, 1.0, 2.0, 4.0):
    J = vv.jump_count(path, t)
    print(f"t = {t}: J_t = {J:3d}, t J_t^(1/3) = {t * J ** (1 / 3):.3f} <= V^3 = {V3:.3f}")

# the greedy scan is only a lower bound for J_t
p = vv.VectorPath.from_sequence([0.0, 10.0, 5.5, 11.0])
print("greedy vs exact jump count at t = 5:", vv.jump_count_greedy(p, 5.0), vv.jump_count(p, 5.0))

A = rng.normal(size=(12, 3)) + 1j * rng.normal(size=(12, 3))
tree = vv.chaining_cover(A)
print("levels", list(tree.levels()), "cover sizes", [tree.cover_number(l) for l in tree.levels()])
print("telescoping error", tree.telescoping_error())
lhs, rhs, _ = vv.chaining_sup_bound(A, [0.0, 0.3, 0.6], 0, CutoffConstants())
print(f"sup moment {lhs:.3f} vs chained bound {rhs:.3f}")
