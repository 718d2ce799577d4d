"""Finite modulation sets in [0, 1], their covering numbers and C_d constants.

N(delta) counts closed intervals of length delta. It is a right-continuous,
nonincreasing step function of delta that can only change at pairwise
differences of points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "LambdaSet",
    "CoveringProfile",
    "PseudoLacunaryFit",
    "covering_number",
    "covering_net",
    "covering_profile",
    "c_d",
    "pseudo_lacunary_fit",
    "net_sup_estimate",
    "lacunary",
    "uniform",
    "union",
]


@dataclass(frozen=True)
class LambdaSet:
    points: np.ndarray

    def __post_init__(self):
        pts = np.unique(np.asarray(self.points, dtype=float).ravel())
        if pts.size == 0:
            raise ValueError("a modulation set needs at least one point")
        if not np.all(np.isfinite(pts)) or pts[0] < 0 or pts[-1] > 1:
            raise ValueError("points must lie in [0, 1]")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    @property
    def diameter(self) -> float:
        return float(self.points[-1] - self.points[0])

    @property
    def min_gap(self) -> float:
        return float(np.min(np.diff(self.points))) if self.points.size > 1 else np.inf


def lacunary(rho: float = 2.0, k_max: int = 30, include_limit: bool = True) -> LambdaSet:
    """{rho^-k : 0 <= k <= k_max}, with the limit point 0 unless told otherwise.

    The limit point makes the truncation cover exactly like the infinite
    sequence at every scale above rho^-k_max.
    """
    if rho <= 1:
        raise ValueError("rho must exceed 1")
    pts = float(rho) ** -np.arange(k_max + 1, dtype=float)
    if include_limit:
        pts = np.append(pts, 0.0)
    return LambdaSet(pts)


def uniform(m: int, start: float = 0.0, stop: float = 1.0) -> LambdaSet:
    return LambdaSet(np.linspace(start, stop, m))


def union(*sets) -> LambdaSet:
    return LambdaSet(np.concatenate([np.asarray(getattr(s, "points", s)) for s in sets]))


def _points(lam) -> np.ndarray:
    return lam.points if isinstance(lam, LambdaSet) else LambdaSet(lam).points


def _advance(pts: np.ndarray, idx: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """First index j with pts[j] - pts[idx] > delta.

    Compared as differences, so that the test agrees with the breakpoints
    (pairwise differences) and is immune to rounding in pts[idx] + delta.
    """
    start = pts[idx]
    nxt = np.searchsorted(pts, start + deltas, side="right")
    n = pts.size
    while True:
        over = (nxt - 1 > idx) & (pts[np.maximum(nxt - 1, 0)] - start > deltas)
        if not over.any():
            break
        nxt[over] -= 1
    while True:
        under = (nxt < n) & (pts[np.minimum(nxt, n - 1)] - start <= deltas)
        if not under.any():
            break
        nxt[under] += 1
    return nxt


def covering_net(lam, delta: float) -> np.ndarray:
    """Left endpoints of the greedy cover; every point is within delta of one."""
    pts = _points(lam)
    net, i = [], 0
    d = np.array([float(delta)])
    while i < pts.size:
        net.append(pts[i])
        i = int(_advance(pts, np.array([i]), d)[0])
    return np.array(net)


def covering_number(lam, delta: float) -> int:
    """Smallest number of closed length-delta intervals covering the set.

    Left-to-right greedy placement, optimal on the line.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    return len(covering_net(lam, delta))


def _greedy_counts(pts: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """covering_number at many deltas at once (the greedy run in lockstep)."""
    idx = np.zeros(deltas.size, dtype=np.int64)
    count = np.zeros(deltas.size, dtype=np.int64)
    live = np.ones(deltas.size, dtype=bool)
    while live.any():
        count[live] += 1
        idx[live] = _advance(pts, idx[live], deltas[live])
        live &= idx < pts.size
    return count


@dataclass(frozen=True)
class CoveringProfile:
    """N(delta) = size below breakpoints[0], counts[k] on [breakpoints[k], breakpoints[k+1])."""

    breakpoints: np.ndarray
    counts: np.ndarray
    size: int
    diameter: float
    c_d_cache: dict = field(default_factory=dict, compare=False)

    def __call__(self, delta):
        delta = np.asarray(delta, dtype=float)
        k = np.searchsorted(self.breakpoints, delta, side="right") - 1
        out = np.where(k < 0, self.size, self.counts[np.maximum(k, 0)])
        return out if out.ndim else int(out)

    def c_d(self, d: float) -> float:
        """sup over 0 < delta < 1 of delta^d N(delta), from the breakpoints."""
        if not 0 < d <= 1:
            raise ValueError("need 0 < d <= 1")
        if d not in self.c_d_cache:
            rights = np.append(self.breakpoints, 1.0)
            lefts = np.concatenate([[0.0], self.breakpoints])
            vals = np.concatenate([[self.size], self.counts])
            keep = lefts < 1.0
            # delta^d N is increasing on each step, so take right ends from the left
            self.c_d_cache[d] = float(np.max(vals[keep] * np.minimum(rights[keep], 1.0) ** d))
        return self.c_d_cache[d]


def covering_profile(lam) -> CoveringProfile:
    pts = _points(lam)
    if pts.size == 1:
        return CoveringProfile(np.zeros(0), np.zeros(0, dtype=np.int64), 1, 0.0)
    iu = np.triu_indices(pts.size, k=1)
    cand = np.unique(pts[iu[1]] - pts[iu[0]])
    cand = cand[cand > 0]
    counts = _greedy_counts(pts, cand)
    prev = np.concatenate([[pts.size], counts[:-1]])
    change = counts != prev
    return CoveringProfile(cand[change], counts[change], int(pts.size), float(pts[-1] - pts[0]))


def c_d(lam, d: float) -> float:
    return covering_profile(lam).c_d(d)


@dataclass
class PseudoLacunaryFit:
    A: float
    M: float
    j: np.ndarray
    C: np.ndarray
    residuals: np.ndarray
    degenerate: bool

    def __iter__(self):
        return iter((self.A, self.M, self.table()))

    def table(self) -> dict:
        return {"j": self.j, "C": self.C, "residual": self.residuals}


def pseudo_lacunary_fit(lam, j_max: int) -> PseudoLacunaryFit:
    """Least-squares fit log C_{1/j} = log A + M log j over 1 <= j <= j_max.

    ``degenerate`` is set when fewer than three distinct C values occur.
    """
    if j_max < 4:
        raise ValueError("j_max must be >= 4")
    prof = covering_profile(lam)
    j = np.arange(1, j_max + 1)
    C = np.array([prof.c_d(1.0 / k) for k in j])
    X = np.column_stack([np.ones(j.size), np.log(j)])
    coef, *_ = np.linalg.lstsq(X, np.log(C), rcond=None)
    resid = np.log(C) - X @ coef
    degenerate = np.unique(np.round(C, 12)).size < 3
    return PseudoLacunaryFit(float(np.exp(coef[0])), float(coef[1]), j, C, resid, bool(degenerate))


def net_sup_estimate(evaluator: Callable, A: float, lam, delta: float):
    """sup of |evaluator(lambda)| over a delta-net of the set, with additive error delta * A.

    The net has exactly N(delta) points. ``A`` is a Lipschitz bound for
    lambda -> evaluator(lambda), taken on trust. Returns
    ``(estimate, error_bound, net)``; ``estimate`` is pointwise when the
    evaluator returns arrays.
    """
    net = covering_net(lam, delta)
    est = None
    for x in net:
        v = np.abs(np.asarray(evaluator(float(x))))
        est = v if est is None else np.maximum(est, v)
    return est, float(delta * A), net
