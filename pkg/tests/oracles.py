"""Independent slow reference implementations used as test oracles."""
import itertools
import math
from fractions import Fraction

import numpy as np


def is_prime_td(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def factorize(n):
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius_naive(n):
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def totient_naive(n):
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def shell_naive(s):
    if s == 0:
        return [Fraction(0)]
    return sorted({Fraction(a, q) for q in range(2**s, 2 ** (s + 1)) for a in range(1, q) if math.gcd(a, q) == 1})


def variation_exhaustive(points, r):
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    best = 0.0
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        tot = sum(np.linalg.norm(pts[b] - pts[a]) ** r for a, b in zip(idx, idx[1:]))
        best = max(best, tot)
    return best ** (1 / r)


def jumps_exhaustive(points, t):
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    best = 0
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if all(np.linalg.norm(pts[b] - pts[a]) > t for a, b in zip(idx, idx[1:])):
            best = max(best, len(idx) - 1)
    return best


def min_cover_exhaustive(dist, radius):
    n = dist.shape[0]
    for k in range(1, n + 1):
        for centers in itertools.combinations(range(n), k):
            if np.all(np.any(dist[list(centers)] <= radius, axis=0)):
                return k
    return n


def interval_cover_exhaustive(points, delta):
    """Minimal number of closed length-delta intervals; left ends may be taken at points."""
    pts = sorted(points)
    n = len(pts)
    for k in range(1, n + 1):
        for lefts in itertools.combinations(pts, k):
            if all(any(0 <= p - l <= delta for l in lefts) for p in pts):
                return k
    return n


def _subset_chains(points):
    """For every subset mask: the consecutive (i, next) pairs, vectorized over masks.

    Yields (bit_i, has_next, i, nxt) per position i, scanning right to left.
    """
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    masks = np.arange(1, 1 << n)
    D = np.sqrt(np.sum(np.abs(pts[:, None] - pts[None]) ** 2, axis=-1))
    after = np.full(masks.size, -1)
    steps = []
    for i in range(n - 1, -1, -1):
        bit = (masks >> i & 1).astype(bool)
        has = bit & (after >= 0)
        steps.append((has, D[i, np.maximum(after, 0)]))
        after = np.where(bit, i, after)
    return masks, steps


def variation_exhaustive_fast(points, r):
    """Same enumeration as variation_exhaustive, all 2^n - 1 subsets at once."""
    masks, steps = _subset_chains(points)
    tot = np.zeros(masks.size)
    for has, d in steps:
        tot += np.where(has, d**r, 0.0)
    return float(tot.max()) ** (1 / r)


def jumps_exhaustive_fast(points, t):
    masks, steps = _subset_chains(points)
    ok = np.ones(masks.size, dtype=bool)
    count = np.zeros(masks.size, dtype=np.int64)
    for has, d in steps:
        ok &= ~has | (d > t)
        count += has
    return int(count[ok].max())
