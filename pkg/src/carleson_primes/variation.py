"""r-variation norms, t-jump numbers and the entropy-chaining tree.

All functionals act on a :class:`VectorPath`, a finite sequence of points
in l^2_K indexed by strictly increasing lambdas. Scalar sequences are paths
with K = 1; complex entries are allowed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "VectorPath",
    "ChainingTree",
    "variation_norm",
    "variation_norm_batch",
    "jump_count",
    "jump_count_greedy",
    "jump_breakpoints",
    "vinf_proxy",
    "minimal_center_cover",
    "greedy_center_cover",
    "chaining_cover",
    "sup_exponential_moment",
    "chaining_sup_bound",
]


@dataclass(frozen=True)
class VectorPath:
    lambdas: np.ndarray
    points: np.ndarray  # shape (n, K)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        pts = np.asarray(self.points)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] != lam.size:
            raise ValueError("points must have shape (len(lambdas), K)")
        if lam.size < 1:
            raise ValueError("a path needs at least one point")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("lambdas must be strictly increasing")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_sequence(cls, values, lambdas=None) -> "VectorPath":
        values = np.asarray(values)
        if lambdas is None:
            lambdas = np.arange(values.shape[0], dtype=float)
        return cls(lambdas, values)

    @property
    def K(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def distances(self) -> np.ndarray:
        """Pairwise l^2_K distances, shape (n, n)."""
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt(np.sum(np.abs(diff) ** 2, axis=-1))


def _pairwise(points):
    diff = points[..., :, None, :] - points[..., None, :, :]
    return np.sqrt(np.sum(np.abs(diff) ** 2, axis=-1))


def variation_norm_batch(points, r: float) -> np.ndarray:
    """V^r of many paths at once.

    ``points`` has shape ``(..., n, K)``; the leading axes index independent
    paths. Exact: best[j] = max(0, max_{i<j} best[i] + |x_j - x_i|^r).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    pts = np.asarray(points)
    n = pts.shape[-2]
    lead = pts.shape[:-2]
    best = np.zeros(lead + (n,))
    for j in range(1, n):
        d = np.sqrt(np.sum(np.abs(pts[..., :j, :] - pts[..., j : j + 1, :]) ** 2, axis=-1))
        best[..., j] = np.max(best[..., :j] + d**r, axis=-1)
    return np.max(best, axis=-1) ** (1.0 / r)


def variation_norm(path: VectorPath, r: float) -> float:
    """Exact r-variation over all increasing subsequences, O(n^2)."""
    return float(variation_norm_batch(path.points, r))


def vinf_proxy(path: VectorPath) -> float:
    """Largest distance between two points of the path."""
    return float(np.max(path.distances()))


def jump_count(path: VectorPath, t: float, strict: bool = True) -> int:
    """Largest N with lambda_0 < ... < lambda_N and consecutive gaps > t.

    Exact longest-chain dynamic programme, O(n^2). With ``strict=False`` gaps
    >= t are counted, giving the left limit in t.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    d = path.distances()
    ok = d > t if strict else d >= t
    n = len(path)
    chain = np.zeros(n, dtype=np.int64)
    for j in range(1, n):
        prev = ok[:j, j]
        if prev.any():
            chain[j] = int(np.max(chain[:j][prev])) + 1
    return int(chain.max())


def jump_count_greedy(path: VectorPath, t: float) -> int:
    """Left-to-right greedy jump count; a lower bound for :func:`jump_count`."""
    pts = path.points
    anchor, count = pts[0], 0
    for x in pts[1:]:
        if np.sqrt(np.sum(np.abs(x - anchor) ** 2)) > t:
            anchor, count = x, count + 1
    return count


def jump_breakpoints(path: VectorPath) -> np.ndarray:
    """Distinct positive pairwise distances: the only t where J_t can change."""
    d = path.distances()
    iu = np.triu_indices(len(path), k=1)
    vals = np.unique(d[iu])
    return vals[vals > 0]


# --- chaining ---------------------------------------------------------------


def _cover_masks(dist, radius):
    inside = dist <= radius
    n = dist.shape[0]
    return [sum(1 << int(k) for k in np.flatnonzero(inside[c])) for c in range(n)]


def minimal_center_cover(dist: np.ndarray, radius: float) -> list[int]:
    """Smallest set of centers (indices) whose closed balls cover every point.

    Exact branch and bound: branch on the centers that cover the first
    uncovered point. Exponential in the worst case.
    """
    n = dist.shape[0]
    masks = _cover_masks(dist, radius)
    full = (1 << n) - 1
    covering = [[c for c in range(n) if masks[c] >> i & 1] for i in range(n)]
    # larger balls first finds good incumbents early
    for lst in covering:
        lst.sort(key=lambda c: -bin(masks[c]).count("1"))
    best = greedy_center_cover(dist, radius)

    def search(covered, chosen):
        nonlocal best
        if covered == full:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + 1 >= len(best):
            return
        first = (~covered & full & -(~covered & full)).bit_length() - 1
        for c in covering[first]:
            chosen.append(c)
            search(covered | masks[c], chosen)
            chosen.pop()

    search(0, [])
    return sorted(best)


def greedy_center_cover(dist: np.ndarray, radius: float) -> list[int]:
    """Greedy set cover by closed balls centred at points; an upper bound."""
    n = dist.shape[0]
    inside = dist <= radius
    uncovered = np.ones(n, dtype=bool)
    chosen = []
    while uncovered.any():
        gain = (inside & uncovered[None, :]).sum(axis=1)
        c = int(np.argmax(gain))
        chosen.append(c)
        uncovered &= ~inside[c]
    return sorted(chosen)


@dataclass
class ChainingTree:
    """Multi-scale centers of a finite set A in l^2_K.

    ``centers[l]`` are indices into ``points`` forming a cover of A by balls
    of radius 2^l, ``parents[l][k]`` is the index (into ``centers[l+1]``) of
    the parent of ``centers[l][k]``, and ``increments[l]`` holds the vectors
    ``a^{l,k} - parent``. Level ``r`` holds the single root.
    """

    points: np.ndarray
    l0: int
    r: int
    root: int
    centers: dict[int, list[int]] = field(default_factory=dict)
    parents: dict[int, list[int]] = field(default_factory=dict)
    increments: dict[int, np.ndarray] = field(default_factory=dict)
    exact: bool = True

    def cover_number(self, level: int) -> int:
        return len(self.centers[level])

    def levels(self) -> range:
        return range(self.l0, self.r)

    def chain(self, index: int) -> list[np.ndarray]:
        """Increments telescoping from point ``index`` up to the root."""
        level = self.l0
        k = self.centers[level].index(index)
        out = []
        while level < self.r:
            out.append(self.increments[level][k])
            k = self.parents[level][k]
            level += 1
        return out

    def telescoping_error(self) -> float:
        root = self.points[self.root]
        errs = [
            np.max(np.abs(sum(self.chain(i), np.zeros_like(root)) + root - self.points[i]))
            for i in range(len(self.points))
        ]
        return float(max(errs))


EXACT_COVER_LIMIT = 20


def chaining_cover(points, exact: bool | None = None) -> ChainingTree:
    """Build the chaining tree of a finite set of points in l^2_K.

    Covers are exact (minimal) for at most 20 points unless ``exact`` says
    otherwise; larger sets fall back to greedy covers and the tree is
    flagged ``exact=False``.
    """
    pts = np.asarray(points)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n == 0:
        raise ValueError("A must be nonempty")
    if exact is None:
        exact = n <= EXACT_COVER_LIMIT
    if n == 1:
        return ChainingTree(pts, l0=0, r=0, root=0, centers={0: [0]}, exact=True)

    dist = _pairwise(pts)
    diam = float(dist.max())
    off = dist[~np.eye(n, dtype=bool)]
    min_gap = float(off.min())
    if min_gap == 0:
        raise ValueError("points of A must be distinct")
    r = math.floor(math.log2(diam)) + 1
    while 2.0 ** (r - 1) > diam:
        r -= 1
    while 2.0**r <= diam:
        r += 1
    l0 = math.floor(math.log2(min_gap / 2))
    while 2.0**l0 >= min_gap / 2:
        l0 -= 1
    l0 = min(l0, r - 1)

    root = 0
    tree = ChainingTree(pts, l0=l0, r=r, root=root, exact=exact)
    tree.centers[r] = [root]
    cover = minimal_center_cover if exact else greedy_center_cover
    for level in range(r - 1, l0 - 1, -1):
        if level == l0:
            tree.centers[level] = list(range(n))
        else:
            tree.centers[level] = cover(dist, 2.0**level)
    for level in range(l0, r):
        upper = tree.centers[level + 1]
        links = []
        for c in tree.centers[level]:
            # balls B(c, 2^l) and B(u, 2^(l+1)) meet iff |c - u| <= 3 * 2^l
            k = next(k for k, u in enumerate(upper) if dist[c, u] <= 3 * 2.0**level)
            links.append(k)
        tree.parents[level] = links
        tree.increments[level] = np.array(
            [pts[c] - pts[upper[k]] for c, k in zip(tree.centers[level], links)]
        )
    return tree


# --- exponential sums over A ------------------------------------------------


def sup_exponential_moment(A, freqs, x: float, T: float, nodes: int | None = None) -> float:
    """(int_0^T sup_{a in A} |sum_i a_i e(theta_i (x + u))|^2 du)^(1/2), midpoint rule."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    freqs = np.asarray(freqs, dtype=float)
    if A.shape[1] != freqs.size:
        raise ValueError("A must have one column per frequency")
    if nodes is None:
        spread = float(np.ptp(freqs)) if freqs.size > 1 else 0.0
        nodes = max(4096, int(math.ceil(64 * T * (spread + 1))))
    u = (np.arange(nodes) + 0.5) * (T / nodes)
    total = 0.0
    chunk = max(1, 2_000_000 // max(1, A.shape[0] * freqs.size))
    for k in range(0, nodes, chunk):
        # the common phase e(theta_min (x+u)) does not change the modulus
        ph = np.exp(2j * np.pi * np.outer(x + u[k : k + chunk], freqs - freqs.min()))
        vals = np.abs(ph @ A.T) ** 2
        total += float(np.sum(np.max(vals, axis=1)))
    return math.sqrt(total * T / nodes)


def chaining_sup_bound(A, freqs, s: int, constants, x: float = 0.0, exact: bool | None = None):
    """(lhs, rhs, tree) for the chained bound on sup_{a in A} of exponential sums.

    lhs is :func:`sup_exponential_moment` over [0, c N^s]; rhs is
    N^(s/2) (sum_{l0 <= l < r} 2^l min(K^(1/2), N*_A(2^l)^(1/2)) + |a^r|).
    """
    from . import arith

    if not arith.check_separation(freqs, s, torus=False):
        raise ValueError(f"frequencies are not {s}-separated")
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    Ns = float(constants.N) ** s
    lhs = sup_exponential_moment(A, freqs, x, constants.c * Ns)
    tree = chaining_cover(A, exact=exact)
    K = A.shape[1]
    chained = sum(2.0**l * min(math.sqrt(K), math.sqrt(tree.cover_number(l))) for l in tree.levels())
    rhs = math.sqrt(Ns) * (chained + float(np.linalg.norm(A[tree.root])))
    return lhs, rhs, tree
