"""Frequency-side objects on sampled grids.

The multiplier of the prime Carleson operator is

    m(lambda, beta) = sum_{p in +-P} e(lambda p - beta p) log|p| / p
                    = sum_{j >= 2} m_j(lambda, beta),

with m_j carrying the dyadic piece psi_j(p) of 1/p. Its major-arc
approximants nu_j are built from Farey shells weighted by mu(q)/phi(q).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .smooth import (
    CutoffConstants,
    eval_bump,
    eval_psi_j,
    psi_hat,
    sign_smoothing,
)
from .variation import variation_norm_batch

__all__ = [
    "FreqGrid",
    "SampledMultiplier",
    "PrimeKernel",
    "BumpOverlapError",
    "SeparationError",
    "SupportError",
    "SieveLimitError",
    "m_j_grid",
    "m_j_direct",
    "m_truncated_grid",
    "nu_s_range",
    "nu_j_eval",
    "nu_j_grid",
    "nu_j_single",
    "check_bump_disjointness",
    "error_sup_E_j",
    "j_cutoff",
    "psi_lower",
    "psi_upper",
    "psi_upper_lower",
    "shell_bump_sum",
    "completion_errors",
    "lifting_factorize",
    "lifted_direct",
    "lifting_pointwise",
    "lifted_direct_pointwise",
    "periodize",
    "tv_norm",
    "v2_norm",
    "sup_norm",
]

J_MAX = 20


class BumpOverlapError(ValueError):
    """Two chi_s bumps of the approximant overlap; c/N is too large."""


class SeparationError(ValueError):
    """Frequencies are not s-separated."""


class SupportError(ValueError):
    """A multiplier's support does not fit in one period."""


class SieveLimitError(ValueError):
    """The dyadic index exceeds the configured prime-sieve reach."""


@dataclass(frozen=True)
class FreqGrid:
    """Uniform half-open grid ``start + (stop - start) * k / size``."""

    domain: str
    start: float
    stop: float
    size: int

    def __post_init__(self):
        if self.domain not in ("torus", "interval"):
            raise ValueError("domain must be 'torus' or 'interval'")
        if self.size < 1 or not self.stop > self.start:
            raise ValueError("empty grid")

    @classmethod
    def torus(cls, size: int) -> "FreqGrid":
        return cls("torus", 0.0, 1.0, size)

    @classmethod
    def interval(cls, start: float, stop: float, size: int) -> "FreqGrid":
        return cls("interval", start, stop, size)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / self.size

    @functools.cached_property
    def points(self) -> np.ndarray:
        return self.start + (self.stop - self.start) * np.arange(self.size) / self.size

    @property
    def is_torus(self) -> bool:
        return self.domain == "torus"


@dataclass(frozen=True)
class SampledMultiplier:
    grid: FreqGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size,):
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("multiplier values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def domain(self) -> str:
        return self.grid.domain

    @property
    def grid_size(self) -> int:
        return self.grid.size

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def __mul__(self, other: "SampledMultiplier") -> "SampledMultiplier":
        if other.grid != self.grid:
            raise ValueError("grids differ")
        return SampledMultiplier(self.grid, self.values * other.values)

    def __add__(self, other: "SampledMultiplier") -> "SampledMultiplier":
        if other.grid != self.grid:
            raise ValueError("grids differ")
        return SampledMultiplier(self.grid, self.values + other.values)


def _wrap(t):
    """Representative of t mod 1 in [-1/2, 1/2).

    Subtracting the nearest integer is exact for small results, unlike
    (t + 1/2) % 1 - 1/2 which rounds t to the grid of 1/2.
    """
    t = np.asarray(t, dtype=float)
    return t - np.floor(t + 0.5)


# --- prime kernels and m_j --------------------------------------------------


@functools.lru_cache(maxsize=4)
def _primes_upto(limit: int) -> np.ndarray:
    return arith.sieve_primes(limit)


@dataclass(frozen=True)
class PrimeKernel:
    """Signed primes 2^(j-2) <= |p| <= 2^j with weights log|p| psi_j(p)."""

    j: int
    sites: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, j: int, j_max: int = J_MAX) -> "PrimeKernel":
        if not 2 <= j <= j_max:
            raise SieveLimitError(f"j={j} outside 2..{j_max}")
        p = _primes_upto(2**j_max)
        p = p[(p >= 2 ** (j - 2)) & (p <= 2**j)]
        w = np.log(p) * eval_psi_j(j, p)
        keep = w != 0
        p, w = p[keep], w[keep]
        sites = np.concatenate([-p[::-1], p])
        weights = np.concatenate([-w[::-1], w])
        return cls(j, sites, weights)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.sites.tolist(), self.weights.tolist()))


@functools.lru_cache(maxsize=64)
def _kernel(j: int, j_max: int) -> PrimeKernel:
    return PrimeKernel.build(j, j_max)


def m_j_grid(j: int, lam: float, M: int, j_max: int = J_MAX) -> SampledMultiplier:
    """m_j(lam, beta) at beta = k/M, by one FFT of the modulated prime kernel."""
    if M < 2 ** (j + 1):
        raise ValueError(f"grid size {M} below 2^(j+1) = {2 ** (j + 1)}")
    ker = _kernel(j, j_max)
    a = np.zeros(M, dtype=complex)
    np.add.at(a, ker.sites % M, ker.weights * np.exp(2j * np.pi * lam * ker.sites))
    return SampledMultiplier(FreqGrid.torus(M), np.fft.fft(a))


def m_j_direct(j: int, lam, beta, j_max: int = J_MAX) -> np.ndarray:
    """Direct summation of m_j over the signed primes (oracle path)."""
    ker = _kernel(j, j_max)
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    lam, beta = np.broadcast_arrays(lam, beta)
    phase = np.outer(lam.ravel() - beta.ravel(), ker.sites.astype(float))
    return (np.exp(2j * np.pi * phase) @ ker.weights).reshape(lam.shape)


def m_truncated_grid(lam: float, M: int, j_max: int) -> SampledMultiplier:
    """Sum of m_j(lam, .) over 2 <= j <= j_max."""
    total = np.zeros(M, dtype=complex)
    for j in range(2, j_max + 1):
        total += m_j_grid(j, lam, M, j_max).values
    return SampledMultiplier(FreqGrid.torus(M), total)


# --- cutoffs in j and s -----------------------------------------------------


def _two_alpha(alpha: float):
    ta = 2 * alpha
    return int(ta) if float(ta).is_integer() else None


def _dyadic_le(j: int, s: int, alpha: float, strict: bool) -> bool:
    """2^j (<= or <) 2^(s+1) j^(2 alpha), exactly when 2 alpha is an integer."""
    ta = _two_alpha(alpha)
    if ta is not None:
        lhs, rhs = 2**j, 2 ** (s + 1) * j**ta
    else:
        lhs, rhs = j, s + 1 + 2 * alpha * math.log2(j)
    return lhs < rhs if strict else lhs <= rhs


def nu_s_range(j: int, alpha: float) -> range:
    """Shells s >= 0 with 2^s < 2^(j-1) / j^(2 alpha)."""
    if j < 1:
        return range(0)
    s = 0
    while not _dyadic_le(j, s, alpha, strict=False):
        s += 1
    return range(0, s)


def j_cutoff(s: int, alpha: float) -> int:
    """j(s) = max{ j >= 1 : 2^j / j^(2 alpha) <= 2^(s+1) } by direct scan."""
    j = max(1, math.floor(2 * alpha / math.log(2)))
    while _dyadic_le(j + 1, s, alpha, strict=False):
        j += 1
    return j


# --- approximants -----------------------------------------------------------


def shell_bump_sum(s, constants: CutoffConstants, xi, profile, shift=0.0, torus=False, coef="mobius"):
    """Sum over a/q in shell s of coef(q) * profile(t) * chi_s(t), t = xi - shift - a/q.

    Only points strictly inside a bump support are touched. ``coef`` is
    ``"mobius"`` for mu(q)/phi(q) or ``"one"``. On the torus ``t`` is taken
    modulo 1.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape, dtype=complex)
    shell = arith.farey_shell(s)
    q = shell.denominators
    if coef == "mobius":
        mu, phi = arith.arith_tables(int(q.max()))
        weights = mu[q] / phi[q]
    else:
        weights = np.ones(q.size)
    keep = weights != 0
    centers = shell.values[keep] + shift
    weights = weights[keep]
    if centers.size == 0:
        return out
    radius = float(constants.chi_s_radius(s))
    chi = constants.chi_s(s)
    flat = xi.ravel()
    order = np.argsort(flat, kind="stable")
    xs = flat[order]
    base = centers
    if torus:
        centers = centers % 1.0
        base = np.tile(centers, 3)
        centers = np.concatenate([centers - 1.0, centers, centers + 1.0])
        weights = np.tile(weights, 3)
    lo = np.searchsorted(xs, centers - radius, side="right")
    hi = np.searchsorted(xs, centers + radius, side="left")
    counts = np.maximum(hi - lo, 0)
    total = int(counts.sum())
    if total == 0:
        return out
    owner = np.repeat(np.arange(centers.size), counts)
    start = np.repeat(np.cumsum(counts) - counts, counts)
    idx = np.repeat(lo, counts) + np.arange(total) - start
    t = xs[idx] - centers[owner]
    if torus:
        t = _wrap(xs[idx] - base[owner])
    vals = weights[owner] * profile(t) * eval_bump(chi, t)
    acc = np.zeros(xs.size, dtype=complex)
    np.add.at(acc, idx, vals)
    out_flat = out.ravel()
    out_flat[order] = acc
    return out_flat.reshape(xi.shape)


def check_bump_disjointness(s_values, constants: CutoffConstants, torus=True) -> None:
    """Raise :class:`BumpOverlapError` unless all chi_s(. - a/q) supports are disjoint.

    Exact rational interval arithmetic over every fraction of every listed shell.
    """
    intervals = []
    for s in s_values:
        w = constants.chi_s_radius(s)
        for f in arith.farey_shell(s):
            c = f.as_fraction()
            intervals.append((c - w, c + w, s, f))
    if len(intervals) < 2:
        if intervals and torus and intervals[0][1] - intervals[0][0] > 1:
            raise BumpOverlapError("single bump wider than the torus")
        return
    intervals.sort(key=lambda iv: iv[0])
    for (l1, r1, s1, f1), (l2, r2, s2, f2) in zip(intervals, intervals[1:]):
        if l2 < r1:
            raise BumpOverlapError(f"bumps at {f1} (s={s1}) and {f2} (s={s2}) overlap")
    if torus:
        first, last = intervals[0], intervals[-1]
        if first[0] + 1 < last[1]:
            raise BumpOverlapError(f"bumps at {last[3]} and {first[3]} overlap across 0")


def _nu_profile(j):
    scale = math.ldexp(1.0, j)
    return lambda t: psi_hat(t * scale)


def nu_j_eval(j: int, constants: CutoffConstants, beta, check=True) -> np.ndarray:
    """nu_j at arbitrary torus points ``beta``."""
    beta = np.asarray(beta, dtype=float)
    srange = nu_s_range(j, constants.alpha)
    if check:
        check_bump_disjointness(srange, constants)
    out = np.zeros(beta.shape, dtype=complex)
    for s in srange:
        out += shell_bump_sum(s, constants, beta, _nu_profile(j), torus=True)
    return out


def nu_j_grid(j: int, constants: CutoffConstants, M: int) -> SampledMultiplier:
    """nu_j on the torus grid k/M; empty shell range gives the zero multiplier."""
    grid = FreqGrid.torus(M)
    return SampledMultiplier(grid, nu_j_eval(j, constants, grid.points))


def nu_j_single(j: int, s: int, fraction, constants: CutoffConstants, beta) -> np.ndarray:
    """mu(q)/phi(q) psi_j-hat(beta - a/q) chi_s(beta - a/q) for one fraction (oracle)."""
    a, q = fraction.numerator, fraction.denominator
    mu, phi = arith.mobius_sieve(q), arith.totient_sieve(q)
    t = _wrap(np.asarray(beta, dtype=float) - a / q)
    return mu[q] / phi[q] * psi_hat(t * math.ldexp(1.0, j)) * eval_bump(constants.chi_s(s), t)


def error_sup_E_j(j: int, lam_grid, constants: CutoffConstants, M: int | None = None,
                  j_max: int = J_MAX) -> float:
    """sup over lam in ``lam_grid`` and beta = k/M of |m_j(lam, beta) - nu_j(beta - lam)|.

    A grid supremum, hence a lower bound for the true supremum.
    """
    if M is None:
        M = 2 ** (j + 2)
    srange = nu_s_range(j, constants.alpha)
    if len(srange):
        check_bump_disjointness(srange, constants)
    beta = FreqGrid.torus(M).points
    best = 0.0
    for lam in np.asarray(lam_grid, dtype=float):
        vals = m_j_grid(j, float(lam), M, j_max).values
        if len(srange):
            vals = vals - nu_j_eval(j, constants, beta - lam, check=False)
        best = max(best, float(np.max(np.abs(vals))))
    return best


# --- completion of Psi^s to -pi i sgn --------------------------------------

_TINY = 1e-17


def psi_lower(J: int, xi) -> np.ndarray:
    """Psi_s = sum_{j <= J} psi_j-hat, summed term by term.

    Terms with 2^j |xi| below 1e-17 (where |psi-hat(y)| <= 5|y|) and above
    the psi-hat cutoff are dropped.
    """
    from .smooth import PSI_HAT_CUTOFF

    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape, dtype=complex)
    ax = np.abs(xi[xi != 0])
    if ax.size == 0:
        return out
    j_lo = math.floor(math.log2(_TINY / ax.max()))
    j_hi = min(J, math.ceil(math.log2(PSI_HAT_CUTOFF / ax.min())))
    flat = xi.ravel()
    acc = np.zeros(flat.size, dtype=complex)
    js = np.arange(j_lo, j_hi + 1)
    y = np.ldexp(flat[None, :], js[:, None])
    live = (np.abs(y) > _TINY) & (np.abs(y) < PSI_HAT_CUTOFF)
    vals = np.zeros(y.shape, dtype=complex)
    vals[live] = psi_hat(y[live])
    acc += vals.sum(axis=0)
    return acc.reshape(xi.shape)


def psi_upper(J: int, xi) -> np.ndarray:
    """Psi^s = -pi i (sgn(xi) - G(2^J xi)) from the closed form of the tail sum."""
    xi = np.asarray(xi, dtype=float)
    with np.errstate(over="ignore"):
        y = np.ldexp(xi, J)
    return -np.pi * 1j * (np.sign(xi) - sign_smoothing(y))


def psi_upper_lower(s: int, constants: CutoffConstants, grid: FreqGrid, J: int | None = None):
    """(Psi^s, Psi_s) sampled on ``grid``; J defaults to j(s)."""
    if J is None:
        J = j_cutoff(s, constants.alpha)
    xi = grid.points
    return (
        SampledMultiplier(grid, psi_upper(J, xi)),
        SampledMultiplier(grid, psi_lower(J, xi)),
    )


def completion_errors(s: int, constants: CutoffConstants, lam: float, xi, J: int | None = None):
    """E^s_1 and E^s_2 at real frequencies ``xi`` for modulation ``lam``.

    E^s_1 carries Psi_s, which for J = j(s) is -pi i sgn up to 2^-J scales;
    E^s_2 carries the bare bump.
    """
    if J is None:
        J = j_cutoff(s, constants.alpha)
    e1 = shell_bump_sum(s, constants, xi, lambda t: psi_lower_fast(J, t), shift=lam)
    e2 = shell_bump_sum(s, constants, xi, lambda t: np.ones_like(t), shift=lam)
    return e1, e2


def psi_lower_fast(J: int, t) -> np.ndarray:
    """Psi_s via -pi i G(2^J t); equal to :func:`psi_lower` by telescoping."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore"):
        return -np.pi * 1j * sign_smoothing(np.ldexp(t, J))


# --- lifting ----------------------------------------------------------------


def _offsets(xi, shift, torus):
    t = np.asarray(xi, dtype=float)[None, :] - np.asarray(shift, dtype=float)[:, None]
    return _wrap(t) if torus else t


def _validate_lifting(freqs, s, constants, torus, lam):
    if not arith.check_separation(freqs, s, torus=torus):
        raise SeparationError(f"frequencies are not {s}-separated")
    bound = 2 * constants.c / float(constants.N) ** (s + 1)
    if abs(lam) > bound:
        raise ValueError(f"|lam| = {abs(lam):.3g} exceeds the lifting window {bound:.3g}")


def lifting_pointwise(coeffs, freqs, s: int, constants: CutoffConstants, xi, lam: float = 0.0,
                      torus: bool = True):
    """The two lifting factors at arbitrary points ``xi``; see :func:`lifting_factorize`."""
    coeffs = np.asarray(coeffs, dtype=complex)
    freqs = np.asarray(freqs, dtype=float)
    _validate_lifting(freqs, s, constants, torus, lam)
    t = _offsets(xi, freqs + lam, torus)
    left = np.sum((t < 0) * eval_bump(constants.chi_s(s), t), axis=0)
    u = _offsets(xi, freqs, torus)
    diag = coeffs @ eval_bump(constants.chi_tilde_s(s), u)
    return left, diag


def lifting_factorize(coeffs, freqs, s: int, constants: CutoffConstants, grid: FreqGrid,
                      lam: float = 0.0):
    """Split sum_k c_k P(xi - lam - theta_k) chi_s(xi - lam - theta_k) into two factors.

    Returns ``(left, diag)`` with left = sum_k P chi_s (no coefficients) and
    diag = sum_j c_j chi~_s(xi - theta_j). Requires s-separated frequencies
    and |lam| <= 2c / N^(s+1), which keeps each chi_s bump inside the
    plateau of its own chi~_s and outside every other one.
    """
    left, diag = lifting_pointwise(coeffs, freqs, s, constants, grid.points, lam, grid.is_torus)
    return SampledMultiplier(grid, left), SampledMultiplier(grid, diag)


def lifted_direct_pointwise(coeffs, freqs, s: int, constants: CutoffConstants, xi,
                            lam: float = 0.0, torus: bool = True) -> np.ndarray:
    """sum_k c_k P(xi - lam - theta_k) chi_s(xi - lam - theta_k), summed directly."""
    coeffs = np.asarray(coeffs, dtype=complex)
    t = _offsets(xi, np.asarray(freqs, dtype=float) + lam, torus)
    return coeffs @ ((t < 0) * eval_bump(constants.chi_s(s), t))


def lifted_direct(coeffs, freqs, s: int, constants: CutoffConstants, grid: FreqGrid,
                  lam: float = 0.0) -> SampledMultiplier:
    vals = lifted_direct_pointwise(coeffs, freqs, s, constants, grid.points, lam, grid.is_torus)
    return SampledMultiplier(grid, vals)


# --- periodization and norms ------------------------------------------------


def periodize(m: SampledMultiplier, shifts=None) -> SampledMultiplier:
    """m_per(beta) = sum_l m(beta - l) on the torus grid with the same step.

    The interval grid step must be 1/M and its start a multiple of it. The
    nonzero samples must span less than one period. ``shifts`` restricts
    the sum to the given integers l.
    """
    if m.grid.is_torus:
        raise ValueError("multiplier is already on the torus")
    h = m.grid.step
    M = round(1.0 / h)
    if M < 1 or abs(M * h - 1.0) > 1e-12:
        raise ValueError("grid step must be 1/M for an integer M")
    offset = m.grid.start * M
    if abs(offset - round(offset)) > 1e-9:
        raise ValueError("grid start must lie on the torus grid")
    offset = round(offset)
    nz = np.flatnonzero(m.values)
    if nz.size and (nz[-1] - nz[0]) >= M:
        raise SupportError("support does not fit in a fundamental domain")
    k = np.arange(m.grid.size) + offset
    l = -np.floor_divide(k, M)
    use = np.ones(k.size, dtype=bool) if shifts is None else np.isin(l, list(shifts))
    out = np.zeros(M, dtype=complex)
    np.add.at(out, k[use] % M, m.values[use])
    return SampledMultiplier(FreqGrid.torus(M), out)


def tv_norm(m) -> float:
    """Discrete total variation: sum of |consecutive differences|."""
    vals = m.values if isinstance(m, SampledMultiplier) else np.asarray(m)
    return float(np.sum(np.abs(np.diff(vals))))


def v2_norm(m) -> float:
    """Discrete 2-variation of the samples (exact dynamic programme)."""
    vals = m.values if isinstance(m, SampledMultiplier) else np.asarray(m)
    return float(variation_norm_batch(np.asarray(vals)[:, None], 2.0))


def sup_norm(m) -> float:
    vals = m.values if isinstance(m, SampledMultiplier) else np.asarray(m)
    return float(np.max(np.abs(vals)))
