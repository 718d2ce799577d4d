"""Operator-side evaluations on finitely supported and sampled signals.

Signals on the integers are :class:`SignalZ`. Signals on the line are
:class:`SignalR`, samples on a uniform periodic grid whose spectrum is read
off with the FFT (frequencies ``numpy.fft.fftfreq(n, h)``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import arith
from .multiplier import J_MAX, SeparationError, _kernel, m_j_grid, shell_bump_sum
from .smooth import CutoffConstants, eval_bump, eval_psi_j
from .variation import (
    VectorPath,
    jump_breakpoints,
    jump_count,
    sup_exponential_moment,
    variation_norm_batch,
)

__all__ = [
    "SignalZ",
    "SignalR",
    "NormEstimate",
    "ShellGridMismatch",
    "carleson_direct",
    "carleson_multiplier",
    "prime_weights",
    "apply_multiplier",
    "partial_fourier_S",
    "truncated_S",
    "truncated_S_family",
    "truncation_tv",
    "all_cut_sums",
    "domination_check",
    "multifreq_maximal",
    "multifreq_operator",
    "multifreq_multipliers",
    "vector_sup_F",
    "functional_G",
    "moment_bound_check",
    "cs_multiplier",
    "cs_operator",
    "cs_precomputed",
    "cs_active",
    "cs_norms",
    "estimate_opnorm",
]


# --- signals -----------------------------------------------------------------


@dataclass(frozen=True)
class SignalZ:
    """f(n) = samples[n - support_offset], zero elsewhere."""

    support_offset: int
    samples: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.samples)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        object.__setattr__(self, "samples", vals)
        object.__setattr__(self, "support_offset", int(self.support_offset))

    @classmethod
    def delta(cls, n0: int = 0) -> "SignalZ":
        return cls(n0, np.ones(1))

    @property
    def sites(self) -> np.ndarray:
        return self.support_offset + np.arange(self.samples.size)

    def norm(self, p: float) -> float:
        a = np.abs(self.samples)
        if math.isinf(p):
            return float(a.max(initial=0.0))
        return float(np.sum(a**p) ** (1.0 / p))

    def at(self, n) -> np.ndarray:
        n = np.asarray(n) - self.support_offset
        ok = (n >= 0) & (n < self.samples.size)
        out = np.zeros(n.shape, dtype=self.samples.dtype)
        out[ok] = self.samples[n[ok]]
        return out


@dataclass(frozen=True)
class SignalR:
    """Samples f(x_min + k h), k < n, on a periodic window of length n h."""

    h: float
    x_min: float
    samples: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.samples)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("need a one-dimensional sample array")
        if not self.h > 0:
            raise ValueError("grid spacing must be positive")
        object.__setattr__(self, "samples", vals)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x_max(self) -> float:
        return self.x_min + self.h * (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(self.n)

    @property
    def freqs(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, self.h)

    @property
    def nyquist(self) -> float:
        return 0.5 / self.h

    def like(self, samples) -> "SignalR":
        return SignalR(self.h, self.x_min, samples)

    def norm(self, p: float) -> float:
        a = np.abs(self.samples)
        if math.isinf(p):
            return float(a.max())
        return float((self.h * np.sum(a**p)) ** (1.0 / p))

    @classmethod
    def from_spectrum(cls, h: float, x_min: float, spectrum) -> "SignalR":
        """Inverse of :func:`numpy.fft.fft` ordering; ``spectrum`` indexed like ``freqs``."""
        spectrum = np.asarray(spectrum, dtype=complex)
        return cls(h, x_min, np.fft.ifft(spectrum))


@dataclass
class NormEstimate:
    """||T f||_p / ||f||_p for the stored maximizing input; a lower bound for ||T||."""

    value: float
    p: float
    trials: int
    seed: int
    maximizer_id: str
    maximizer: object = field(default=None, repr=False)
    ratios: np.ndarray = field(default=None, repr=False)


class ShellGridMismatch(ValueError):
    """The frequency grid cannot resolve the requested shell."""


# --- the discrete Carleson operator ---------------------------------------


def _lambda_points(lam_set) -> np.ndarray:
    pts = np.asarray(getattr(lam_set, "points", lam_set), dtype=float).ravel()
    if pts.size == 0:
        raise ValueError("empty modulation set")
    return pts


def prime_weights(p_max: int, j_max: int | None = None):
    """Signed primes up to ``p_max`` with weights log|p|/p (or the dyadic pieces).

    With ``j_max`` the weight is log|p| * sum_{2 <= j <= j_max} psi_j(p), the
    kernel whose transform is sum_j m_j, and ``p_max`` is taken as 2^j_max.
    """
    if j_max is not None:
        ker = [_kernel(j, max(j_max, J_MAX)) for j in range(2, j_max + 1)]
        sites = np.concatenate([k.sites for k in ker])
        weights = np.concatenate([k.weights for k in ker])
        uniq, inv = np.unique(sites, return_inverse=True)
        w = np.zeros(uniq.size)
        np.add.at(w, inv, weights)
        return uniq, w
    p = arith.sieve_primes(int(p_max)).astype(float)
    w = np.log(p) / p
    return (
        np.concatenate([-p[::-1], p]).astype(np.int64),
        np.concatenate([-w[::-1], w]),
    )


def carleson_direct(f: SignalZ, lam_set, p_max: int, j_max: int | None = None) -> SignalZ:
    """sup over lambda of |sum_p f(n - p) log|p| e(lambda p) / p| by direct convolution.

    The output lives on ``[offset - P, offset + len(f) - 1 + P]`` with
    ``P = p_max`` (or 2^j_max when the dyadic pieces are used).
    """
    lams = _lambda_points(lam_set)
    if j_max is not None:
        p_max = 2**j_max
    sites, weights = prime_weights(p_max, j_max)
    P = int(p_max)
    dense = np.zeros(2 * P + 1)
    dense[sites + P] = weights
    k = np.arange(-P, P + 1)
    best = np.zeros(f.samples.size + 2 * P)
    for lam in lams:
        kern = dense * np.exp(2j * np.pi * lam * k)
        best = np.maximum(best, np.abs(np.convolve(f.samples, kern)))
    return SignalZ(f.support_offset - P, best)


def carleson_multiplier(f: SignalZ, lam_set, j_max: int) -> SignalZ:
    """Same operator evaluated through m(lambda, .) = sum_{j <= j_max} m_j on a DFT grid."""
    lams = _lambda_points(lam_set)
    P = 2**j_max
    L = f.samples.size
    M = 1 << (L + 2 * P).bit_length()
    fhat = np.fft.fft(f.samples, M)
    idx = np.arange(-P, L + P) % M
    best = np.zeros(L + 2 * P)
    for lam in lams:
        m = np.zeros(M, dtype=complex)
        for j in range(2, j_max + 1):
            m += m_j_grid(j, lam, M, max(j_max, J_MAX)).values
        best = np.maximum(best, np.abs(np.fft.ifft(fhat * m)[idx]))
    return SignalZ(f.support_offset - P, best)


# --- partial Fourier integrals on the line --------------------------------


def apply_multiplier(f: SignalR, m) -> SignalR:
    """(m f-hat)^vee with ``m`` a callable of frequency or an array in FFT order."""
    vals = m(f.freqs) if callable(m) else np.asarray(m)
    return f.like(np.fft.ifft(np.fft.fft(f.samples) * vals))


def _clamp(f: SignalR, lam: float) -> float:
    lo, hi = -f.nyquist, f.nyquist
    if lam < lo or lam > hi:
        warnings.warn(f"lambda={lam} outside the band [{lo}, {hi}]; clamped", stacklevel=3)
        return min(max(lam, lo - f.h), hi + f.h)
    return lam


def partial_fourier_S(f: SignalR, lam: float) -> SignalR:
    """Sharp cutoff: keep the frequencies xi < lam."""
    lam = _clamp(f, lam)
    return apply_multiplier(f, lambda xi: (xi < lam).astype(float))


def _truncation(constants: CutoffConstants, s: int):
    phi = constants.phi().scaled(float(constants.N) ** s)
    return lambda t: (t < 0) * eval_bump(phi, t)


def truncated_S(f: SignalR, lam: float, s: int, constants: CutoffConstants) -> SignalR:
    """Multiplier P(xi - lam) phi(N^s (xi - lam))."""
    mult = _truncation(constants, s)
    return apply_multiplier(f, lambda xi: mult(xi - lam))


def truncated_S_family(f: SignalR, lams, s: int, constants: CutoffConstants) -> np.ndarray:
    """S^s_lam f for every lam in ``lams``; shape (len(lams), n)."""
    mult = _truncation(constants, s)
    lams = np.asarray(lams, dtype=float)
    spec = np.fft.fft(f.samples)
    return np.fft.ifft(spec[None, :] * mult(f.freqs[None, :] - lams[:, None]), axis=1)


def truncation_tv(constants: CutoffConstants, s: int) -> float:
    """||dm||_TV for m(t) = 1_{t<0} phi(N^s t): the rise of phi plus the jump at 0."""
    return 2.0


def all_cut_sums(f: SignalR):
    """S_lam f at every cut between consecutive grid frequencies.

    Returns ``(cuts, sums)`` with ``sums[k]`` the sum of the k lowest
    frequency components, so k runs over 0..n. Exact for grid signals.
    """
    order = np.argsort(f.freqs, kind="stable")
    xi = f.freqs[order]
    spec = np.fft.fft(f.samples)[order] / f.n
    # component k evaluated at the sample points, with the FFT's own phase origin
    k = np.arange(f.n)
    comps = spec[:, None] * np.exp(2j * np.pi * np.outer(order, k) / f.n)
    sums = np.concatenate([np.zeros((1, f.n), dtype=complex), np.cumsum(comps, axis=0)])
    h = np.diff(xi).mean()
    cuts = np.concatenate([[xi[0] - h / 2], xi + h / 2])
    return cuts, sums


def domination_check(f: SignalR, s: int, constants: CutoffConstants, lams, r: float = 3.0):
    """Both sides of the generic domination by the variational Carleson operator.

    Returns a dict with pointwise arrays ``sup_lhs``, ``sup_rhs``,
    ``var_lhs``, ``var_rhs``. The left sides use S^s_lam over ``lams``; the
    right sides use the partial sums over all grid cuts, scaled by
    ||dm||_TV. Exact when the lams are multiples of the frequency step.
    """
    lams = np.sort(np.asarray(lams, dtype=float))
    tv = truncation_tv(constants, s)
    vals = truncated_S_family(f, lams, s, constants)
    _, sums = all_cut_sums(f)
    sup_lhs = np.max(np.abs(vals), axis=0)
    sup_rhs = tv * np.max(np.abs(sums), axis=0)
    var_lhs = variation_norm_batch(vals.T[:, :, None], r)
    var_rhs = tv * variation_norm_batch(sums.T[:, :, None], r)
    return {"sup_lhs": sup_lhs, "sup_rhs": sup_rhs, "var_lhs": var_lhs, "var_rhs": var_rhs}


# --- multi-frequency maximal operator --------------------------------------


def _check_sep(freqs, s):
    if not arith.check_separation(freqs, s, torus=False):
        raise SeparationError(f"frequencies are not {s}-separated")


def multifreq_multipliers(freqs, s: int, constants: CutoffConstants, lams, xi) -> np.ndarray:
    """sum_i P phi(N^s(xi - theta_i - lam)) varphi(N^s(xi - theta_i)) for each lam."""
    Ns = float(constants.N) ** s
    phi, vphi = constants.phi(), constants.varphi()
    freqs = np.asarray(freqs, dtype=float)
    lams = np.asarray(lams, dtype=float)
    u = xi[None, :] - freqs[:, None]  # (K, n)
    outer = eval_bump(vphi, Ns * u)
    out = np.zeros((lams.size, xi.size))
    for k, lam in enumerate(lams):
        t = u - lam
        out[k] = np.sum((t < 0) * eval_bump(phi, Ns * t) * outer, axis=0)
    return out


def multifreq_operator(freqs, s: int, constants: CutoffConstants, lams, template: SignalR):
    """The multi-frequency maximal operator with its multipliers precomputed for one grid."""
    _check_sep(freqs, s)
    mults = multifreq_multipliers(freqs, s, constants, lams, template.freqs)

    def op(f: SignalR) -> SignalR:
        if f.n != template.n or f.h != template.h:
            raise ValueError("signal grid differs from the template grid")
        vals = np.fft.ifft(mults * np.fft.fft(f.samples)[None, :], axis=1)
        return f.like(np.max(np.abs(vals), axis=0))

    return op


def multifreq_maximal(f: SignalR, freqs, s: int, constants: CutoffConstants, lams) -> SignalR:
    """sup over lam of |sum_i e(theta_i x) S^s_lam(varphi(N^s .) f-hat(. + theta_i))^vee(x)|."""
    return multifreq_operator(freqs, s, constants, lams, f)(f)


def vector_sup_F(fs, s: int, constants: CutoffConstants, lams) -> SignalR:
    """F(x) = sup over lam of (sum_i |S^s_lam f_i(x)|^2)^(1/2)."""
    fs = list(fs)
    acc = None
    for fi in fs:
        v = np.abs(truncated_S_family(fi, lams, s, constants)) ** 2
        acc = v if acc is None else acc + v
    return fs[0].like(np.sqrt(np.max(acc, axis=0)))


def functional_G(path: VectorPath, K: int) -> float:
    """int_0^inf min(K^(1/2), J_t^(1/2)) dt, summed exactly over the jump breakpoints."""
    bps = jump_breakpoints(path)
    if bps.size == 0:
        return 0.0
    left = np.concatenate([[0.0], bps[:-1]])
    total = 0.0
    for a, b in zip(left, bps):
        # J_t is constant on [a, b); evaluate in the interior
        J = jump_count(path, a if a > 0 else b / 2)
        total += (b - a) * min(math.sqrt(K), math.sqrt(J))
    return total


def moment_bound_check(A, freqs, s: int, x: float, constants: CutoffConstants):
    """(lhs, rhs_K, rhs_card) for the sup over a finite A of exponential sums.

    lhs is the L^2 norm over u in [0, c N^s] of sup_a |sum_i a_i e(theta_i x) e(theta_i u)|;
    the right sides are N^(s/2) min-branch bounds without absolute constants.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    _check_sep(freqs, s)
    Ns = float(constants.N) ** s
    lhs = sup_exponential_moment(A, freqs, x, constants.c * Ns)
    amax = float(np.max(np.linalg.norm(A, axis=1)))
    K = A.shape[1]
    return lhs, math.sqrt(Ns * K) * amax, math.sqrt(Ns * A.shape[0]) * amax


# --- the reduced operator C^s ----------------------------------------------


def _check_shell_fit(f: SignalR, s: int, constants: CutoffConstants, lams):
    w = float(constants.chi_s_radius(s))
    step = 1.0 / (f.n * f.h)
    if step > w / 4:
        raise ShellGridMismatch(
            f"frequency step {step:.3g} cannot resolve chi_{s} (half-width {w:.3g})"
        )
    lo = float(np.min(lams)) - w
    hi = 1.0 + float(np.max(lams)) + w
    if lo < -f.nyquist or hi >= f.nyquist:
        raise ShellGridMismatch(f"band [{-f.nyquist:.3g}, {f.nyquist:.3g}) misses [{lo:.3g}, {hi:.3g}]")


def cs_multiplier(s: int, constants: CutoffConstants, lam: float, xi) -> np.ndarray:
    """sum over R_s of mu(q)/phi(q) P(xi - lam - a/q) chi_s(xi - lam - a/q)."""
    return shell_bump_sum(s, constants, xi, lambda t: (t < 0).astype(float), shift=lam).real


def cs_operator(f: SignalR, s: int, lam_set, constants: CutoffConstants,
                return_brackets: bool = False):
    """C^s_Lambda f = sup over lam of the shell-s truncated multiplier applied to f.

    With ``return_brackets`` also returns sup_xi |multiplier| per lam, the
    Plancherel upper bound for the single-lam operators on L^2.
    """
    lams = _lambda_points(lam_set)
    _check_shell_fit(f, s, constants, lams)
    spec = np.fft.fft(f.samples)
    best = np.zeros(f.n)
    brackets = []
    for lam in lams:
        m = cs_multiplier(s, constants, lam, f.freqs)
        brackets.append(float(np.max(np.abs(m))))
        best = np.maximum(best, np.abs(np.fft.ifft(spec * m)))
    out = f.like(best)
    return (out, np.array(brackets)) if return_brackets else out


def cs_precomputed(template: SignalR, s: int, lam_set, constants: CutoffConstants):
    """C^s_Lambda on the template grid with its multipliers built once.

    Returns ``(op, brackets)``; brackets[k] = sup_xi |multiplier| for the k-th lam.
    """
    lams = _lambda_points(lam_set)
    _check_shell_fit(template, s, constants, lams)
    mults = np.array([cs_multiplier(s, constants, lam, template.freqs) for lam in lams])
    brackets = np.max(np.abs(mults), axis=1)

    def op(f: SignalR) -> SignalR:
        if f.n != template.n or f.h != template.h:
            raise ValueError("signal grid differs from the template grid")
        vals = np.fft.ifft(mults * np.fft.fft(f.samples)[None, :], axis=1)
        return f.like(np.max(np.abs(vals), axis=0))

    return op, brackets


def cs_active(s: int, constants: CutoffConstants, lam_set):
    """Active frequency windows (center, half-width) of C^s_Lambda."""
    lams = _lambda_points(lam_set)
    shell = arith.farey_shell(s)
    q = shell.denominators
    mu, _ = arith.arith_tables(int(q.max()))
    centers = shell.values[mu[q] != 0]
    w = float(constants.chi_s_radius(s))
    return [(float(c + lam), w) for c in centers for lam in lams]


def cs_norms(template: SignalR, s: int, lam_set, constants: CutoffConstants,
             ps=(2.0, 5 / 3, 3.0), trials: int = 20, seed: int = 0) -> dict:
    """NormEstimate of C^s_Lambda for each exponent in ``ps``."""
    active = cs_active(s, constants, lam_set)
    op = lambda g: cs_operator(g, s, lam_set, constants)
    return {p: estimate_opnorm(op, template, p, trials, seed, active) for p in ps}


# --- empirical operator norms ----------------------------------------------


def _random_input(template: SignalR, active, rng) -> np.ndarray:
    """Random spectrum concentrated on the active windows, or a single bump."""
    xi = template.freqs
    spec = np.zeros(template.n, dtype=complex)
    if not active:
        spec = rng.normal(size=template.n) + 1j * rng.normal(size=template.n)
        return np.fft.ifft(spec)
    if rng.random() < 0.5:
        c, w = active[rng.integers(len(active))]
        width = w * rng.uniform(0.1, 1.0)
        spec = eval_bump(_bump_spec(width), xi - c - rng.uniform(-w, w)).astype(complex)
    else:
        picks = rng.choice(len(active), size=min(len(active), 1 + rng.integers(8)), replace=False)
        for i in picks:
            c, w = active[i]
            near = np.abs(xi - c) < 2 * w
            spec[near] += rng.normal(size=near.sum()) + 1j * rng.normal(size=near.sum())
    if not np.any(spec):
        spec[np.argmin(np.abs(xi - active[0][0]))] = 1.0
    return np.fft.ifft(spec)


def _bump_spec(width):
    from .smooth import BumpSpec

    return BumpSpec(width / 2, width)


def estimate_opnorm(op: Callable, template: SignalR, p: float, trials: int, seed: int,
                    active=None) -> NormEstimate:
    """Largest ||op f||_p / ||f||_p over seeded random structured inputs.

    Trial t draws from ``numpy.random.default_rng([seed, t])``, so results
    do not depend on evaluation order. ``active`` lists (center, half-width)
    frequency windows where inputs are concentrated.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ratios = np.zeros(trials)
    best, best_f, best_t = -1.0, None, 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        f = template.like(_random_input(template, active or [], rng))
        nf = f.norm(p)
        if nf == 0:
            continue
        ratios[t] = op(f).norm(p) / nf
        if ratios[t] > best:
            best, best_f, best_t = ratios[t], f, t
    return NormEstimate(float(best), p, trials, seed, f"trial-{best_t}", best_f, ratios)
