"""Smooth cutoffs, the dyadic resolution of 1/t, and their Fourier transforms.

Every bump is even, equal to 1 on ``[-plateau, plateau]`` and 0 outside
``(-support, support)``. The transition is the classical smooth step built
from ``g(u) = exp(-1/u)``. Fourier transforms use ``e(t) = exp(2 pi i t)``
and ``F f(xi) = int f(x) e(-xi x) dx``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import special

__all__ = [
    "BumpSpec",
    "CutoffConstants",
    "TransformAccuracyError",
    "eval_bump",
    "bump_derivative",
    "eval_eta",
    "eval_psi",
    "eval_psi_j",
    "psi_partial_sum",
    "fourier_transform",
    "psi_hat",
    "psi_j_hat",
    "bump_hat",
    "sign_smoothing",
    "psi_sup",
    "fourier_bump",
]


class TransformAccuracyError(ValueError):
    """The requested quadrature tolerance cannot be met at the given resolution."""


def _g(u):
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(u):
    """1 for u <= 0, 0 for u >= 1, C-infinity and monotone in between."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    a, b = _g(1.0 - u), _g(u)
    return a / (a + b)


PROFILES: dict[str, Callable] = {"exp": smooth_step}


@dataclass(frozen=True)
class BumpSpec:
    plateau_half_width: float
    support_half_width: float
    transition_profile: str = "exp"

    def __post_init__(self):
        if not 0 < self.plateau_half_width < self.support_half_width:
            raise ValueError("need 0 < plateau_half_width < support_half_width")
        if self.transition_profile not in PROFILES:
            raise ValueError(f"unknown transition profile {self.transition_profile!r}")

    def scaled(self, factor: float) -> "BumpSpec":
        """Spec of ``x -> b(factor * x)``."""
        return BumpSpec(
            self.plateau_half_width / factor,
            self.support_half_width / factor,
            self.transition_profile,
        )

    def __call__(self, x):
        return eval_bump(self, x)


ETA = BumpSpec(0.5, 1.0)


def eval_bump(spec: BumpSpec, x):
    """Evaluate the bump at ``x`` (scalar or array)."""
    ax = np.abs(np.asarray(x, dtype=float))
    p, w = spec.plateau_half_width, spec.support_half_width
    u = (ax - p) / (w - p)
    out = PROFILES[spec.transition_profile](u)
    out = np.where(ax <= p, 1.0, np.where(ax >= w, 0.0, out))
    return out if out.ndim else float(out)


def bump_derivative(spec: BumpSpec, x):
    """Derivative of the bump at ``x``."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    p, w = spec.plateau_half_width, spec.support_half_width
    u = np.clip((ax - p) / (w - p), 0.0, 1.0)
    inner = (u > 0) & (u < 1)
    d = np.zeros_like(u)
    ui = u[inner]
    # d/du [g(1-u) / (g(u) + g(1-u))] with g' = g / u^2
    ga, gb = np.exp(-1.0 / (1.0 - ui)), np.exp(-1.0 / ui)
    num = -(ga / (1.0 - ui) ** 2) * (ga + gb) - ga * (gb / ui**2 - ga / (1.0 - ui) ** 2)
    d[inner] = num / (ga + gb) ** 2
    return np.sign(x) * d / (w - p)


@dataclass(frozen=True)
class CutoffConstants:
    """Cutoff constants ``c``, ``a``, dyadic ``N`` and approximation exponent ``alpha``.

    ``strict`` enforces ``alpha > 16``. Non-strict instances exist so that the
    approximants can be made visible at desk scale; they are outside the
    regime where the approximation estimate is asserted.
    """

    c: float = 1 / 64
    a: float = 1 / 4
    N: int = 16
    alpha: float = 20.0
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not 0 < self.c < self.a < 1:
            raise ValueError("need 0 < c < a < 1")
        if self.N < 2 or self.N & (self.N - 1):
            raise ValueError("N must be a power of two >= 2")
        if self.alpha <= 0 or (self.strict and self.alpha <= 16):
            raise ValueError("alpha must exceed 16 (pass strict=False to relax)")

    # cutoffs in frequency units
    def chi(self) -> BumpSpec:
        return BumpSpec(self.c / self.N, 2 * self.c / self.N)

    def chi_s(self, s: int) -> BumpSpec:
        return self.chi().scaled(float(self.N) ** s)

    def chi_tilde_s(self, s: int) -> BumpSpec:
        return BumpSpec(4 * self.c / self.N, 8 * self.c / self.N).scaled(float(self.N) ** s)

    def phi(self) -> BumpSpec:
        return BumpSpec(self.c, 2 * self.c)

    def varphi(self) -> BumpSpec:
        return BumpSpec(self.a, 2 * self.a)

    def chi_s_radius(self, s: int) -> Fraction:
        """Exact support half-width ``2c / N^(s+1)`` of ``chi_s``."""
        return 2 * Fraction(self.c).limit_denominator(10**12) / Fraction(self.N) ** (s + 1)

    def as_dict(self) -> dict:
        return {"c": self.c, "a": self.a, "N": self.N, "alpha": self.alpha}


def eval_eta(x):
    return eval_bump(ETA, x)


def eval_psi(x):
    """psi(x) = (eta(x) - eta(2x)) / x, odd, supported in 1/4 <= |x| <= 1."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0
    xn = x[nz]
    out[nz] = (eval_eta(xn) - eval_eta(2 * xn)) / xn
    return out if out.ndim else float(out)


def eval_psi_j(j: int, t):
    """psi_j(t) = 2^-j psi(2^-j t)."""
    scale = math.ldexp(1.0, -j)
    return scale * eval_psi(np.asarray(t, dtype=float) * scale)


def psi_partial_sum(t, j_lo: int, j_hi: int):
    """Sum of psi_j(t) over j_lo <= j <= j_hi."""
    t = np.asarray(t, dtype=float)
    return sum(eval_psi_j(j, t) for j in range(j_lo, j_hi + 1))


@functools.lru_cache(maxsize=1)
def psi_sup() -> float:
    """Realized sup |psi| (the constant hidden in |psi| <~ 1_[1/4,1])."""
    x = np.linspace(0.25, 1.0, 200_001)
    return float(np.max(np.abs(eval_psi(x))))


def _trapezoid_ft(func, lo, hi, xi, n, parity=None):
    # nodes on [lo, hi]; func and all its derivatives vanish at both ends
    x = np.linspace(lo, hi, n + 1)
    h = (hi - lo) / n
    fx = func(x) * h
    fx[0] *= 0.5
    fx[-1] *= 0.5
    out = np.empty(xi.shape, dtype=complex)
    chunk = max(1, 2_000_000 // (n + 1))
    flat_xi, flat_out = xi.ravel(), out.ravel()
    for k in range(0, flat_xi.size, chunk):
        ph = 2 * np.pi * np.outer(flat_xi[k : k + chunk], x)
        if parity == "odd":
            flat_out[k : k + chunk] = -2j * (np.sin(ph) @ fx)
        elif parity == "even":
            flat_out[k : k + chunk] = 2 * (np.cos(ph) @ fx)
        else:
            flat_out[k : k + chunk] = np.exp(-1j * ph) @ fx
    return out


def fourier_transform(func, support, xi, tol=1e-12, parity=None, min_nodes=256, scale=1.0):
    """Fourier transform of a smooth function vanishing outside ``support``.

    Uses the trapezoid rule, which converges faster than any power for
    functions flat at the ends of their support. The step is halved once to
    estimate the error; :class:`TransformAccuracyError` is raised if the
    estimate exceeds ``tol``. For ``parity`` in ``{"odd", "even"}`` only the
    positive half ``[0, support[1]]`` is sampled. ``scale`` is the length
    over which ``func`` changes (its transition width relative to eta's);
    the node count grows as it shrinks.
    """
    xi = np.asarray(xi, dtype=float)
    lo, hi = support
    if parity is not None:
        lo = 0.0
    width = hi - lo
    band = float(np.max(np.abs(xi))) if xi.size else 0.0
    # aliasing sits at multiples of n / width; keep the first alias well clear
    n = max(min_nodes, 1 << math.ceil(math.log2((band + 1024.0 / scale) * width + 1)))
    fine = _trapezoid_ft(func, lo, hi, xi, 2 * n, parity)
    coarse = _trapezoid_ft(func, lo, hi, xi, n, parity)
    err = float(np.max(np.abs(fine - coarse))) if xi.size else 0.0
    if err > tol:
        raise TransformAccuracyError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}")
    return fine


# psi-hat beyond this frequency is below 1e-17 in magnitude
PSI_HAT_CUTOFF = 512.0


def psi_hat(xi, tol=1e-12):
    """Fourier transform of psi; purely imaginary and odd."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape, dtype=complex)
    live = np.abs(xi) < PSI_HAT_CUTOFF
    if np.any(live):
        out[live] = fourier_transform(eval_psi, (0.25, 1.0), xi[live], tol=tol, parity="odd")
    return out


def psi_j_hat(j: int, beta, tol=1e-12):
    """Fourier transform of psi_j at ``beta``, via psi_j-hat(beta) = psi-hat(2^j beta)."""
    return psi_hat(np.asarray(beta, dtype=float) * math.ldexp(1.0, j), tol=tol)


def bump_hat(spec: BumpSpec, xi, tol=1e-12):
    """Fourier transform of an (even, real) bump; real and even."""
    out = fourier_transform(
        lambda x: eval_bump(spec, x),
        (-spec.support_half_width, spec.support_half_width),
        xi,
        tol=tol,
        parity="even",
        scale=2 * (spec.support_half_width - spec.plateau_half_width),
    )
    return out.real


# G(y) = sgn(y) to double precision beyond this point
SIGN_SMOOTHING_CUTOFF = 2048.0


def sign_smoothing(y):
    """G(y) = (sgn * eta-hat)(y) = (2/pi) int_0^1 eta(t) sin(2 pi y t) / t dt.

    Odd, tends to sgn(y). Computed as the sine integral over [0, 1/2], where
    eta = 1, plus composite Gauss-Legendre over [1/2, 1].
    """
    y0 = np.asarray(y, dtype=float)
    y = np.atleast_1d(y0)
    out = np.sign(y)
    live = (np.abs(y) < SIGN_SMOOTHING_CUTOFF) & (y != 0)
    if np.any(live):
        yl = y[live]
        si, _ = special.sici(np.pi * yl)
        panels = max(16, int(np.ceil(np.max(np.abs(yl)))))
        nodes, weights = np.polynomial.legendre.leggauss(24)
        edges = np.linspace(0.5, 1.0, panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        t = (0.5 * (edges[:-1] + edges[1:])[:, None] + half * nodes[None, :]).ravel()
        wt = np.tile(weights * half, panels) * eval_eta(t) / t
        tail = np.empty_like(yl)
        chunk = max(1, 2_000_000 // t.size)
        for k in range(0, yl.size, chunk):
            tail[k : k + chunk] = np.sin(2 * np.pi * np.outer(yl[k : k + chunk], t)) @ wt
        out = out.astype(float)
        out[live] = (2 / np.pi) * (si + tail)
    return out.reshape(y0.shape) if y0.ndim else float(out[0])


def fourier_bump(obj, grid, tol=1e-12):
    """Fourier transform of a bump (``BumpSpec``) or of psi_j (an integer j) on a frequency grid.

    Returns a ``SampledMultiplier``; raises :class:`TransformAccuracyError`
    when the quadrature cannot reach ``tol``.
    """
    from .multiplier import SampledMultiplier

    xi = grid.points
    if isinstance(obj, BumpSpec):
        vals = bump_hat(obj, xi, tol=tol)
    else:
        vals = psi_j_hat(int(obj), xi, tol=tol)
    return SampledMultiplier(grid, vals)
