"""Number-theoretic primitives: sieves, Farey shells and separation checks.

Frequencies live on the torus [0, 1); the denominator-one fraction is stored
as 0/1, so shells for different ``s`` are disjoint.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ReducedFraction",
    "FareyShell",
    "ShellBudgetError",
    "sieve_primes",
    "mobius_sieve",
    "totient_sieve",
    "farey_shell",
    "shell_cardinality",
    "check_separation",
    "separation_threshold",
    "totient_growth_constant",
]

# Shell s holds roughly (3/pi^2) * 3 * 4^s fractions.
DEFAULT_SHELL_BUDGET = 1 << 20


class ShellBudgetError(ValueError):
    """Raised when a Farey shell would exceed the cardinality budget."""


@dataclass(frozen=True, order=True)
class ReducedFraction:
    numerator: int
    denominator: int

    def __post_init__(self):
        a, q = self.numerator, self.denominator
        if q < 1 or a < 0:
            raise ValueError(f"invalid fraction {a}/{q}")
        if math.gcd(a, q) != 1:
            raise ValueError(f"{a}/{q} is not reduced")
        if a >= q and not (a == 0 and q == 1):
            raise ValueError(f"{a}/{q} is not in [0, 1)")

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class FareyShell:
    """Reduced fractions a/q in [0, 1) with 2^s <= q < 2^(s+1), sorted by value."""

    s: int
    fractions: tuple[ReducedFraction, ...]

    def __len__(self):
        return len(self.fractions)

    def __iter__(self):
        return iter(self.fractions)

    @functools.cached_property
    def numerators(self) -> np.ndarray:
        return np.array([f.numerator for f in self.fractions], dtype=np.int64)

    @functools.cached_property
    def denominators(self) -> np.ndarray:
        return np.array([f.denominator for f in self.fractions], dtype=np.int64)

    @functools.cached_property
    def values(self) -> np.ndarray:
        return self.numerators / self.denominators


def sieve_primes(limit: int) -> np.ndarray:
    """Primes in [2, limit], ascending (Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def mobius_sieve(limit: int) -> np.ndarray:
    """Array ``mu`` with ``mu[n]`` the Moebius function for 1 <= n <= limit.

    ``mu[0]`` is set to 0 and carries no meaning.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in sieve_primes(limit):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def totient_sieve(limit: int) -> np.ndarray:
    """Array ``phi`` with ``phi[n]`` Euler's totient for 1 <= n <= limit."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in sieve_primes(limit):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi


@functools.lru_cache(maxsize=None)
def _arith_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    return mobius_sieve(limit), totient_sieve(limit)


def arith_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached ``(mu, phi)`` tables up to at least ``limit`` (rounded up to a power of two)."""
    size = 1 << max(4, int(limit).bit_length())
    return _arith_tables(size)


def shell_cardinality(s: int) -> int:
    """Number of fractions in shell ``s``: sum of phi(q) over 2^s <= q < 2^(s+1)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return 1
    _, phi = arith_tables(2 ** (s + 1))
    return int(phi[2**s : 2 ** (s + 1)].sum())


def farey_shell(s: int, budget: int = DEFAULT_SHELL_BUDGET) -> FareyShell:
    """Fractions a/q in [0, 1) with gcd(a, q) = 1 and 2^s <= q < 2^(s+1).

    Shell 0 is ``{0/1}``. Raises :class:`ShellBudgetError` when the shell has
    more than ``budget`` elements.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    size = shell_cardinality(s)
    if size > budget:
        raise ShellBudgetError(f"shell s={s} has {size} fractions, budget is {budget}")
    return _farey_shell(s)


@functools.lru_cache(maxsize=32)
def _farey_shell(s: int) -> FareyShell:
    if s == 0:
        return FareyShell(0, (ReducedFraction(0, 1),))
    pairs = []
    for q in range(2**s, 2 ** (s + 1)):
        a = np.arange(1, q, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        pairs.extend((int(x), q) for x in a)
    pairs.sort(key=lambda aq: Fraction(*aq))
    return FareyShell(s, tuple(ReducedFraction(a, q) for a, q in pairs))


def separation_threshold(s: int) -> Fraction:
    """The s-separation gap 2^(-2s-2), exactly."""
    return Fraction(1, 2 ** (2 * s + 2))


def check_separation(freqs: Iterable, s: int, torus: bool = True) -> bool:
    """True iff all pairwise distances exceed 2^(-2s-2).

    ``freqs`` may hold floats, ints, :class:`fractions.Fraction` or
    :class:`ReducedFraction`; exact types are compared exactly. On the torus,
    distances are taken modulo 1.
    """
    vals = []
    for f in freqs:
        if isinstance(f, ReducedFraction):
            f = f.as_fraction()
        elif isinstance(f, (np.floating, np.integer)):
            f = f.item()
        vals.append(f % 1 if torus else f)
    if len(vals) < 2:
        return True
    gap = separation_threshold(s)
    if not all(isinstance(v, (int, Fraction)) for v in vals):
        gap = float(gap)
    vals.sort()
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if torus:
        diffs.append(1 - vals[-1] + vals[0])
    return min(diffs) > gap


def totient_growth_constant(eps: float, limit: int = 10**5) -> tuple[float, int]:
    """Minimum of phi(q) / q^(1 - eps) over 1 <= q <= limit and its argmin."""
    _, phi = arith_tables(limit)
    q = np.arange(1, limit + 1)
    ratio = phi[1 : limit + 1] / q ** (1.0 - eps)
    k = int(np.argmin(ratio))
    return float(ratio[k]), k + 1
