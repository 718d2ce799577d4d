import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carleson_primes import arith
from oracles import factorize, is_prime_td, mobius_naive, shell_naive, totient_naive


def test_sieve_small():
    assert arith.sieve_primes(10).tolist() == [2, 3, 5, 7]
    assert arith.sieve_primes(1).tolist() == []
    assert arith.sieve_primes(0).tolist() == []


def test_prime_count_1e4_trial_division():
    assert len(arith.sieve_primes(10**4)) == sum(is_prime_td(n) for n in range(10**4 + 1)) == 1229


def test_mobius_examples():
    mu = arith.mobius_sieve(30)
    assert mu[1] == 1 and mu[12] == 0 and mu[30] == -1


def test_mobius_vs_factorization():
    mu = arith.mobius_sieve(3000)
    assert all(mu[n] == mobius_naive(n) for n in range(1, 3001))


@given(st.integers(1, 400), st.integers(1, 400))
def test_mobius_multiplicative(m, n):
    mu = arith.mobius_sieve(160000)
    if math.gcd(m, n) == 1:
        assert mu[m * n] == mu[m] * mu[n]


def test_totient_examples_and_gcd_count():
    phi = arith.totient_sieve(2000)
    assert phi[1] == 1 and phi[12] == 4
    assert all(phi[n] == totient_naive(n) for n in range(1, 500))


def test_gauss_identity():
    limit = 5000
    phi = arith.totient_sieve(limit)
    acc = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        acc[d::d] += phi[d]
    assert np.array_equal(acc[1:], np.arange(1, limit + 1))


def test_shell_examples():
    assert [str(f) for f in arith.farey_shell(0)] == ["0/1"]
    assert [str(f) for f in arith.farey_shell(1)] == ["1/3", "1/2", "2/3"]
    assert len(arith.farey_shell(2)) == 2 + 4 + 2 + 6 == arith.shell_cardinality(2)


@pytest.mark.parametrize("s", range(0, 7))
def test_shell_invariants(s):
    shell = arith.farey_shell(s)
    assert [f.as_fraction() for f in shell] == shell_naive(s)
    q = shell.denominators
    assert np.all((q >= 2**s) & (q < 2 ** (s + 1))) or s == 0
    assert arith.check_separation(list(shell), s)
    phi = arith.totient_sieve(2 ** (s + 1))
    expected = 1 if s == 0 else int(phi[2**s : 2 ** (s + 1)].sum())
    assert len(shell) == expected


def test_shell_budget():
    with pytest.raises(arith.ShellBudgetError):
        arith.farey_shell(6, budget=100)


def test_reduced_fraction_validation():
    with pytest.raises(ValueError):
        arith.ReducedFraction(2, 4)
    with pytest.raises(ValueError):
        arith.ReducedFraction(3, 2)
    with pytest.raises(ValueError):
        arith.ReducedFraction(1, 1)
    assert arith.ReducedFraction(0, 1).value == 0.0


def test_separation_examples():
    assert arith.check_separation([0, Fraction(1, 2)], 0)
    for s in range(5):
        assert not arith.check_separation([Fraction(0), Fraction(1, 2 ** (2 * s + 3))], s)
    # on the torus 0.001 and 0.999 are 0.002 apart
    assert not arith.check_separation([0.001, 0.999], 2)
    assert arith.check_separation([0.001, 0.999], 2, torus=False)


@settings(max_examples=50)
@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=2, max_size=12), st.integers(0, 4))
def test_separation_matches_pairwise(freqs, s):
    gap = 2.0 ** (-2 * s - 2)
    d = [min(abs(a - b), 1 - abs(a - b)) for i, a in enumerate(freqs) for b in freqs[i + 1 :]]
    assert arith.check_separation(freqs, s) == (min(d) > gap)


@pytest.mark.parametrize("eps", [0.1, 0.25])
def test_totient_growth_constant(eps):
    ratio, q = arith.totient_growth_constant(eps, 10**5)
    phi = arith.totient_sieve(10**5)
    direct = min(phi[n] / n ** (1 - eps) for n in range(1, 10**5 + 1, 1))
    assert ratio > 0 and ratio == pytest.approx(direct, rel=1e-12)
    assert phi[q] / q ** (1 - eps) == pytest.approx(ratio)
