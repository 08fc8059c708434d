"""Exact divisor sums from factorizations, plus the small prime machinery."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod
from typing import Iterable

import numpy as np

from .errors import FactorError, RangeError

FACTORIZE_MAX = 10**12
TRIAL_BOUND = 10**6

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


class PrimeSupply:
    """Ascending primes, sieved in growing segments on demand."""

    def __init__(self, initial_limit: int = 1024):
        self._limit = initial_limit
        self._primes = [int(p) for p in sieve_primes(initial_limit)]
        self._lock = threading.Lock()

    def first(self, k: int) -> list[int]:
        with self._lock:
            while len(self._primes) < k:
                self._limit *= 2
                self._primes = [int(p) for p in sieve_primes(self._limit)]
            return self._primes[:k]

    def nth(self, i: int) -> int:
        """The i-th prime, 0-based (nth(0) == 2)."""
        return self.first(i + 1)[i]


PRIMES = PrimeSupply()
_trial_primes: list[int] | None = None


def _trial_division_primes() -> list[int]:
    global _trial_primes
    if _trial_primes is None:
        _trial_primes = [int(p) for p in sieve_primes(TRIAL_BOUND)]
    return _trial_primes


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending (prime, exponent) pairs; () is n = 1."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple((int(p), int(a)) for p, a in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        last = 1
        for p, a in pairs:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if a < 1:
                raise ValueError("exponents must be positive")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            last = p

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]]) -> Factorization:
        return cls(tuple(tuple(pair) for pair in pairs))

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def value_of(f: Factorization) -> int:
    return prod(p**a for p, a in f.pairs)


def sigma_factors(f: Factorization) -> list[int]:
    """Per-prime factors (p^(a+1) - 1) / (p - 1) whose product is sigma(n)."""
    return [(p ** (a + 1) - 1) // (p - 1) for p, a in f.pairs]


def sigma_of(f: Factorization) -> int:
    return prod(sigma_factors(f))


def abundancy(f: Factorization) -> Fraction:
    """sigma(n)/n in lowest terms."""
    return Fraction(sigma_of(f), value_of(f))


def factorize(n: int) -> Factorization:
    """Complete factorization of 1 <= n <= 10**12 by trial division."""
    n = int(n)
    if not 1 <= n <= FACTORIZE_MAX:
        raise RangeError(f"factorize handles 1 <= n <= {FACTORIZE_MAX}, got {n}")
    pairs = []
    rest = n
    for p in _trial_division_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            a = 0
            while rest % p == 0:
                rest //= p
                a += 1
            pairs.append((p, a))
    if rest > 1:
        if not is_prime(rest):
            raise FactorError(f"composite cofactor {rest} beyond trial bound")
        pairs.append((rest, 1))
    return Factorization(tuple(pairs))


def sigma_sieve(limit: int) -> np.ndarray:
    """Array s with s[n] = sigma(n) for 0 <= n <= limit (s[0] = 0)."""
    sigma = np.zeros(limit + 1, dtype=np.int64)
    # each divisor pair d * k = n with s = min(d, k) is visited once at s
    for s in range(1, isqrt(limit) + 1):
        ks = np.arange(s, limit // s + 1, dtype=np.int64)
        idx = s * ks
        sigma[idx] += s
        sigma[idx[1:]] += ks[1:]
    return sigma
