"""Harmonic numbers H_n, their real extension H(x) = psi(x+1) + gamma, and H'(x).

Integer arguments up to a crossover are summed exactly.  Everything else goes
through the asymptotic expansions

    H(x)   = gamma + log x + 1/(2x) - sum_k B_2k / (2k x^2k)        + R
    psi'(z) = 1/z + 1/(2z^2) + sum_k B_2k / z^(2k+1)                 + R'

after shifting the argument upward with the recurrences
H(x+1) = H(x) + 1/(x+1) and psi'(z) = psi'(z+1) + 1/z^2.  For real positive
arguments each remainder is bounded in magnitude by the first omitted term;
the enclosures use that bound symmetrically.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq, mpz

from . import numkernel as nk
from .errors import DomainError, RangeError
from .numkernel import Enclosure

HARMONIC_EXACT_MAX = 10**6
HARMONIC_CROSSOVER = 10**5
TRIGAMMA_K_CAP = 10**7

_CHECKPOINT_STRIDE = 512
_CHECKPOINT_LIMIT = 2 * 10**5
_MAX_EXPANSION_TERMS = 160


# -- exact harmonic numbers -------------------------------------------------

def _binsplit(a: int, b: int) -> tuple[mpz, mpz]:
    """(p, q) with p/q = sum of 1/j for a <= j < b, not reduced."""
    if b - a <= 16:
        p, q = mpz(0), mpz(1)
        for j in range(a, b):
            p, q = p * j + q, q * j
        return p, q
    m = (a + b) // 2
    p1, q1 = _binsplit(a, m)
    p2, q2 = _binsplit(m, b)
    return p1 * q2 + p2 * q1, q1 * q2


class _CheckpointTable:
    """H at multiples of a fixed stride, extended on demand under a lock."""

    def __init__(self, stride: int, limit: int):
        self.stride = stride
        self.limit = limit
        self._values = [mpq(0)]
        self._lock = threading.Lock()

    def nearest_below(self, n: int) -> tuple[int, mpq]:
        idx = min(n, self.limit) // self.stride
        with self._lock:
            while len(self._values) <= idx:
                i = len(self._values)
                p, q = _binsplit((i - 1) * self.stride + 1, i * self.stride + 1)
                self._values.append(self._values[-1] + mpq(p, q))
            return idx * self.stride, self._values[idx]


_TABLE = _CheckpointTable(_CHECKPOINT_STRIDE, _CHECKPOINT_LIMIT)


def _harmonic_mpq(n: int) -> mpq:
    base, value = _TABLE.nearest_below(n)
    if base == n:
        return value
    p, q = _binsplit(base + 1, n + 1)
    return value + mpq(p, q)


def harmonic_exact(n: int) -> Fraction:
    """H_n as a reduced fraction, for 1 <= n <= 10**6."""
    n = int(n)
    if not 1 <= n <= HARMONIC_EXACT_MAX:
        raise RangeError(f"harmonic_exact needs 1 <= n <= {HARMONIC_EXACT_MAX}, got {n}")
    h = _harmonic_mpq(n)
    # mpq is already in lowest terms; skip Fraction's gcd pass
    return Fraction(int(h.numerator), int(h.denominator), _normalize=False)


# -- Bernoulli numbers ------------------------------------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_bernoulli_lock = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (convention B_1 = -1/2)."""
    with _bernoulli_lock:
        while len(_bernoulli_cache) <= m:
            k = len(_bernoulli_cache)
            if k % 2 == 1:
                _bernoulli_cache.append(Fraction(0))
                continue
            acc = Fraction(0)
            binom = 1
            for j in range(k):
                acc += binom * _bernoulli_cache[j]
                binom = binom * (k + 1 - j) // (j + 1)
            _bernoulli_cache.append(-acc / (k + 1))
        return _bernoulli_cache[m]


@lru_cache(maxsize=None)
def _psi_coeff(k: int) -> Fraction:
    return bernoulli(2 * k) / (2 * k)


# -- asymptotic evaluation --------------------------------------------------

def _shift_target(precision_bits: int) -> int:
    return max(16, precision_bits // 2)


def _tolerance(precision_bits: int) -> mpq:
    return mpq(1, 2 ** (precision_bits + 4))


def _h_asymptotic(x: Enclosure, prec: int, min_terms: int = 2) -> Enclosure:
    """H(x) for x.lo large enough that the expansion is accurate."""
    inv = 1 / x
    inv2 = inv * inv
    total = nk.gamma_constant(prec) + nk.log(x) + inv / 2
    power = inv2
    tol = _tolerance(prec) * (1 + abs(total.hi))
    k = 1
    while True:
        total = total - power * nk.point(_psi_coeff(k), prec)
        power = power * inv2
        bound = abs(_psi_coeff(k + 1)) * power.hi
        k += 1
        if k > min_terms and (bound < tol or k > _MAX_EXPANSION_TERMS):
            break
    r = nk.up(prec).mul(power.hi, nk.point(abs(_psi_coeff(k)), prec).hi)
    return Enclosure(nk.down(prec).sub(total.lo, r), nk.up(prec).add(total.hi, r), prec)


def _trigamma_asymptotic(z: Enclosure, prec: int) -> Enclosure:
    """psi'(z) for z.lo large enough that the expansion is accurate."""
    inv = 1 / z
    inv2 = inv * inv
    total = inv + inv2 / 2
    power = inv2 * inv
    tol = _tolerance(prec) * abs(total.hi)
    k = 1
    while True:
        total = total + power * nk.point(bernoulli(2 * k), prec)
        power = power * inv2
        k += 1
        bound = abs(bernoulli(2 * k)) * power.hi
        if bound < tol or k > _MAX_EXPANSION_TERMS:
            break
    r = nk.up(prec).mul(power.hi, nk.point(abs(bernoulli(2 * k)), prec).hi)
    return Enclosure(nk.down(prec).sub(total.lo, r), nk.up(prec).add(total.hi, r), prec)


def _shift_count(x: Enclosure, target: int) -> int:
    if x.lo >= target:
        return 0
    return target - int(math.floor(float(x.lo)))


def harmonic_real(x: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """Enclosure of H(x) = psi(x + 1) + gamma for real x >= 0.

    Point arguments that are small integers take the exact route.
    """
    prec = precision_bits or x.precision_bits
    if x.lo < 0:
        raise DomainError("H(x) is only evaluated for x >= 0")
    if x.is_point and x.lo.is_integer() and x.lo <= HARMONIC_CROSSOVER:
        n = int(x.lo)
        if n == 0:
            return nk.point(0, prec)
        return harmonic_enclosure(n, prec)
    return _h_shifted(x, prec)


def _h_shifted(x: Enclosure, prec: int) -> Enclosure:
    s = _shift_count(x, _shift_target(prec))
    if s == 0:
        return _h_asymptotic(x, prec)
    correction = nk.point(0, prec)
    for j in range(1, s + 1):
        correction = correction + 1 / (x + j)
    return _h_asymptotic(x + s, prec) - correction


def harmonic_enclosure(n: int, precision_bits: int, method: str = "auto",
                       crossover: int = HARMONIC_CROSSOVER) -> Enclosure:
    """Enclosure of H_n.

    ``method`` is ``"exact"`` (reduced rational, then rounded outward),
    ``"asymptotic"``, or ``"auto"``, which picks exact for n <= crossover.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"H_n needs n >= 1, got {n}")
    prec = precision_bits
    if method == "auto":
        method = "exact" if n <= crossover else "asymptotic"
    if method == "exact":
        if n > HARMONIC_EXACT_MAX:
            raise RangeError(f"exact H_n limited to n <= {HARMONIC_EXACT_MAX}")
        return nk.rational_to_enclosure(_harmonic_mpq(n), prec)
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")
    return _h_shifted(nk.point(n, prec), prec)


# -- trigamma ---------------------------------------------------------------

def default_trigamma_terms(y: Enclosure, precision_bits: int) -> int:
    k = math.ceil(2.0 ** (precision_bits / 2) / float(y.lo))
    return min(max(16, k), TRIGAMMA_K_CAP)


def trigamma_enclosure(y: Enclosure, K: int | None = None,
                       precision_bits: int | None = None) -> Enclosure:
    """psi'(y) as a K-term partial sum plus an integral-comparison tail.

    The tail sum over k >= K of 1/(y+k)^2 lies in [1/(y+K), 1/(y+K-1)].
    """
    prec = precision_bits or y.precision_bits
    if y.lo < 1:
        raise DomainError("trigamma_enclosure needs y >= 1")
    if K is None:
        K = default_trigamma_terms(y, prec)
    if K < 1:
        raise ValueError("K must be positive")
    partial = nk.point(0, prec)
    for k in range(K):
        t = y + k
        partial = partial + 1 / (t * t)
    tail = Enclosure((1 / (y + K)).lo, (1 / (y + (K - 1))).hi, prec)
    return partial + tail


def trigamma(y: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """psi'(y) for y > 0 via upward shift and the asymptotic expansion."""
    prec = precision_bits or y.precision_bits
    if y.lo <= 0:
        raise DomainError("trigamma needs y > 0")
    s = _shift_count(y, _shift_target(prec))
    if s == 0:
        return _trigamma_asymptotic(y, prec)
    head = nk.point(0, prec)
    for j in range(s):
        t = y + j
        head = head + 1 / (t * t)
    return head + _trigamma_asymptotic(y + s, prec)


def h_prime_enclosure(x: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """H'(x) = psi'(x + 1) for x >= 0."""
    prec = precision_bits or x.precision_bits
    if x.lo < 0:
        raise DomainError("H'(x) is only evaluated for x >= 0")
    return trigamma(x + 1, prec)
