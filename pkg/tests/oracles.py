"""Independent reference computations used only by the tests.

Nothing here imports the package's numerics: the oracles use plain Python
fractions, naive loops and mpmath.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from hypothesis import strategies as st


# -- number theory ----------------------------------------------------------

def sigma_naive(n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def superabundant_naive(limit: int) -> list[int]:
    """Definition applied literally: strict records of sigma(n)/n."""
    out = []
    best = Fraction(0)
    for n in range(1, limit + 1):
        a = Fraction(sigma_naive(n), n)
        if a > best:
            best = a
            out.append(n)
    return out


def harmonic_fraction(n: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


# -- Bernoulli numbers (Akiyama-Tanigawa, B_1 = +1/2 convention) -----------

@lru_cache(maxsize=None)
def bernoulli_at(m: int) -> Fraction:
    a = [Fraction(1, j + 1) for j in range(m + 1)]
    for i in range(m + 1):
        for j in range(m - i):
            a[j] = (j + 1) * (a[j] - a[j + 1])
    return a[0]


# -- Euler's constant by Euler-Maclaurin ------------------------------------

def gamma_oracle(digits: int = 110, N: int = 200, terms: int = 60) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Rigorous-enough enclosure of gamma:
    gamma = H_N - ln N - 1/(2N) + sum_{k>=1} B_2k / (2k N^2k),
    with the error after ``terms`` terms below the first omitted term.
    Returns (lo, hi) as mpf at ``digits`` + 20 digits."""
    with mpmath.workdps(digits + 20):
        h = mpmath.mpf(harmonic_fraction(N).numerator) / harmonic_fraction(N).denominator
        s = h - mpmath.log(N) - mpmath.mpf(1) / (2 * N)
        for k in range(1, terms + 1):
            b = bernoulli_at(2 * k)
            s += mpmath.mpf(b.numerator) / b.denominator / (2 * k * mpmath.mpf(N) ** (2 * k))
        b = bernoulli_at(2 * terms + 2)
        err = abs(mpmath.mpf(b.numerator) / b.denominator) / ((2 * terms + 2) * mpmath.mpf(N) ** (2 * terms + 2))
        # slack for the working precision of ln N and the sum
        err += mpmath.mpf(10) ** (-(digits + 10))
        return s - err, s + err


# -- random expression trees ------------------------------------------------

def rationals():
    return st.fractions(min_value=-50, max_value=50, max_denominator=1000)


def trees():
    """Nested tuples: ("leaf", q) | (op, left, right) | (fn, child)."""
    leaf = rationals().map(lambda q: ("leaf", q))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.tuples(st.sampled_from(["add", "sub", "mul", "div"]), kids, kids),
            st.tuples(st.sampled_from(["exp", "log"]), kids),
        ),
        max_leaves=8,
    )


class Skip(Exception):
    """Raised when a tree leaves the domain the kernel is asked to handle."""


def eval_mpmath(tree, dps: int):
    with mpmath.workdps(dps):
        return _eval_mp(tree)


def _eval_mp(tree):
    kind = tree[0]
    if kind == "leaf":
        q = tree[1]
        return mpmath.mpf(q.numerator) / q.denominator
    if kind in ("exp", "log"):
        x = _eval_mp(tree[1])
        if kind == "exp":
            if x > 60:
                raise Skip
            return mpmath.exp(x)
        if x <= 0:
            raise Skip
        return mpmath.log(x)
    a, b = _eval_mp(tree[1]), _eval_mp(tree[2])
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if b == 0:
        raise Skip
    return a / b


def to_fraction(x) -> Fraction:
    """Exact value of an mpf or mpfr as a Fraction."""
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        if not man:
            return Fraction(0)
        return (-1) ** sign * Fraction(man) * Fraction(2) ** exp
    return Fraction(*x.as_integer_ratio())
