"""Outward-rounded interval arithmetic on top of MPFR (via gmpy2).

Every endpoint operation runs in an explicit gmpy2 context whose rounding
direction is fixed: lower endpoints round toward -inf, upper endpoints toward
+inf.  MPFR results are correctly rounded in the requested direction, so each
derived :class:`Enclosure` contains the exact value of the expression it
represents.  No global context state is read or modified.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError

DEFAULT_PRECISION_START = 64
DEFAULT_PRECISION_CAP = 4096

# 100 decimal digits of Euler's constant, truncated (not rounded).  The true
# value lies in [literal, literal + 1e-100]; tests recompute it independently.
GAMMA_LITERAL = (
    "0.57721566490153286060651209008240243104215933593992"
    "35988057672348848677267776646709369470632917467495"
)
GAMMA_LITERAL_ERROR = Fraction(1, 10**100)
_GAMMA_LITERAL_MAX_BITS = 256

Real = Union[int, Fraction, "mpq", "mpz"]


@lru_cache(maxsize=None)
def _ctx(precision_bits: int, up: bool) -> gmpy2.context:
    return gmpy2.context(
        precision=precision_bits,
        round=gmpy2.RoundUp if up else gmpy2.RoundDown,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
    )


def down(precision_bits: int) -> gmpy2.context:
    """Context rounding toward -inf."""
    return _ctx(precision_bits, False)


def up(precision_bits: int) -> gmpy2.context:
    """Context rounding toward +inf."""
    return _ctx(precision_bits, True)


class Order(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` known to contain one exact real number."""

    lo: mpfr
    hi: mpfr
    precision_bits: int

    def __post_init__(self) -> None:
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise DomainError("enclosure endpoint is NaN")
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure [{self.lo}, {self.hi}]")
        if self.precision_bits < 2:
            raise ValueError("precision_bits must be at least 2")

    @property
    def width(self) -> mpfr:
        return up(self.precision_bits).sub(self.hi, self.lo)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> mpfr:
        ctx = up(self.precision_bits + 1)
        return ctx.mul_2exp(ctx.add(self.lo, self.hi), -1)

    def contains(self, value) -> bool:
        """Exact membership test for a rational, integer or mpfr value."""
        if isinstance(value, Enclosure):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, Fraction):
            value = mpq(value.numerator, value.denominator)
        elif isinstance(value, int):
            value = mpz(value)
        return self.lo <= value <= self.hi

    def intersects(self, other: Enclosure) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def _coerce(self, other) -> Enclosure:
        if isinstance(other, Enclosure):
            return other
        return rational_to_enclosure(other, self.precision_bits)

    def __add__(self, other) -> Enclosure:
        return interval_arith(self, self._coerce(other), "add")

    def __radd__(self, other) -> Enclosure:
        return interval_arith(self._coerce(other), self, "add")

    def __sub__(self, other) -> Enclosure:
        return interval_arith(self, self._coerce(other), "sub")

    def __rsub__(self, other) -> Enclosure:
        return interval_arith(self._coerce(other), self, "sub")

    def __mul__(self, other) -> Enclosure:
        return interval_arith(self, self._coerce(other), "mul")

    def __rmul__(self, other) -> Enclosure:
        return interval_arith(self._coerce(other), self, "mul")

    def __truediv__(self, other) -> Enclosure:
        return interval_arith(self, self._coerce(other), "div")

    def __rtruediv__(self, other) -> Enclosure:
        return interval_arith(self._coerce(other), self, "div")

    def __neg__(self) -> Enclosure:
        return Enclosure(_neg(self.hi), _neg(self.lo), self.precision_bits)

    def __repr__(self) -> str:
        return (
            f"Enclosure([{decimal_down(self.lo)}, {decimal_up(self.hi)}], "
            f"{self.precision_bits} bits)"
        )


def _neg(x: mpfr) -> mpfr:
    # plain unary minus would round to the global context precision
    return down(max(x.precision, 2)).minus(x)


def interval_arith(a: Enclosure, b: Enclosure, op: str) -> Enclosure:
    """Apply ``op`` in {add, sub, mul, div} with outward rounding."""
    prec = max(a.precision_bits, b.precision_bits)
    lo_ctx, hi_ctx = down(prec), up(prec)
    if op == "add":
        return Enclosure(lo_ctx.add(a.lo, b.lo), hi_ctx.add(a.hi, b.hi), prec)
    if op == "sub":
        return Enclosure(lo_ctx.sub(a.lo, b.hi), hi_ctx.sub(a.hi, b.lo), prec)
    if op == "mul":
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        return Enclosure(
            min(lo_ctx.mul(x, y) for x, y in pairs),
            max(hi_ctx.mul(x, y) for x, y in pairs),
            prec,
        )
    if op == "div":
        if b.lo <= 0 <= b.hi:
            raise DomainError("division by an enclosure containing zero")
        pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
        return Enclosure(
            min(lo_ctx.div(x, y) for x, y in pairs),
            max(hi_ctx.div(x, y) for x, y in pairs),
            prec,
        )
    raise ValueError(f"unknown interval operation {op!r}")


def interval_transcendental(a: Enclosure, fn: str) -> Enclosure:
    """Image of ``a`` under exp or log, evaluated at the endpoints."""
    prec = a.precision_bits
    if fn == "exp":
        return Enclosure(down(prec).exp(a.lo), up(prec).exp(a.hi), prec)
    if fn == "log":
        if a.lo <= 0:
            raise DomainError("log of an enclosure touching a non-positive value")
        return Enclosure(down(prec).log(a.lo), up(prec).log(a.hi), prec)
    raise ValueError(f"unknown transcendental {fn!r}")


def exp(a: Enclosure) -> Enclosure:
    return interval_transcendental(a, "exp")


def log(a: Enclosure) -> Enclosure:
    return interval_transcendental(a, "log")


def compare(a: Enclosure, b: Enclosure) -> Order:
    """LESS and GREATER are certificates; OVERLAP means undecided."""
    if a.hi < b.lo:
        return Order.LESS
    if a.lo > b.hi:
        return Order.GREATER
    return Order.OVERLAP


def hull(a: Enclosure, b: Enclosure) -> Enclosure:
    return Enclosure(
        min(a.lo, b.lo), max(a.hi, b.hi), max(a.precision_bits, b.precision_bits)
    )


def _as_ratio(q) -> tuple[mpz, mpz]:
    if isinstance(q, float):
        q = Fraction(q)
    if isinstance(q, mpfr):
        q = mpq(q)
    return mpz(q.numerator), mpz(q.denominator)


def rational_to_enclosure(q: Real, precision_bits: int) -> Enclosure:
    """Tightest outward enclosure of ``q`` with ``precision_bits``-bit endpoints.

    Rounding is done with exact integer division, so ``lo == hi`` exactly when
    ``q`` is representable.
    """
    num, den = _as_ratio(q)
    prec = precision_bits
    if num == 0:
        zero = mpfr(0, prec)
        return Enclosure(zero, zero, prec)
    a = abs(num)
    shift = prec - (a.bit_length() - den.bit_length())
    while True:
        if shift >= 0:
            m, r = divmod(a << shift, den)
        else:
            m, r = divmod(a, den << -shift)
        if m.bit_length() > prec:
            shift -= 1
            continue
        if m.bit_length() < prec:
            shift += 1
            continue
        break
    # m has exactly prec bits; m + 1 is at most 2**prec, also representable
    scale = down(prec)
    lo_abs = scale.mul_2exp(mpfr(m, prec), -shift)
    hi_abs = lo_abs if r == 0 else scale.mul_2exp(mpfr(m + 1, prec), -shift)
    if num < 0:
        return Enclosure(_neg(hi_abs), _neg(lo_abs), prec)
    return Enclosure(lo_abs, hi_abs, prec)


def point(q: Real, precision_bits: int) -> Enclosure:
    """Shorthand for :func:`rational_to_enclosure`."""
    return rational_to_enclosure(q, precision_bits)


def from_mpfr(x: mpfr, precision_bits: int) -> Enclosure:
    """Enclose an mpfr value, rounding outward if it has more bits than asked."""
    return Enclosure(down(precision_bits).plus(x), up(precision_bits).plus(x), precision_bits)


def gamma_constant(precision_bits: int) -> Enclosure:
    """Enclosure of Euler's constant with width at most ``2**(2 - precision_bits)``.

    Up to 256 bits the shipped literal is used; beyond that MPFR's constant,
    which is correctly rounded in each direction.
    """
    if precision_bits < 16:
        raise ValueError("gamma_constant needs precision_bits >= 16")
    prec = precision_bits
    if prec <= _GAMMA_LITERAL_MAX_BITS:
        literal = Fraction(GAMMA_LITERAL)
        lo = rational_to_enclosure(literal, prec).lo
        hi = rational_to_enclosure(literal + GAMMA_LITERAL_ERROR, prec).hi
        return Enclosure(lo, hi, prec)
    return Enclosure(down(prec).const_euler(), up(prec).const_euler(), prec)


def precision_ladder(start: int = DEFAULT_PRECISION_START,
                     cap: int = DEFAULT_PRECISION_CAP) -> Iterator[int]:
    """Yield start, 2*start, ... and finally ``cap``."""
    if start > cap:
        raise ValueError("precision start exceeds cap")
    prec = start
    while prec < cap:
        yield prec
        prec *= 2
    yield cap


def decimal_down(x: mpfr, digits: int = 20) -> str:
    """Decimal string of ``x`` rounded toward -inf."""
    return _clean(format(x, f".{digits}Dg"))


def decimal_up(x: mpfr, digits: int = 20) -> str:
    """Decimal string of ``x`` rounded toward +inf."""
    return _clean(format(x, f".{digits}Ug"))


def _clean(s: str) -> str:
    if s in ("-0", "-0.0", "0.0"):
        return "0"
    return s
