"""Auxiliary functions N, G, p, s and certified grid scans of the lemma-level
inequalities.

A scan evaluates the margin of one inequality at finitely many grid points.
A clean scan is numerical evidence at those points, not a proof over the
continuous range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import numkernel as nk
from .errors import DomainError
from .harmonic import h_prime_enclosure, harmonic_real
from .lagarias import Verdict, certify
from .numkernel import DEFAULT_PRECISION_CAP, DEFAULT_PRECISION_START, Enclosure, Order


def n_enclosure(x: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """N(x) = xH' - H + e^H ((xH' - 1) log H + xH'/H), the numerator of L'(x)."""
    prec = precision_bits or x.precision_bits
    if x.lo < 1:
        raise DomainError("N(x) is evaluated for x >= 1")
    h = harmonic_real(x, prec)
    xhp = x * h_prime_enclosure(x, prec)
    return xhp - h + nk.exp(h) * ((xhp - 1) * nk.log(h) + xhp / h)


def g_value(x: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """G(x) = x/(x+1) - (1 + log x) + x/(1 + log x) - log(1 + log x)."""
    if x.lo < 1:
        raise DomainError("G(x) is evaluated for x >= 1")
    u = 1 + nk.log(x)
    return x / (x + 1) - u + x / u - nk.log(u)


def p_value(t: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """p(t) = e^t - (1 + t) log(1 + t)."""
    if t.lo < 0:
        raise DomainError("p(t) is evaluated for t >= 0")
    return nk.exp(t) - (1 + t) * nk.log(1 + t)


def s_value(t: Enclosure, precision_bits: int | None = None) -> Enclosure:
    """s(t) = e^t - (2t^2 + 3t + 1)."""
    return nk.exp(t) - (2 * t * t + 3 * t + 1)


def _e4_point() -> float:
    # smallest double certified to exceed e^4
    x = math.exp(4)
    e4 = nk.exp(nk.point(4, 128))
    while nk.compare(nk.point(Fraction(x), 128), e4) is not Order.GREATER:
        x = math.nextafter(x, math.inf)
    return x


E4 = _e4_point()


@dataclass(frozen=True)
class Inequality:
    id: str
    variable: str
    domain_min: float
    margin: Callable[[Enclosure, int], Enclosure]
    strict_domain: bool = False
    equality_at: float | None = None
    description: str = ""


def _lb1(x, prec):
    return harmonic_real(x, prec) - nk.log(x + 1)


def _lb2(x, prec):
    return h_prime_enclosure(x, prec) - 1 / (x + 1)


def _ub(x, prec):
    return 1 + nk.log(x) - harmonic_real(x, prec)


def _ng(x, prec):
    return n_enclosure(x, prec) - g_value(x, prec)


def _np(x, prec):
    return n_enclosure(x, prec) / (x * x)


INEQUALITIES = {
    ineq.id: ineq
    for ineq in (
        Inequality("LB1", "x", 1.0, _lb1, description="H(x) >= log(x+1)"),
        Inequality("LB2", "x", 1.0, _lb2, description="H'(x) >= 1/(x+1)"),
        Inequality("UB", "x", 1.0, _ub, equality_at=1.0, description="H(x) <= 1 + log x"),
        Inequality("NG", "x", 1.0, _ng, description="N(x) >= G(x)"),
        Inequality("GP", "x", E4, g_value, strict_domain=True, description="G(x) > 0, x >= e^4"),
        Inequality("NP", "x", E4, _np, strict_domain=True, description="L'(x) = N(x)/x^2 > 0, x >= e^4"),
        Inequality("PQ", "t", 0.0, p_value, description="p(t) = e^t - (1+t)log(1+t) >= 0"),
        Inequality("SQ", "t", 4.0, s_value, description="e^t >= 2t^2 + 3t + 1, t >= 4"),
    )
}


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    points: int = 200
    spacing: str = "log"

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError("grid needs lo < hi")
        if self.points < 2:
            raise DomainError("grid needs at least 2 points")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "log" and self.lo <= 0:
            raise DomainError("log spacing needs lo > 0")

    def values(self) -> list[float]:
        n = self.points - 1
        if self.spacing == "linear":
            step = (self.hi - self.lo) / n
            xs = [self.lo + i * step for i in range(self.points)]
        else:
            a, b = math.log(self.lo), math.log(self.hi)
            xs = [math.exp(a + (b - a) * i / n) for i in range(self.points)]
        xs[0], xs[-1] = self.lo, self.hi
        return [min(max(x, self.lo), self.hi) for x in xs]


def default_grid(which: str) -> GridSpec:
    if which == "PQ":
        return GridSpec(0.0, 20.0, 100, "linear")
    if which == "SQ":
        return GridSpec(4.0, 30.0, 100, "linear")
    return GridSpec(INEQUALITIES[which].domain_min, 1e8, 200, "log")


@dataclass(frozen=True)
class ScanResult:
    inequality: str
    point: float
    verdict: Verdict


def check_domain(which: str, grid: GridSpec) -> None:
    if which not in INEQUALITIES:
        raise DomainError(f"unknown inequality {which!r}")
    ineq = INEQUALITIES[which]
    if ineq.strict_domain:
        # domain is x >= e^4; certify against an enclosure of e^4
        e4 = nk.exp(nk.point(4, 128))
        if nk.compare(nk.point(Fraction(grid.lo), 128), e4) is not Order.GREATER:
            raise DomainError(f"{which} is only claimed for x >= e^4; grid starts at {grid.lo}")
    elif grid.lo < ineq.domain_min:
        raise DomainError(
            f"{which} grid starts at {grid.lo}, below its domain minimum {ineq.domain_min}"
        )


def lemma_scan(which: str, grid: GridSpec | None = None,
               cap_bits: int = DEFAULT_PRECISION_CAP,
               start_bits: int = DEFAULT_PRECISION_START) -> list[ScanResult]:
    """Certified verdicts for one inequality at every grid point, in grid order."""
    if grid is None:
        grid = default_grid(which)
    check_domain(which, grid)
    ineq = INEQUALITIES[which]
    results = []
    for x in grid.values():
        exact = Fraction(x)
        verdict = certify(
            lambda prec: ineq.margin(nk.point(exact, prec), prec),
            start_bits, cap_bits,
            boundary=ineq.equality_at is not None and x == ineq.equality_at,
        )
        results.append(ScanResult(which, x, verdict))
    return results
