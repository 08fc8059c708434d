"""Certified checks of sigma(n) <= H_n + exp(H_n) log(H_n) and of the
monotonicity of B_n = (H_n + exp(H_n) log(H_n)) / n."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numkernel as nk
from .divisors import Factorization, factorize, sigma_factors, sigma_of, sigma_sieve, value_of
from .errors import DomainError, RangeError
from .harmonic import harmonic_enclosure
from .numkernel import DEFAULT_PRECISION_CAP, DEFAULT_PRECISION_START, Enclosure
from .superabundant import sa_values_from_sigma

LOG_SPACE_DIGITS = 1000
REDUCTION_MAX = 10**6


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"
    # margin straddles zero at a point where equality is proved
    BOUNDARY_HOLDS = "boundary-holds"

    @property
    def ok(self) -> bool:
        return self in (Status.HOLDS, Status.BOUNDARY_HOLDS)


@dataclass(frozen=True)
class Verdict:
    status: Status
    margin: Enclosure
    precision_used: int
    space: str = "linear"
    exact_equality: bool = False


@dataclass(frozen=True)
class BSequenceValue:
    n: int
    value: Enclosure


def certify(margin_at: Callable[[int], Enclosure], start: int = DEFAULT_PRECISION_START,
            cap: int = DEFAULT_PRECISION_CAP, space: str = "linear",
            equality_allowed: bool = False, boundary: bool = False) -> Verdict:
    """Walk the precision ladder until the sign of the margin is certified.

    ``equality_allowed`` accepts an exact zero margin as HOLDS; ``boundary``
    reports a margin containing zero as BOUNDARY_HOLDS (proved equality point).
    """
    margin = None
    prec = start
    for prec in nk.precision_ladder(start, cap):
        margin = margin_at(prec)
        if margin.lo > 0:
            return Verdict(Status.HOLDS, margin, prec, space)
        if margin.hi < 0:
            return Verdict(Status.FAILS, margin, prec, space)
        if equality_allowed and margin.lo == 0 and margin.hi == 0:
            return Verdict(Status.HOLDS, margin, prec, space, exact_equality=True)
        if boundary:
            return Verdict(Status.BOUNDARY_HOLDS, margin, prec, space)
    return Verdict(Status.INDETERMINATE, margin, prec, space)


def rhs_enclosure(n: int, precision_bits: int) -> Enclosure:
    """H_n + exp(H_n) log(H_n); exactly [1, 1] at n = 1."""
    h = harmonic_enclosure(n, precision_bits)
    return h + nk.exp(h) * nk.log(h)


def log_rhs_enclosure(n: int, precision_bits: int) -> Enclosure:
    """log of the right-hand side, as H + log(log H + H exp(-H))."""
    h = harmonic_enclosure(n, precision_bits)
    return h + nk.log(nk.log(h) + h * nk.exp(-h))


def log_sigma_enclosure(f: Factorization, precision_bits: int) -> Enclosure:
    total = nk.point(0, precision_bits)
    for factor in sigma_factors(f):
        total = total + nk.log(nk.point(factor, precision_bits))
    return total


def check_lagarias(f: Factorization, cap_bits: int = DEFAULT_PRECISION_CAP,
                   start_bits: int = DEFAULT_PRECISION_START,
                   log_space_digits: int = LOG_SPACE_DIGITS) -> Verdict:
    """Certified verdict on sigma(n) <= RHS(n) for the n given by ``f``.

    Numbers with more than ``log_space_digits`` digits are compared as
    log sigma(n) against log RHS(n).
    """
    n = value_of(f)
    if len(str(n)) > log_space_digits:
        return certify(
            lambda prec: log_rhs_enclosure(n, prec) - log_sigma_enclosure(f, prec),
            start_bits, cap_bits, space="log",
        )
    sigma = sigma_of(f)
    return certify(
        lambda prec: rhs_enclosure(n, prec) - nk.point(sigma, prec),
        start_bits, cap_bits, equality_allowed=True,
    )


def b_value(n: int, precision_bits: int) -> BSequenceValue:
    n = int(n)
    if n < 1:
        raise DomainError("B_n needs n >= 1")
    return BSequenceValue(n, rhs_enclosure(n, precision_bits) / n)


def verify_monotone(start_n: int, stop_n: int, cap_bits: int = DEFAULT_PRECISION_CAP,
                    start_bits: int = DEFAULT_PRECISION_START) -> list[tuple[int, Verdict]]:
    """Verdicts on B_{n+1} - B_n > 0 for start_n <= n < stop_n, in order."""
    if not 1 <= start_n < stop_n:
        raise DomainError("verify_monotone needs 1 <= from < to")
    first = {n: b_value(n, start_bits).value for n in range(start_n, stop_n + 1)}
    out = []
    for n in range(start_n, stop_n):
        def margin_at(prec, n=n):
            if prec == start_bits:
                return first[n + 1] - first[n]
            return b_value(n + 1, prec).value - b_value(n, prec).value
        out.append((n, certify(margin_at, start_bits, cap_bits)))
    return out


@dataclass
class ReductionReport:
    """Witness table: for each non-superabundant m, the greatest SA n < m."""

    limit: int
    sa_values: list[int]
    # rows of (m, n, sigma(m), sigma(n))
    witnesses: list[tuple[int, int, int, int]] = field(default_factory=list)
    violations: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def reduction_witness(limit: int) -> ReductionReport:
    """Certify sigma(n)/n >= sigma(m)/m for every non-SA m <= limit, where n is
    the greatest superabundant number below m; comparisons are exact integer
    cross-multiplications."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("reduction_witness needs limit >= 2")
    if limit > REDUCTION_MAX:
        raise RangeError(f"reduction_witness is capped at {REDUCTION_MAX}")
    sigma = sigma_sieve(limit)
    sa = sa_values_from_sigma(sigma)
    sa_arr = np.array(sa, dtype=np.int64)
    ms = np.arange(2, limit + 1, dtype=np.int64)
    non_sa = ms[~np.isin(ms, sa_arr)]
    ns = sa_arr[np.searchsorted(sa_arr, non_sa, side="left") - 1]
    sig_m, sig_n = sigma[non_sa], sigma[ns]
    # sigma(k) < 5k and k <= 10**6 keep these products far below 2**63
    ok = sig_n * non_sa >= sig_m * ns
    report = ReductionReport(limit, sa)
    rows = zip(non_sa.tolist(), ns.tolist(), sig_m.tolist(), sig_n.tolist())
    for row, good in zip(rows, ok.tolist()):
        report.witnesses.append(row)
        if not good:
            report.violations.append(row)
    return report


def check_range(ns, cap_bits: int = DEFAULT_PRECISION_CAP,
                start_bits: int = DEFAULT_PRECISION_START) -> list[tuple[Factorization, Verdict]]:
    """check_lagarias over explicit integers (each <= 10**12), in input order."""
    out = []
    for n in ns:
        f = factorize(n)
        out.append((f, check_lagarias(f, cap_bits, start_bits)))
    return out
