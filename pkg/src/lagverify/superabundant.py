"""Superabundant numbers: n with sigma(n)/n > sigma(m)/m for every m < n.

Two routes are provided.  :func:`brute_force_sa` applies the definition to
every integer up to a limit.  :func:`sa_up_to` scans only products of
consecutive primes with non-increasing exponents; that every superabundant
number has this shape is the Alaoglu-Erdos structure theorem, which this
module assumes rather than proves (see :data:`STRUCTURE_ASSUMPTION`).  The
two routes are cross-checked in the tests up to 10**6.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Iterator

import numpy as np

from .divisors import PRIMES, Factorization, abundancy, factorize, sigma_sieve, value_of
from .errors import CapError, RangeError

log = logging.getLogger(__name__)

BRUTE_FORCE_MAX = 10**8
DEFAULT_DIGIT_CAP = 10**4
STRUCTURE_ASSUMPTION = (
    "assumption: superabundant numbers are products of consecutive primes "
    "with non-increasing exponents (Alaoglu-Erdos); cross-checked against the "
    "definition only up to 10^6"
)

_JSON_SAFE_INT = 2**53


@dataclass(frozen=True)
class SaRecord:
    index: int
    factorization: Factorization
    abundancy: Fraction
    digit_count: int

    @property
    def value(self) -> int:
        return value_of(self.factorization)


def _trusted(pairs: tuple[tuple[int, int], ...]) -> Factorization:
    # pairs built from the prime supply are valid by construction
    f = object.__new__(Factorization)
    object.__setattr__(f, "pairs", pairs)
    return f


def _make_record(index: int, value: int, f: Factorization) -> SaRecord:
    return SaRecord(index, f, abundancy(f), len(str(value)))


def brute_force_sa(limit: int) -> list[SaRecord]:
    """Record scan of sigma(n)/n over every n <= limit."""
    limit = int(limit)
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > BRUTE_FORCE_MAX:
        raise RangeError(f"brute_force_sa is capped at {BRUTE_FORCE_MAX}")
    sigma = sigma_sieve(limit)
    return [
        _make_record(i, n, factorize(n))
        for i, n in enumerate(sa_values_from_sigma(sigma), start=1)
    ]


def sa_values_from_sigma(sigma: np.ndarray) -> list[int]:
    """Strict records of sigma[n]/n for 1 <= n < len(sigma), compared exactly."""
    limit = len(sigma) - 1
    ns = np.arange(limit + 1, dtype=np.int64)
    ratio = np.zeros(limit + 1)
    ratio[1:] = sigma[1:] / ns[1:]
    running = np.maximum.accumulate(ratio)
    # a float ratio within 1e-12 of the running max is a candidate record;
    # everything else is strictly below an earlier value, exactly
    prev = np.concatenate(([0.0], running[:-1]))
    candidates = np.flatnonzero(ratio >= prev * (1 - 1e-12))
    values = []
    best_sigma, best_n = 0, 1
    for n in candidates:
        n = int(n)
        if n == 0:
            continue
        s = int(sigma[n])
        if s * best_n > best_sigma * n:
            best_sigma, best_n = s, n
            values.append(n)
    return values


def _candidate_stream(bound: int) -> Iterator[tuple[int, tuple[tuple[int, int], ...]]]:
    """(value, pairs) for every consecutive-prime, non-increasing-exponent n <= bound."""
    yield 1, ()
    # stack entries: (prime index, value so far, max exponent, pairs so far)
    stack = [(0, 1, None, ())]
    while stack:
        i, value, max_exp, pairs = stack.pop()
        p = PRIMES.nth(i)
        v = value
        a = 0
        children = []
        while max_exp is None or a < max_exp:
            v *= p
            if v > bound:
                break
            a += 1
            children.append((v, a))
        for v, a in children:
            child = pairs + ((p, a),)
            yield v, child
            stack.append((i + 1, v, a, child))


def enumerate_candidates(value_bound: int) -> Iterator[Factorization]:
    """Every product of consecutive primes from 2 with non-increasing
    exponents and value <= value_bound, each exactly once (n = 1 included)."""
    bound = int(value_bound)
    if bound < 1:
        raise ValueError("value_bound must be >= 1")
    for _, pairs in _candidate_stream(bound):
        yield _trusted(pairs)


def _record_scan(bound: int) -> list[SaRecord]:
    cands = sorted(_candidate_stream(bound))
    records = []
    best_sigma, best_n = 0, 1
    for value, pairs in cands:
        s = prod((p ** (a + 1) - 1) // (p - 1) for p, a in pairs)
        if s * best_n > best_sigma * value:
            best_sigma, best_n = s, value
            records.append(_make_record(len(records) + 1, value, _trusted(pairs)))
    return records


def sa_up_to(value_bound: int, cache: SaCache | None = None) -> list[SaRecord]:
    """Superabundant numbers <= value_bound, via the structured candidate set."""
    bound = int(value_bound)
    if bound < 1:
        raise ValueError("value_bound must be >= 1")
    if cache is not None:
        hit = cache.load(bound)
        if hit is not None:
            return hit
    records = _record_scan(bound)
    if cache is not None:
        cache.store(bound, records)
    return records


def sa_first(k: int, digit_cap: int = DEFAULT_DIGIT_CAP,
             cache: SaCache | None = None) -> list[SaRecord]:
    """The first k superabundant numbers.

    The search bound is 10**d, with d growing by half each round; the
    candidate count roughly triples every four digits, so plain doubling of d
    overshoots badly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    digits = 4
    while True:
        records = sa_up_to(10**digits, cache=cache)
        if len(records) >= k:
            return records[:k]
        digits = (3 * digits + 1) // 2
        if digits > digit_cap:
            raise CapError(
                f"first {k} superabundant numbers need more than {digit_cap} digits"
            )


def is_superabundant(n: int) -> bool:
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    records = sa_up_to(n)
    return records[-1].value == n


# -- serialization and cache ------------------------------------------------

def _json_int(x: int):
    return str(x) if abs(x) > _JSON_SAFE_INT else x


def record_to_json(rec: SaRecord) -> dict:
    a = rec.abundancy
    return {
        "index": _json_int(rec.index),
        "primes": [[_json_int(p), _json_int(e)] for p, e in rec.factorization.pairs],
        "abundancy": f"{a.numerator}/{a.denominator}",
        "digits": _json_int(rec.digit_count),
    }


def record_from_json(obj: dict) -> SaRecord:
    num, den = obj["abundancy"].split("/")
    f = Factorization.from_pairs((int(p), int(e)) for p, e in obj["primes"])
    return SaRecord(int(obj["index"]), f, Fraction(int(num), int(den)), int(obj["digits"]))


def dumps_record(rec: SaRecord) -> str:
    return json.dumps(record_to_json(rec), separators=(", ", ": "))


def verify_records(records: list[SaRecord], bound: int | None = None) -> bool:
    """Check indices, recomputed abundancies, digit counts and strict monotonicity."""
    prev_value, prev_ab = 0, Fraction(0)
    for i, rec in enumerate(records, start=1):
        value = rec.value
        if rec.index != i or rec.abundancy != abundancy(rec.factorization):
            return False
        if rec.digit_count != len(str(value)):
            return False
        if value <= prev_value or rec.abundancy <= prev_ab:
            return False
        if bound is not None and value > bound:
            return False
        prev_value, prev_ab = value, rec.abundancy
    return True


class SaCache:
    """Directory of JSONL files, one per value bound.  Single writer."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path_for(self, bound: int) -> Path:
        key = str(bound)
        if len(key) > 40:
            key = "h" + hashlib.sha256(key.encode()).hexdigest()[:32]
        return self.directory / f"sa-le-{key}.jsonl"

    def load(self, bound: int) -> list[SaRecord] | None:
        path = self.path_for(bound)
        if not path.exists():
            return None
        try:
            with path.open() as fh:
                records = [record_from_json(json.loads(line)) for line in fh if line.strip()]
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding unreadable cache %s: %s", path, exc)
            return None
        if not records or not verify_records(records, bound):
            log.warning("discarding cache %s: record invariants violated", path)
            return None
        return records

    def store(self, bound: int, records: list[SaRecord]) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(bound)
        tmp = path.with_suffix(".tmp")
        with tmp.open("w") as fh:
            for rec in records:
                fh.write(dumps_record(rec) + "\n")
        os.replace(tmp, path)
