"""Machine-readable report rows (JSON objects and CSV lines)."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable

from .bounds import ScanResult
from .divisors import Factorization, value_of
from .lagarias import ReductionReport, Status, Verdict
from .numkernel import decimal_down, decimal_up
from .superabundant import SaRecord, record_to_json

HUGE_DIGITS = 100
MARGIN_DIGITS = 20

SCAN_COLUMNS = ["inequality_id", "x", "status", "margin_lo", "margin_hi", "precision_bits"]
SA_COLUMNS = ["index", "n", "primes", "abundancy", "digits"]
WITNESS_COLUMNS = ["m", "n", "sigma_m", "sigma_n"]

_SAFE_INT = 2**53


def _int(x: int):
    return str(x) if abs(x) > _SAFE_INT else x


def margin_strings(v: Verdict) -> tuple[str, str]:
    return decimal_down(v.margin.lo, MARGIN_DIGITS), decimal_up(v.margin.hi, MARGIN_DIGITS)


def check_row(f: Factorization, v: Verdict, full_decimal: bool = False) -> dict:
    n = value_of(f)
    digits = len(str(n))
    lo, hi = margin_strings(v)
    return {
        "n_digits": digits,
        "n": str(n) if full_decimal or digits <= HUGE_DIGITS else None,
        "factorization": [[_int(p), _int(a)] for p, a in f.pairs],
        "status": v.status.value,
        "margin_lo": lo,
        "margin_hi": hi,
        "space": v.space,
        "precision_bits": v.precision_used,
    }


def monotone_row(n: int, v: Verdict) -> dict:
    lo, hi = margin_strings(v)
    return {
        "n": _int(n),
        "status": v.status.value,
        "margin_lo": lo,
        "margin_hi": hi,
        "space": v.space,
        "precision_bits": v.precision_used,
    }


def scan_row(r: ScanResult) -> dict:
    lo, hi = margin_strings(r.verdict)
    return {
        "inequality_id": r.inequality,
        "x": repr(r.point),
        "status": r.verdict.status.value,
        "margin_lo": lo,
        "margin_hi": hi,
        "precision_bits": r.verdict.precision_used,
    }


def sa_row(rec: SaRecord, full_decimal: bool = False) -> dict:
    row = record_to_json(rec)
    n = rec.value if full_decimal or rec.digit_count <= HUGE_DIGITS else None
    return {
        "index": row["index"],
        "n": None if n is None else str(n),
        "primes": row["primes"],
        "abundancy": row["abundancy"],
        "digits": row["digits"],
    }


def witness_rows(report: ReductionReport) -> list[list[int]]:
    return [list(row) for row in report.witnesses]


def tally(statuses: Iterable[Status]) -> dict:
    counts = {s.value: 0 for s in Status}
    for s in statuses:
        counts[s.value] += 1
    return counts


def exit_code(statuses: Iterable[Status]) -> int:
    """0 all hold, 1 any failure, 2 indeterminate without failures."""
    seen = set(statuses)
    if Status.FAILS in seen:
        return 1
    if Status.INDETERMINATE in seen:
        return 2
    return 0


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dumps_csv(columns: list[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row[k]) for k in columns})
    return buf.getvalue()


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return json.dumps(value, separators=(",", ":"))
    return str(value)
