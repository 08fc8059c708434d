"""Command-line interface.

Exit codes: 0 every verdict holds, 1 a failure was found, 2 some verdicts are
indeterminate (and none fail), 3 usage or domain error.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import reports as rp
from .bounds import E4, INEQUALITIES, GridSpec, default_grid, lemma_scan
from .divisors import factorize
from .errors import CapError, DomainError, FactorError, RangeError
from .lagarias import check_lagarias, reduction_witness, verify_monotone
from .numkernel import DEFAULT_PRECISION_CAP, DEFAULT_PRECISION_START
from .superabundant import (
    DEFAULT_DIGIT_CAP,
    STRUCTURE_ASSUMPTION,
    SaCache,
    dumps_record,
    sa_first,
    sa_up_to,
)

EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3
MONOTONE_MAX = 10**6

ENV_CACHE = "LAGVERIFY_CACHE"
ENV_PRECISION_CAP = "LAGVERIFY_PRECISION_CAP"

log = logging.getLogger("lagverify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision_start: int = DEFAULT_PRECISION_START
    precision_cap: int = DEFAULT_PRECISION_CAP
    cache_path: Path | None = None
    output_format: str | None = None
    assumption_banner: bool = True
    full_decimal: bool = False
    output: Path | None = None

    def __post_init__(self) -> None:
        if not 2 <= self.precision_start <= self.precision_cap:
            raise UsageError("need 2 <= --precision-start <= --precision-cap")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is our "indeterminate" code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_bigint(text: str) -> int:
    """Accept 12345, 10^30, 10**30 or 1e30 (integral mantissa only)."""
    s = text.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\s*(?:\^|\*\*)\s*(\d+)", s)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = re.fullmatch(r"(\d+)[eE](\d+)", s)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    if re.fullmatch(r"\d+", s):
        return int(s)
    raise argparse.ArgumentTypeError(f"not a non-negative integer: {text!r}")


def parse_real(text: str) -> float:
    if text.strip().lower() in ("e4", "e^4", "exp(4)"):
        return E4
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _default_cache() -> Path:
    env = os.environ.get(ENV_CACHE)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "lagverify"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-start", type=int, default=None,
                        help=f"first rung of the precision ladder in bits (default {DEFAULT_PRECISION_START})")
    common.add_argument("--precision-cap", type=int, default=None,
                        help=f"last rung in bits (default {DEFAULT_PRECISION_CAP}, env {ENV_PRECISION_CAP})")
    common.add_argument("--cache", type=Path, default=None,
                        help=f"superabundant cache directory (env {ENV_CACHE})")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None,
                        dest="output_format")
    common.add_argument("--no-banner", action="store_true",
                        help="omit the superabundant structure assumption")
    common.add_argument("--full-decimal", action="store_true",
                        help="print n in full even when it is huge")
    common.add_argument("--output", "-o", type=Path, default=None,
                        help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="lagverify",
                     description="Certified checks around the Lagarias divisor-sum inequality.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sa", parents=[common], help="enumerate superabundant numbers")
    p.add_argument("mode", choices=["list", "first"])
    p.add_argument("amount", type=parse_bigint, help="value bound (list) or count (first)")
    p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)

    p = sub.add_parser("check", parents=[common], help="check sigma(n) <= H_n + exp(H_n) log H_n")
    p.add_argument("n", nargs="?", type=parse_bigint)
    p.add_argument("--sa-count", type=int, default=None,
                   help="check the first K superabundant numbers")
    p.add_argument("--up-to", type=parse_bigint, default=None, help="check every n <= N")
    p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)

    p = sub.add_parser("monotone", parents=[common], help="certify B_{n+1} > B_n for from <= n < to")
    p.add_argument("start", type=int, metavar="from")
    p.add_argument("stop", type=int, metavar="to")

    p = sub.add_parser("bounds", parents=[common], help="grid scan of one lemma inequality")
    p.add_argument("which", choices=sorted(INEQUALITIES))
    p.add_argument("--lo", type=parse_real, default=None)
    p.add_argument("--hi", type=parse_real, default=None)
    p.add_argument("--points", type=int, default=None)
    spacing = p.add_mutually_exclusive_group()
    spacing.add_argument("--log", dest="spacing", action="store_const", const="log")
    spacing.add_argument("--linear", dest="spacing", action="store_const", const="linear")

    p = sub.add_parser("reduction", parents=[common],
                       help="witness table: non-superabundant m versus the greatest SA n < m")
    p.add_argument("limit", type=int)
    return parser


def _config(args) -> RunConfig:
    cap = args.precision_cap
    if cap is None:
        cap = int(os.environ.get(ENV_PRECISION_CAP, DEFAULT_PRECISION_CAP))
    start = args.precision_start or min(DEFAULT_PRECISION_START, cap)
    return RunConfig(
        precision_start=start,
        precision_cap=cap,
        cache_path=None if args.no_cache else (args.cache or _default_cache()),
        output_format=args.output_format,
        assumption_banner=not args.no_banner,
        full_decimal=args.full_decimal,
        output=args.output,
    )


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is not None:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)


def _banner(cfg: RunConfig, stderr: bool = True) -> str | None:
    if not cfg.assumption_banner:
        return None
    if stderr:
        print(STRUCTURE_ASSUMPTION, file=sys.stderr)
    return STRUCTURE_ASSUMPTION


def _cache(cfg: RunConfig) -> SaCache | None:
    return None if cfg.cache_path is None else SaCache(cfg.cache_path)


def cmd_sa(args, cfg: RunConfig) -> int:
    cache = _cache(cfg)
    if args.mode == "list":
        if args.amount < 1:
            raise UsageError("sa list needs a bound >= 1")
        records = sa_up_to(args.amount, cache=cache)
    else:
        if args.amount < 1:
            raise UsageError("sa first needs a count >= 1")
        records = sa_first(args.amount, digit_cap=args.digit_cap, cache=cache)
    banner = _banner(cfg)
    fmt = cfg.output_format or "json"
    if fmt == "json":
        text = "".join(dumps_record(r) + "\n" for r in records)
    elif fmt == "csv":
        text = rp.dumps_csv(rp.SA_COLUMNS, (rp.sa_row(r, cfg.full_decimal) for r in records))
    else:
        lines = [f"# {banner}"] if banner else []
        for r in records:
            row = rp.sa_row(r, cfg.full_decimal)
            shown = row["n"] if row["n"] is not None else f"<{r.digit_count} digits>"
            lines.append(f"{r.index:>5}  {shown}  sigma(n)/n = {row['abundancy']}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    selectors = [args.n is not None, args.sa_count is not None, args.up_to is not None]
    if sum(selectors) != 1:
        raise UsageError("check needs exactly one of: n, --sa-count K, --up-to N")
    banner = _banner(cfg, stderr=False)
    if args.n is not None:
        if args.n < 1:
            raise UsageError("n must be >= 1")
        targets = [factorize(args.n)]
        selector = {"n": str(args.n)}
    elif args.sa_count is not None:
        if args.sa_count < 1:
            raise UsageError("--sa-count must be >= 1")
        targets = [r.factorization for r in
                   sa_first(args.sa_count, digit_cap=args.digit_cap, cache=_cache(cfg))]
        selector = {"sa_count": args.sa_count}
        banner = _banner(cfg)
    else:
        if args.up_to < 1:
            raise UsageError("--up-to must be >= 1")
        targets = [factorize(n) for n in range(1, args.up_to + 1)]
        selector = {"up_to": str(args.up_to)}

    results = [(f, check_lagarias(f, cfg.precision_cap, cfg.precision_start)) for f in targets]
    rows = [rp.check_row(f, v, cfg.full_decimal) for f, v in results]
    equality = [row["n"] for (_, v), row in zip(results, rows) if v.exact_equality]
    statuses = [v.status for _, v in results]
    fmt = cfg.output_format or "json"
    if fmt == "json":
        text = rp.dumps_json({
            "command": "check",
            "selector": selector,
            "precision_start": cfg.precision_start,
            "precision_cap": cfg.precision_cap,
            "assumption": banner,
            "summary": {"total": len(rows), **rp.tally(statuses), "equality_cases": equality},
            "results": rows,
        })
    elif fmt == "csv":
        cols = ["n_digits", "n", "factorization", "status", "margin_lo", "margin_hi",
                "space", "precision_bits"]
        text = rp.dumps_csv(cols, rows)
    else:
        lines = [f"# {banner}"] if banner else []
        for (_, v), row in zip(results, rows):
            shown = row["n"] if row["n"] is not None else f"<{row['n_digits']} digits>"
            note = "  (exact equality: sigma(n) = RHS(n))" if v.exact_equality else ""
            lines.append(f"n={shown}: {row['status']}  margin in [{row['margin_lo']}, "
                         f"{row['margin_hi']}] ({row['space']}, {row['precision_bits']} bits){note}")
        lines.append(f"summary: {rp.tally(statuses)}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return rp.exit_code(statuses)


def cmd_monotone(args, cfg: RunConfig) -> int:
    if not 1 <= args.start < args.stop <= MONOTONE_MAX:
        raise UsageError(f"monotone needs 1 <= from < to <= {MONOTONE_MAX}")
    results = verify_monotone(args.start, args.stop, cfg.precision_cap, cfg.precision_start)
    rows = [rp.monotone_row(n, v) for n, v in results]
    statuses = [v.status for _, v in results]
    fmt = cfg.output_format or "json"
    if fmt == "json":
        text = rp.dumps_json({
            "command": "monotone",
            "assumption": _banner(cfg, stderr=False),
            "from": args.start,
            "to": args.stop,
            "quantity": "B_{n+1} - B_n",
            "precision_start": cfg.precision_start,
            "precision_cap": cfg.precision_cap,
            "summary": {"total": len(rows), **rp.tally(statuses)},
            "results": rows,
        })
    elif fmt == "csv":
        text = rp.dumps_csv(["n", "status", "margin_lo", "margin_hi", "space", "precision_bits"], rows)
    else:
        lines = [f"n={r['n']}: B_(n+1) - B_n in [{r['margin_lo']}, {r['margin_hi']}] {r['status']}"
                 for r in rows]
        lines.append(f"summary: {rp.tally(statuses)}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return rp.exit_code(statuses)


def cmd_bounds(args, cfg: RunConfig) -> int:
    base = default_grid(args.which)
    try:
        grid = GridSpec(
            base.lo if args.lo is None else args.lo,
            base.hi if args.hi is None else args.hi,
            base.points if args.points is None else args.points,
            args.spacing or base.spacing,
        )
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    results = lemma_scan(args.which, grid, cfg.precision_cap, cfg.precision_start)
    rows = [rp.scan_row(r) for r in results]
    statuses = [r.verdict.status for r in results]
    fmt = cfg.output_format or "csv"
    if fmt == "csv":
        text = rp.dumps_csv(rp.SCAN_COLUMNS, rows)
    elif fmt == "json":
        text = rp.dumps_json({
            "command": "bounds",
            "assumption": _banner(cfg, stderr=False),
            "inequality": args.which,
            "description": INEQUALITIES[args.which].description,
            "grid": {"lo": repr(grid.lo), "hi": repr(grid.hi), "points": grid.points,
                     "spacing": grid.spacing},
            "precision_start": cfg.precision_start,
            "precision_cap": cfg.precision_cap,
            "summary": {"total": len(rows), **rp.tally(statuses)},
            "results": rows,
        })
    else:
        lines = [f"# {args.which}: {INEQUALITIES[args.which].description} "
                 "(grid spot checks, not a proof over the interval)"]
        lines += [f"{r['x']}: {r['status']} margin in [{r['margin_lo']}, {r['margin_hi']}]"
                  for r in rows]
        lines.append(f"summary: {rp.tally(statuses)}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return rp.exit_code(statuses)


def cmd_reduction(args, cfg: RunConfig) -> int:
    if not 2 <= args.limit <= 10**6:
        raise UsageError("reduction needs 2 <= limit <= 10^6")
    report = reduction_witness(args.limit)
    fmt = cfg.output_format or "json"
    if fmt == "json":
        text = rp.dumps_json({
            "command": "reduction",
            "assumption": _banner(cfg, stderr=False),
            "limit": report.limit,
            "sa_count": len(report.sa_values),
            "sa_values": report.sa_values,
            "violation_count": len(report.violations),
            "violations": [list(v) for v in report.violations],
            "witness_columns": rp.WITNESS_COLUMNS,
            "witnesses": rp.witness_rows(report),
        })
    elif fmt == "csv":
        text = rp.dumps_csv(
            rp.WITNESS_COLUMNS,
            (dict(zip(rp.WITNESS_COLUMNS, row)) for row in report.witnesses),
        )
    else:
        lines = [f"m={m}: witness n={n}, sigma(n)/n = {sn}/{n} >= sigma(m)/m = {sm}/{m}"
                 for m, n, sm, sn in report.witnesses]
        lines.append(f"superabundant numbers <= {report.limit}: {len(report.sa_values)}; "
                     f"violations: {len(report.violations)}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {
    "sa": cmd_sa,
    "check": cmd_check,
    "monotone": cmd_monotone,
    "bounds": cmd_bounds,
    "reduction": cmd_reduction,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, DomainError, RangeError, FactorError, CapError, ValueError) as exc:
        print(f"lagverify {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
