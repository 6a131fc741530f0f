"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage or format error,
3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from math import factorial

from .analysis import (
    REPORT_FORMATS,
    emit_rule_report,
    expected_scan_comparisons,
    predicted_counts,
    predicted_weighted_moves,
)
from .engine import (
    GenerationError,
    LinePrinter,
    NullSink,
    RunStats,
    check_permutee,
    default_alphabet,
    generate_sequence,
    iter_sequence,
)
from .reference import RECURSIVE_MAX_N, iter_next_permutation, recursive_lex
from .rulegen import Rule, RuleTable, build_rule_table
from .schedule import BACKENDS

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

GENERATE_MAX_N = 12
VERIFY_MAX_N = 9
VERIFY_FORCE_MAX_N = 10
BENCH_MAX_N = 12
ORACLES = ("next-perm", "recursive", "both")


class UsageError(Exception):
    pass


def _err(msg):
    print(f"lexrules: {msg}", file=sys.stderr)


def _symbols(args) -> tuple:
    if args.alphabet is not None:
        raw = args.alphabet
        symbols = tuple(s.strip() for s in raw.split(",")) if "," in raw else tuple(raw)
        try:
            return check_permutee(symbols)
        except ValueError as exc:
            raise UsageError(f"bad alphabet: {exc}") from None
    if args.n is None:
        raise UsageError("one of --n or --alphabet is required")
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    try:
        return default_alphabet(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _guard(n, limit, force, what):
    if n > limit and not force:
        raise UsageError(f"{what} is limited to n <= {limit} ({factorial(n)} permutations); use --force")


def format_stats(stats: RunStats) -> str:
    return (f"applications={stats.applications} weighted_moves={stats.weighted_moves} "
            f"nonzero_moves={stats.nonzero_moves} comparisons={stats.comparisons} "
            f"rule_storage={stats.peak_rule_storage}")


# -- generate ---------------------------------------------------------------

def cmd_generate(args) -> int:
    symbols = _symbols(args)
    n = len(symbols)
    _guard(n, GENERATE_MAX_N, args.force, "generate")
    sink = NullSink() if args.quiet else LinePrinter(sys.stdout)
    try:
        stats = generate_sequence(symbols, args.backend, sink, limit=args.limit, check=args.check)
    except GenerationError as exc:
        _err(f"generation aborted: {exc}")
        return EXIT_INTERNAL
    summary = format_stats(stats)
    print(summary, file=sys.stdout if args.quiet else sys.stderr)
    return EXIT_OK


# -- rules ------------------------------------------------------------------

def cmd_rules(args) -> int:
    if args.format not in REPORT_FORMATS:
        raise UsageError(f"unknown format {args.format!r}")
    try:
        text = emit_rule_report(args.n, args.format)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _first_divergence(produced, expected):
    """1-based index of the first mismatch, with both sides (None past the end)."""
    sentinel = object()
    it_p, it_e = iter(produced), iter(expected)
    p = 0
    while True:
        p += 1
        a, b = next(it_p, sentinel), next(it_e, sentinel)
        if a is sentinel and b is sentinel:
            return None
        if a != b:
            return (p, None if a is sentinel else a, None if b is sentinel else b)


def _fmt_perm(perm):
    return "<end>" if perm is None else "(" + " ".join(map(str, perm)) + ")"


def run_verify(symbols, oracle="both", backends=None, table: RuleTable | None = None, out=None) -> int:
    """Compare the rule-based sequence against the oracles and the closed forms."""
    out = out if out is not None else sys.stdout
    backends = list(backends or BACKENDS)
    n = len(symbols)
    table = table if table is not None else build_rule_table(n)
    oracles = ["next-perm", "recursive"] if oracle == "both" else [oracle]
    recursive = recursive_lex(symbols).sequence if "recursive" in oracles else None

    pred = predicted_counts(n)
    expect = {
        "applications": pred.applications,
        "weighted_moves": predicted_weighted_moves(n),
    }
    scan_total = expected_scan_comparisons(n).total
    failures = 0

    def report(label, ok, detail=""):
        nonlocal failures
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {label}{'  ' + detail if detail else ''}", file=out)

    for backend in backends:
        for name in oracles:
            stats = RunStats()
            produced = iter_sequence(symbols, backend, table=table, stats=stats, count_rules=True)
            expected = iter_next_permutation(symbols) if name == "next-perm" else recursive
            try:
                div = _first_divergence(produced, expected)
            except GenerationError as exc:
                report(f"{backend} vs {name}", False, f"aborted: {exc}")
                return EXIT_INTERNAL
            if div is None:
                report(f"{backend} vs {name}", True, f"{factorial(n)} permutations match")
            else:
                p, got, want = div
                report(f"{backend} vs {name}", False,
                       f"first divergence at p={p}: got {_fmt_perm(got)}, expected {_fmt_perm(want)}")

        counts_ok = all(stats.rule_counts.get(e.rule, 0) == e.coords.application_count(n)
                        for e in table) if n >= 2 else not stats.rule_counts
        measured = stats.as_dict()
        rows = list(expect.items())
        if backend == "scan":
            rows.append(("comparisons", scan_total))
        for key, want in rows:
            got = measured[key]
            report(f"{backend} {key}", got == want, f"measured={got} predicted={want}")
        report(f"{backend} per-rule counts", counts_ok)
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def _corrupt(table: RuleTable, coords: str) -> RuleTable:
    m, i = (int(x) for x in coords.split(":"))
    return table.replace((m, i), Rule((0,) * table.n))


def cmd_verify(args) -> int:
    symbols = _symbols(args)
    n = len(symbols)
    limit = VERIFY_FORCE_MAX_N if args.force else VERIFY_MAX_N
    if n > limit:
        raise UsageError(f"verify is limited to n <= {VERIFY_MAX_N} "
                         f"({VERIFY_FORCE_MAX_N} with --force)")
    if args.oracle != "next-perm" and n > RECURSIVE_MAX_N:
        raise UsageError(f"recursive oracle is limited to n <= {RECURSIVE_MAX_N}")
    backends = list(BACKENDS) if args.backend == "all" else [args.backend]
    table = build_rule_table(n)
    if args.corrupt:
        try:
            table = _corrupt(table, args.corrupt)
        except (ValueError, KeyError):
            raise UsageError(f"cannot corrupt rule {args.corrupt!r}") from None
    return run_verify(symbols, args.oracle, backends, table)


# -- bench ------------------------------------------------------------------

def parse_range(text: str) -> list[int]:
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


BENCH_FIELDS = ["n", "backend", "sample", "seconds", "applications", "weighted_moves",
                "nonzero_moves", "comparisons", "predicted_applications",
                "predicted_weighted_moves", "predicted_comparisons"]


def bench_rows(ns, backends, repeats, all_samples=False):
    for n in ns:
        symbols = default_alphabet(n)
        pred = predicted_counts(n)
        for backend in backends:
            timings = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                stats = generate_sequence(symbols, backend, NullSink())
                timings.append(time.perf_counter() - t0)
            base = {
                "n": n,
                "backend": backend,
                "applications": stats.applications,
                "weighted_moves": stats.weighted_moves,
                "nonzero_moves": stats.nonzero_moves,
                "comparisons": stats.comparisons,
                "predicted_applications": pred.applications,
                "predicted_weighted_moves": predicted_weighted_moves(n),
                "predicted_comparisons": expected_scan_comparisons(n).total if backend == "scan" else 0,
            }
            if all_samples:
                for k, t in enumerate(timings, start=1):
                    yield dict(base, sample=k, seconds=f"{t:.6f}")
            else:
                yield dict(base, sample="median", seconds=f"{statistics.median(timings):.6f}")


def cmd_bench(args) -> int:
    try:
        ns = parse_range(args.n)
    except ValueError:
        raise UsageError(f"bad n range {args.n!r}") from None
    if not ns or min(ns) < 1:
        raise UsageError("n range must contain positive sizes")
    _guard(max(ns), BENCH_MAX_N, args.force, "bench")
    backends = list(BACKENDS) if args.backend == "all" else args.backend.split(",")
    for b in backends:
        if b not in BACKENDS:
            raise UsageError(f"unknown backend {b!r}")
    if args.repeats < 1:
        raise UsageError("--repeats must be at least 1")
    try:
        fh = open(args.out, "w", newline="") if args.out else sys.stdout
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return EXIT_USAGE
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in bench_rows(ns, backends, args.repeats, args.all_samples):
            writer.writerow(row)
            fh.flush()
    except OSError as exc:
        _err(f"write failed: {exc}")
        return EXIT_USAGE
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexrules",
        description="Lexicographic permutation sequences from transition rules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_symbols(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--n", type=int, help="number of elements (alphabet a, b, c, ...)")
        g.add_argument("--alphabet", help="symbols in ascending order, e.g. 'abcd' or 'x,y,z'")

    p = sub.add_parser("generate", help="print the permutation sequence")
    add_symbols(p)
    p.add_argument("--backend", choices=list(BACKENDS), default="scan")
    p.add_argument("--limit", type=int, help="stop after this many permutations")
    p.add_argument("--quiet", action="store_true", help="discard permutations, print only the summary")
    p.add_argument("--check", action="store_true", help="validate every step (slow)")
    p.add_argument("--force", action="store_true", help="lift the size guard")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("rules", help="print the rule table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", default="table", help="table, json or csv")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("verify", help="check the sequence against the oracles")
    add_symbols(p)
    p.add_argument("--oracle", choices=ORACLES, default="both")
    p.add_argument("--backend", choices=list(BACKENDS) + ["all"], default="all")
    p.add_argument("--force", action="store_true", help=f"allow n = {VERIFY_FORCE_MAX_N}")
    p.add_argument("--corrupt", metavar="M:I", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the backends and write CSV")
    p.add_argument("--n", default="6..9", help="size range, e.g. 6..9 or 6,8")
    p.add_argument("--backend", default="all", help="comma-separated backends or 'all'")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--all-samples", action="store_true", help="one row per repeat instead of the median")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
