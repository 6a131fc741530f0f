"""Closed-form counter predictions and the rule report."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .rulegen import RuleCoordinates, build_rule_table

__all__ = [
    "REPORT_FORMATS",
    "RuleCount",
    "CountPrediction",
    "ScanCost",
    "predicted_weighted_moves",
    "predicted_counts",
    "expected_scan_comparisons",
    "emit_rule_report",
]

REPORT_FORMATS = ("table", "json", "csv")
TABLE_MAX_N = 12

# Known misprints in the widely circulated n = 6 rule listing.
_N6_CORRECTIONS = {
    (3, 1): "last index is 6 + 29*24 = 702 (misprinted as 704)",
    (3, 2): "last index is 12 + 29*24 = 708 (misprinted as 710)",
    (4, 1): "step is 5! = 120 (misprinted as 24)",
}


@dataclass(frozen=True)
class RuleCount:
    m: int
    i: int
    base_index: int
    step: int
    count: int


@dataclass(frozen=True)
class CountPrediction:
    rows: tuple[RuleCount, ...]
    rules: int
    applications: int


@dataclass(frozen=True)
class ScanCost:
    total: int
    average: Fraction
    bound: Fraction


def predicted_weighted_moves(n: int) -> int:
    """Sum of n!/k! for k = 0..n-2: each matrix-m rule touches m+1 positions
    and fires n!/(m+1)! times."""
    if n < 2:
        return 0
    f = factorial(n)
    return sum(f // factorial(k) for k in range(n - 1))


def predicted_counts(n: int) -> CountPrediction:
    rows = []
    for m in range(1, n):
        for i in range(1, m + 1):
            c = RuleCoordinates(m, i)
            rows.append(RuleCount(m, i, c.base_index, c.step, c.application_count(n)))
    return CountPrediction(tuple(rows), comb(n, 2) if n >= 2 else 0,
                           max(factorial(max(n, 0)) - 1, 0))


def expected_scan_comparisons(n: int) -> ScanCost:
    """Comparisons made by the linear-search backend over a full run.

    The rule at list position k costs k comparisons each time it is found.
    ``bound`` is the C(n,2)/2 average search cost, reported alongside.
    """
    pred = predicted_counts(n)
    total = sum(pos * row.count for pos, row in enumerate(pred.rows, start=1))
    average = Fraction(total, pred.applications) if pred.applications else Fraction(0)
    return ScanCost(total, average, Fraction(comb(n, 2), 2) if n >= 2 else Fraction(0))


def _index_summary(coords: RuleCoordinates, n: int) -> tuple[list[int], int]:
    idx = coords.applicable_indices(n)
    return list(idx[:4]), idx[-1]


def _format_indices(coords: RuleCoordinates, n: int) -> str:
    idx = coords.applicable_indices(n)
    if len(idx) <= 6:
        return "{" + ", ".join(map(str, idx)) + "}"
    return "{" + ", ".join(map(str, idx[:4])) + f", ..., {idx[-1]}" + "}"


def emit_rule_report(n: int, fmt: str = "table") -> str:
    """Render one row per rule: base index, moves, step, applicable indices, count."""
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"unsupported format {fmt!r}; choose from {', '.join(REPORT_FORMATS)}")
    table = build_rule_table(n)
    notes = _N6_CORRECTIONS if n == 6 else {}

    if fmt == "csv":
        return table.to_csv()

    if fmt == "json":
        records = table.records()
        for rec, entry in zip(records, table):
            first, last = _index_summary(entry.coords, n)
            rec["first_indices"] = first
            rec["last_index"] = last
            note = notes.get((entry.coords.m, entry.coords.i))
            if note:
                rec["note"] = note
        return json.dumps({"n": n, "rules": records}, indent=2)

    if n > TABLE_MAX_N:
        raise ValueError(f"table format is limited to n <= {TABLE_MAX_N}")
    rows = []
    marks = {}
    for entry in table:
        key = (entry.coords.m, entry.coords.i)
        mark = ""
        if key in notes:
            marks[key] = len(marks) + 1
            mark = f" [{marks[key]}]"
        moves = " ".join(f"{v:>2}" for v in entry.rule)
        rows.append((f"R_{entry.base_index}", moves, str(entry.step),
                     _format_indices(entry.coords, n) + mark,
                     str(entry.coords.application_count(n))))
    header = ("rule", "moves", "step", "applies at", "count")
    widths = [max(len(r[c]) for r in rows + [header]) for c in range(5)]
    align = ["<", "<", ">", "<", ">"]
    lines = ["  ".join(f"{cell:{a}{w}}" for cell, a, w in zip(r, align, widths)).rstrip()
             for r in [header] + rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for key, k in marks.items():
        lines.append(f"[{k}] R_{RuleCoordinates(*key).base_index}: {notes[key]}")
    return "\n".join(lines) + "\n"
