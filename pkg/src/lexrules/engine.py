"""Generate the full lexicographic sequence by applying scheduled rules."""
from __future__ import annotations

import sys
from dataclasses import dataclass, fields
from math import factorial
from typing import Callable, Hashable, Iterator, Sequence, TextIO

from .rulegen import Rule, RuleDomainError, RuleTable, build_rule_table
from .schedule import Scheduler, SchedulingError, make_scheduler

__all__ = [
    "GenerationError",
    "RunStats",
    "apply_rule",
    "default_alphabet",
    "check_permutee",
    "iter_sequence",
    "generate_sequence",
    "LinePrinter",
    "NullSink",
    "Collector",
]

Permutation = tuple


class GenerationError(RuntimeError):
    """A run aborted at permutation index ``p``."""

    def __init__(self, message: str, p: int):
        super().__init__(f"index {p}: {message}")
        self.p = p


@dataclass
class RunStats:
    applications: int = 0
    weighted_moves: int = 0
    nonzero_moves: int = 0
    comparisons: int = 0
    peak_rule_storage: int = 0
    rule_counts: dict | None = None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "rule_counts"}


def default_alphabet(n: int) -> tuple[str, ...]:
    if n > 26:
        raise ValueError("default alphabet covers n <= 26; pass explicit symbols")
    return tuple("abcdefghijklmnopqrstuvwxyz"[:n])


def check_permutee(symbols: Sequence[Hashable]) -> tuple:
    perm = tuple(symbols)
    if len(set(perm)) != len(perm):
        raise ValueError(f"duplicate symbols in {' '.join(map(str, perm))}")
    return perm


def apply_rule(perm: Sequence, rule: Rule | Sequence[int]) -> tuple:
    """Move the element at position k to position k + rule[k]."""
    if not isinstance(rule, Rule):
        rule = Rule(rule)
    if len(perm) != len(rule):
        raise RuleDomainError(f"rule length {len(rule)} does not match permutation length {len(perm)}")
    return tuple(perm[s] for s in rule.sources)


def iter_sequence(
    permutee: Sequence,
    backend: str | Scheduler = "scan",
    *,
    table: RuleTable | None = None,
    stats: RunStats | None = None,
    check: bool = False,
    count_rules: bool = False,
) -> Iterator[tuple]:
    """Yield P_1 .. P_{n!} starting from ``permutee``.

    The order of symbols in ``permutee`` defines the lexicographic order.
    With ``check`` each step is validated (same symbols, strictly increasing).
    With ``count_rules`` the stats record how often each rule fired.
    """
    perm = check_permutee(permutee)
    n = len(perm)
    if isinstance(backend, Scheduler):
        scheduler = backend
    else:
        scheduler = make_scheduler(backend, table if table is not None else build_rule_table(n))
    if scheduler.n != n:
        raise ValueError(f"rule table is for n={scheduler.n}, permutee has {n} symbols")
    if stats is None:
        stats = RunStats()
    stats.peak_rule_storage = max(stats.peak_rule_storage, scheduler.table.storage)
    rank = {s: k for k, s in enumerate(perm)} if check else None
    if count_rules:
        stats.rule_counts = {}
    tally = stats.rule_counts if count_rules else None

    yield perm
    last = factorial(n) if n else 0
    for p in range(1, last):
        prev = perm
        try:
            rule = scheduler.lookup(p)
            src = rule.sources
        except (SchedulingError, RuleDomainError) as exc:
            stats.comparisons = scheduler.comparisons
            raise GenerationError(str(exc), p) from exc
        if len(src) != n:
            raise GenerationError(f"rule of length {len(src)} for {n} symbols", p)
        w = rule.width
        # only the trailing ``w`` positions change
        head = n - w
        perm = perm[:head] + tuple([perm[s] for s in src[head:]])
        stats.applications += 1
        stats.weighted_moves += w
        stats.nonzero_moves += rule.nonzero
        stats.comparisons = scheduler.comparisons
        if tally is not None:
            tally[rule] = tally.get(rule, 0) + 1
        if check:
            if sorted(map(rank.__getitem__, perm)) != list(range(n)):
                raise GenerationError("symbols not preserved", p)
            if [rank[s] for s in perm] <= [rank[s] for s in prev]:
                raise GenerationError("sequence not strictly increasing", p)
        yield perm


def generate_sequence(
    permutee: Sequence,
    backend: str | Scheduler = "scan",
    sink: Callable[[tuple], object] | None = None,
    *,
    table: RuleTable | None = None,
    limit: int | None = None,
    check: bool = False,
    count_rules: bool = False,
) -> RunStats:
    """Stream the full sequence into ``sink`` and return the run counters.

    ``limit`` stops after that many emissions (the counters then cover only
    the transitions performed).
    """
    stats = RunStats()
    if sink is None:
        sink = NullSink()
    if limit is not None and limit <= 0:
        return stats
    for count, perm in enumerate(
            iter_sequence(permutee, backend, table=table, stats=stats,
                          check=check, count_rules=count_rules), start=1):
        sink(perm)
        if limit is not None and count >= limit:
            break
    return stats


class LinePrinter:
    """Writes space-separated symbols, one permutation per line."""

    def __init__(self, stream: TextIO | None = None):
        self.stream = stream if stream is not None else sys.stdout

    def __call__(self, perm):
        self.stream.write(" ".join(map(str, perm)) + "\n")


class NullSink:
    def __init__(self):
        self.count = 0

    def __call__(self, perm):
        self.count += 1


class Collector(list):
    def __call__(self, perm):
        self.append(perm)
