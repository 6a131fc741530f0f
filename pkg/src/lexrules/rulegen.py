"""Transition rules for the lexicographic permutation sequence.

A rule is a length-n tuple of signed displacements: the element at position
``k`` (1-based) moves to ``k + moves[k]``.  The rules of one matrix index ``m``
form an ``m x (m+1)`` block; a rule of row ``i`` first applies at permutation
index ``m! * i`` and recurs every ``(m+1)!`` permutations.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import Iterator, Sequence

__all__ = [
    "RuleDomainError",
    "Rule",
    "RuleCoordinates",
    "RuleEntry",
    "RuleTable",
    "rule_entry",
    "make_rule",
    "build_rule_table",
    "validate_rule",
]


class RuleDomainError(ValueError):
    """Raised for out-of-range rule coordinates or malformed rules."""


@dataclass(frozen=True)
class Rule:
    moves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(int(v) for v in self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[int]:
        return iter(self.moves)

    def __getitem__(self, k):
        return self.moves[k]

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.moves)

    @property
    def width(self) -> int:
        """Number of trailing entries after the zero padding."""
        for k, v in enumerate(self.moves):
            if v:
                return len(self.moves) - k
        return 0

    @property
    def nonzero(self) -> int:
        return sum(1 for v in self.moves if v)

    @cached_property
    def sources(self) -> tuple[int, ...]:
        """0-based gather map: ``new[t] = old[sources[t]]``.

        Raises RuleDomainError when the rule is not a bijection.
        """
        n = len(self.moves)
        src = [-1] * n
        for k, v in enumerate(self.moves):
            t = k + v
            if not 0 <= t < n:
                raise RuleDomainError(
                    f"position {k + 1} moves to {t + 1}, outside 1..{n}")
            if src[t] != -1:
                raise RuleDomainError(
                    f"positions {src[t] + 1} and {k + 1} both move to {t + 1}")
            src[t] = k
        return tuple(src)


@dataclass(frozen=True, order=True)
class RuleCoordinates:
    """Matrix index ``m`` and row ``i`` (1 <= i <= m) of a rule."""

    m: int
    i: int

    def __post_init__(self):
        if self.m < 1 or not 1 <= self.i <= self.m:
            raise RuleDomainError(f"invalid rule coordinates (m={self.m}, i={self.i})")

    @property
    def base_index(self) -> int:
        return factorial(self.m) * self.i

    @property
    def step(self) -> int:
        return factorial(self.m + 1)

    def application_count(self, n: int) -> int:
        return factorial(n) // factorial(self.m + 1)

    def applicable_indices(self, n: int) -> range:
        return range(self.base_index, factorial(n), self.step)


@dataclass(frozen=True)
class RuleEntry:
    coords: RuleCoordinates
    rule: Rule

    @property
    def base_index(self) -> int:
        return self.coords.base_index

    @property
    def step(self) -> int:
        return self.coords.step


def rule_entry(m: int, i: int, c: int) -> int:
    """Displacement at row ``i``, column ``c`` (1-based) of the m x (m+1) rule matrix.

    Column 1 holds the row index.  In the remaining m x m block, the
    anti-diagonal holds ``i - (m+1)`` and every other column ``j`` holds
    ``m + 1 - 2j``.
    """
    if m < 1 or not 1 <= i <= m or not 1 <= c <= m + 1:
        raise RuleDomainError(f"rule entry (m={m}, i={i}, c={c}) out of range")
    if c == 1:
        return i
    j = c - 1
    if j == m + 1 - i:
        return i - (m + 1)
    return m + 1 - 2 * j


def make_rule(n: int, coords: RuleCoordinates) -> Rule:
    m, i = coords.m, coords.i
    if m >= n:
        raise RuleDomainError(f"matrix index m={m} requires n > {m}, got n={n}")
    tail = [rule_entry(m, i, c) for c in range(1, m + 2)]
    return Rule((0,) * (n - m - 1) + tuple(tail))


class RuleTable:
    """All C(n, 2) rules for n elements, rows of matrix 1 first.

    ``n`` of 0 or 1 gives an empty table (there are no transitions).
    """

    def __init__(self, n: int, entries: Sequence[RuleEntry]):
        self.n = n
        self.entries = tuple(entries)
        self._by_coords = {e.coords: e for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RuleEntry]:
        return iter(self.entries)

    def __getitem__(self, coords: RuleCoordinates | tuple[int, int]) -> RuleEntry:
        if not isinstance(coords, RuleCoordinates):
            coords = RuleCoordinates(*coords)
        return self._by_coords[coords]

    @property
    def storage(self) -> int:
        """Displacement entries held, zero padding included."""
        return sum(len(e.rule) for e in self.entries)

    def replace(self, coords: RuleCoordinates | tuple[int, int], rule: Rule) -> "RuleTable":
        """Copy of the table with one rule swapped out (used for fault injection)."""
        target = self[coords].coords
        return RuleTable(self.n, [
            RuleEntry(e.coords, rule) if e.coords == target else e
            for e in self.entries
        ])

    def records(self) -> list[dict]:
        return [
            {
                "m": e.coords.m,
                "i": e.coords.i,
                "base_index": e.base_index,
                "step": e.step,
                "count": e.coords.application_count(self.n),
                "moves": list(e.rule.moves),
            }
            for e in self.entries
        ]

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps({"n": self.n, "rules": self.records()}, indent=indent)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "i", "base_index", "step", "count", "moves"])
        for rec in self.records():
            writer.writerow([rec["m"], rec["i"], rec["base_index"], rec["step"],
                             rec["count"], " ".join(map(str, rec["moves"]))])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "RuleTable":
        data = json.loads(text)
        return cls(data["n"], [
            RuleEntry(RuleCoordinates(r["m"], r["i"]), Rule(r["moves"]))
            for r in data["rules"]
        ])

    @classmethod
    def from_csv(cls, text: str, n: int | None = None) -> "RuleTable":
        entries = [
            RuleEntry(RuleCoordinates(int(r["m"]), int(r["i"])),
                      Rule(int(v) for v in r["moves"].split()))
            for r in csv.DictReader(io.StringIO(text))
        ]
        if n is None:
            n = len(entries[0].rule) if entries else 0
        return cls(n, entries)


def build_rule_table(n: int) -> RuleTable:
    entries = []
    for m in range(1, n):
        for i in range(1, m + 1):
            coords = RuleCoordinates(m, i)
            entries.append(RuleEntry(coords, make_rule(n, coords)))
    return RuleTable(max(n, 0), entries)


def validate_rule(rule: Rule | Sequence[int], n: int) -> bool:
    """True iff ``k -> k + rule[k]`` is a bijection on 1..n."""
    moves = tuple(rule)
    if len(moves) != n:
        raise RuleDomainError(f"rule has length {len(moves)}, expected {n}")
    return sorted(k + v for k, v in enumerate(moves)) == list(range(n))
