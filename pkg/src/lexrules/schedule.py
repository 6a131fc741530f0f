"""Rule scheduling: which rule carries permutation ``p`` to ``p + 1``.

Three interchangeable backends answer the same query:

* ``scan``   -- a list of rule objects in table order, searched linearly for
  the one whose next index equals ``p``; the hit is then advanced by its step.
* ``queue``  -- the same rule objects kept in a min-heap on next index.
* ``direct`` -- no state; the rule coordinates are computed from ``p``.

The stateful backends require queries ``p = 1, 2, ..., n! - 1`` in order.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import factorial

from .rulegen import Rule, RuleCoordinates, RuleDomainError, RuleTable, build_rule_table

__all__ = [
    "SchedulingError",
    "ScheduledRule",
    "Scheduler",
    "ScanScheduler",
    "QueueScheduler",
    "DirectScheduler",
    "BACKENDS",
    "make_scheduler",
    "lookup_rule",
    "direct_coordinates",
    "advance",
]


class SchedulingError(RuntimeError):
    """No rule (or more than one) claims a permutation index, or queries arrived out of order."""

    def __init__(self, message: str, p: int | None = None):
        super().__init__(message)
        self.p = p


@dataclass
class ScheduledRule:
    next_index: int
    step: int
    rule: Rule
    list_position: int
    coords: RuleCoordinates | None = None


def advance(scheduled: ScheduledRule) -> ScheduledRule:
    scheduled.next_index += scheduled.step
    return scheduled


def direct_coordinates(n: int, p: int) -> RuleCoordinates:
    """Coordinates of the rule applied at index ``p``.

    ``m`` is the largest integer with ``m!`` dividing ``p`` and
    ``i = (p / m!) mod (m + 1)``.
    """
    if not 1 <= p < factorial(n):
        raise RuleDomainError(f"permutation index {p} outside 1..{factorial(n) - 1}")
    m, q = 1, p
    # q == p / m! throughout
    while q % (m + 1) == 0:
        q //= m + 1
        m += 1
    return RuleCoordinates(m, q % (m + 1))


def _scheduled_rules(table: RuleTable) -> list[ScheduledRule]:
    return [
        ScheduledRule(e.base_index, e.step, e.rule, pos, e.coords)
        for pos, e in enumerate(table.entries, start=1)
    ]


class Scheduler:
    name = ""
    stateful = True

    def __init__(self, table: RuleTable):
        self.table = table
        self.n = table.n
        self.comparisons = 0
        self.last_comparisons = 0
        self._expected = 1

    def lookup(self, p: int) -> Rule:
        if self.stateful:
            if p != self._expected:
                raise SchedulingError(
                    f"{self.name} backend expected index {self._expected}, got {p}", p)
            self._expected += 1
        return self._lookup(p)

    def _lookup(self, p: int) -> Rule:
        raise NotImplementedError


class ScanScheduler(Scheduler):
    """Linear search over rule objects in table order."""

    name = "scan"

    def __init__(self, table: RuleTable):
        super().__init__(table)
        self.rules = _scheduled_rules(table)

    def _lookup(self, p: int) -> Rule:
        for count, obj in enumerate(self.rules, start=1):
            if obj.next_index == p:
                self.last_comparisons = count
                self.comparisons += count
                advance(obj)
                return obj.rule
        self.comparisons += len(self.rules)
        raise SchedulingError(f"no rule scheduled for index {p}", p)


class QueueScheduler(Scheduler):
    name = "queue"

    def __init__(self, table: RuleTable):
        super().__init__(table)
        # list_position breaks ties so ScheduledRule is never compared
        self.heap = [(obj.next_index, obj.list_position, obj) for obj in _scheduled_rules(table)]
        heapq.heapify(self.heap)

    def _lookup(self, p: int) -> Rule:
        if not self.heap or self.heap[0][0] != p:
            raise SchedulingError(f"no rule scheduled for index {p}", p)
        _, pos, obj = heapq.heappop(self.heap)
        if self.heap and self.heap[0][0] == p:
            raise SchedulingError(f"two rules scheduled for index {p}", p)
        advance(obj)
        heapq.heappush(self.heap, (obj.next_index, pos, obj))
        return obj.rule


class DirectScheduler(Scheduler):
    name = "direct"
    stateful = False

    def _lookup(self, p: int) -> Rule:
        try:
            coords = direct_coordinates(self.n, p)
            return self.table[coords].rule
        except (RuleDomainError, KeyError) as exc:
            raise SchedulingError(f"no rule for index {p}: {exc}", p) from exc


BACKENDS = {cls.name: cls for cls in (ScanScheduler, QueueScheduler, DirectScheduler)}


def make_scheduler(backend: str, table: RuleTable | int) -> Scheduler:
    if isinstance(table, int):
        table = build_rule_table(table)
    try:
        cls = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}") from None
    return cls(table)


def lookup_rule(scheduler: Scheduler, p: int) -> Rule:
    return scheduler.lookup(p)
