"""Independent oracles for the rule-based generator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .engine import check_permutee
from .rulegen import Rule, RuleDomainError

__all__ = [
    "RECURSIVE_MAX_N",
    "next_permutation",
    "iter_next_permutation",
    "RecursiveLex",
    "recursive_lex",
    "diff_as_rule",
]

RECURSIVE_MAX_N = 9


def next_permutation(perm: Sequence, key: Callable | None = None) -> tuple | None:
    """Lexicographic successor of ``perm``, or None if it is the last one."""
    a = list(check_permutee(perm))
    ranks = [key(s) for s in a] if key is not None else a
    i = len(a) - 2
    while i >= 0 and not ranks[i] < ranks[i + 1]:
        i -= 1
    if i < 0:
        return None
    j = len(a) - 1
    while not ranks[i] < ranks[j]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = reversed(a[i + 1:])
    return tuple(a)


def iter_next_permutation(start: Sequence, key: Callable | None = None) -> Iterator[tuple]:
    perm = check_permutee(start)
    while perm is not None:
        yield perm
        perm = next_permutation(perm, key)


@dataclass
class RecursiveLex:
    sequence: list
    concatenations: int  # element copies made while concatenating
    prepends: int
    peak_storage: int  # elements held at once

    def __iter__(self):
        return iter(self.sequence)

    def __len__(self):
        return len(self.sequence)


class _Tally:
    def __init__(self):
        self.concatenations = 0
        self.prepends = 0
        self.live = 0
        self.peak = 0

    def alloc(self, elements):
        self.live += elements
        self.peak = max(self.peak, self.live)

    def free(self, elements):
        self.live -= elements


def _build(symbols: tuple, tally: _Tally) -> list:
    k = len(symbols)
    if k <= 1:
        tally.alloc(k)
        return [symbols]
    blocks = []
    for i, head in enumerate(symbols):
        # row i of the k x k matrix with its diagonal element removed
        sub = _build(symbols[:i] + symbols[i + 1:], tally)
        block = []
        for tail in sub:
            block.append((head,) + tail)
            tally.prepends += 1
            tally.concatenations += k
            tally.alloc(k)
        tally.free((k - 1) * len(sub))
        blocks.append(block)
    out = [perm for block in blocks for perm in block]
    copied = k * len(out)
    tally.concatenations += copied
    tally.alloc(copied)
    tally.free(copied)
    return out


def recursive_lex(permutee: Sequence) -> RecursiveLex:
    """Build the whole sequence by prepending each symbol to the permutations of the rest.

    Everything is materialized, so this is capped at ``RECURSIVE_MAX_N`` symbols.
    The counters model flat element storage: prepending to a length k-1
    permutation copies k elements, and joining the k blocks copies every
    element of the k! results once more.
    """
    perm = check_permutee(permutee)
    if len(perm) > RECURSIVE_MAX_N:
        raise ValueError(f"recursive construction is limited to n <= {RECURSIVE_MAX_N}")
    tally = _Tally()
    seq = _build(perm, tally)
    return RecursiveLex(seq, tally.concatenations, tally.prepends, tally.peak)


def diff_as_rule(p: Sequence, q: Sequence) -> Rule:
    """The rule carrying ``p`` to ``q``: element ``p[k]`` moves to its position in ``q``."""
    p, q = check_permutee(p), check_permutee(q)
    where = {s: k for k, s in enumerate(q)}
    if len(p) != len(q) or set(where) != set(p):
        raise RuleDomainError("permutations are over different symbols")
    return Rule(where[s] - k for k, s in enumerate(p))
