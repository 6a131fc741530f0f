from itertools import permutations
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from lexrules.rulegen import (
    Rule,
    RuleCoordinates,
    RuleDomainError,
    RuleTable,
    build_rule_table,
    make_rule,
    rule_entry,
    validate_rule,
)

from conftest import lex_sequence


def _oracle_diff(p, q):
    return [q.index(s) - k for k, s in enumerate(p)]


@pytest.mark.parametrize("m, i, expected", [
    (1, 1, [1, -1]),
    (3, 2, [2, 2, -2, -2]),
    (5, 1, [1, 4, 2, 0, -2, -5]),
])
def test_rule_entry_rows(m, i, expected):
    assert [rule_entry(m, i, c) for c in range(1, m + 2)] == expected


def test_rule_entry_derived_row_matches_oracle_diff():
    seq = lex_sequence(6)
    assert _oracle_diff(seq[119], seq[120]) == [1, 4, 2, 0, -2, -5]


@pytest.mark.parametrize("args", [(0, 1, 1), (2, 0, 1), (2, 3, 1), (2, 1, 0), (2, 1, 4)])
def test_rule_entry_domain(args):
    with pytest.raises(RuleDomainError):
        rule_entry(*args)


@given(st.integers(1, 12), st.data())
def test_rule_entry_is_pure(m, data):
    i = data.draw(st.integers(1, m))
    c = data.draw(st.integers(1, m + 1))
    assert rule_entry(m, i, c) == rule_entry(m, i, c)
    assert abs(rule_entry(m, i, c)) <= m


@pytest.mark.parametrize("n, m, i, expected", [
    (6, 3, 2, (0, 0, 2, 2, -2, -2)),
    (6, 2, 1, (0, 0, 0, 1, 1, -2)),
    (2, 1, 1, (1, -1)),
])
def test_make_rule(n, m, i, expected):
    rule = make_rule(n, RuleCoordinates(m, i))
    assert rule.moves == expected
    assert rule.width == m + 1


def test_make_rule_derived_example():
    seq = lex_sequence(6)
    assert _oracle_diff(seq[1], seq[2]) == [0, 0, 0, 1, 1, -2]


def test_make_rule_rejects_large_m():
    with pytest.raises(RuleDomainError):
        make_rule(4, RuleCoordinates(4, 1))


@pytest.mark.parametrize("m, i", [(0, 1), (3, 0), (3, 4)])
def test_coordinates_domain(m, i):
    with pytest.raises(RuleDomainError):
        RuleCoordinates(m, i)


def test_build_rule_table_n6():
    table = build_rule_table(6)
    assert len(table) == 15
    assert [e.base_index for e in table] == [1, 2, 4, 6, 12, 18, 24, 48, 72, 96,
                                             120, 240, 360, 480, 600]
    assert [e.step for e in table] == [2, 6, 6, 24, 24, 24, 120, 120, 120, 120,
                                       720, 720, 720, 720, 720]


def test_build_rule_table_small():
    t2 = build_rule_table(2)
    assert [(e.base_index, e.step) for e in t2] == [(1, 2)]
    assert [e.base_index for e in build_rule_table(4)] == [1, 2, 4, 6, 12, 18]
    assert len(build_rule_table(1)) == 0
    assert len(build_rule_table(0)) == 0


@pytest.mark.parametrize("n", range(2, 10))
def test_table_invariants(n):
    table = build_rule_table(n)
    assert len(table) == comb(n, 2)
    assert table.storage == n * n * (n - 1) // 2
    for e in table:
        m, i = e.coords.m, e.coords.i
        assert validate_rule(e.rule, n)
        assert sum(e.rule) == 0
        lead = n - (m + 1)
        assert e.rule.moves[:lead] == (0,) * lead
        assert e.rule.moves[lead] == i
        assert e.base_index < factorial(n)


@pytest.mark.parametrize("n", range(2, 8))
def test_rules_match_oracle_transitions(n):
    seq = lex_sequence(n)
    for e in build_rule_table(n):
        for p in e.coords.applicable_indices(n):
            assert _oracle_diff(seq[p - 1], seq[p]) == list(e.rule.moves), (n, p)


@pytest.mark.parametrize("moves, valid", [
    ([0, 0, 2, 2, -2, -2], True),
    ([0, 0, 0, 0, 0, 0], True),
    ([1, 1, -2, 0, 0, 0], True),
    ([1, 0, -1, 0, 0, 1], False),
])
def test_validate_rule(moves, valid):
    assert validate_rule(moves, 6) is valid


def test_validate_rule_length_mismatch():
    with pytest.raises(RuleDomainError):
        validate_rule([1, -1], 3)


@given(st.permutations(range(7)))
def test_validate_rule_accepts_any_bijection(target):
    moves = [t - k for k, t in enumerate(target)]
    assert validate_rule(moves, 7)
    assert Rule(moves).sources == tuple(target.index(k) for k in range(7))


def test_sources_rejects_collision():
    with pytest.raises(RuleDomainError):
        Rule([1, 0, -1, 0, 0, 1]).sources
    with pytest.raises(RuleDomainError):
        Rule([1, 0, 0]).sources


def test_json_csv_round_trip():
    table = build_rule_table(5)
    for restored in (RuleTable.from_json(table.to_json()), RuleTable.from_csv(table.to_csv())):
        assert restored.n == 5
        assert [(e.coords, e.rule) for e in restored] == [(e.coords, e.rule) for e in table]


def test_csv_columns():
    lines = build_rule_table(3).to_csv().splitlines()
    assert lines[0] == "m,i,base_index,step,count,moves"
    assert lines[1:] == ["1,1,1,2,3,0 1 -1", "2,1,2,6,1,1 1 -2", "2,2,4,6,1,2 -1 -1"]


def test_brute_force_small_rules_are_all_distinct_bijections():
    # every rule for n=4 is one of the 24 bijections on 4 positions, and no two coincide
    all_maps = {tuple(t - k for k, t in enumerate(p)) for p in permutations(range(4))}
    moves = [e.rule.moves for e in build_rule_table(4)]
    assert set(moves) <= all_maps
    assert len(set(moves)) == len(moves)
