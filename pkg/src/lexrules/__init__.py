"""Lexicographic permutation sequences generated from C(n, 2) transition rules."""
from .analysis import (
    emit_rule_report,
    expected_scan_comparisons,
    predicted_counts,
    predicted_weighted_moves,
)
from .engine import (
    Collector,
    GenerationError,
    LinePrinter,
    NullSink,
    RunStats,
    apply_rule,
    default_alphabet,
    generate_sequence,
    iter_sequence,
)
from .reference import diff_as_rule, iter_next_permutation, next_permutation, recursive_lex
from .rulegen import (
    Rule,
    RuleCoordinates,
    RuleDomainError,
    RuleEntry,
    RuleTable,
    build_rule_table,
    make_rule,
    rule_entry,
    validate_rule,
)
from .schedule import (
    BACKENDS,
    ScheduledRule,
    SchedulingError,
    advance,
    direct_coordinates,
    lookup_rule,
    make_scheduler,
)

__version__ = "0.1.0"
