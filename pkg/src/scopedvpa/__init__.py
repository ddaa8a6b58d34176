"""Scope-bounded timed multistack visibly pushdown automata.

A library for words and machines over stacked visibly pushdown alphabets
with event clocks and aged stack entries: membership, scope analysis,
determinization, Boolean operations, stack untiming, and emptiness.
"""

from .guards import Atom, ClockId, Guard, atom_guard, predictor, recorder
from .intervals import FULL, Interval, interval_set
from .model import (
    CallRule,
    DtEcmvpa,
    InternalRule,
    ReturnRule,
    ScopedAutomaton,
    classify,
    is_deterministic,
    is_valid,
    make_automaton,
    max_constant,
    validate,
)
from .semantics import Configuration, accepts, accepts_scoped, membership, membership_scoped
from .words import (
    ContextDecomposition,
    Matching,
    StackedAlphabet,
    TimedWord,
    clock_valuations,
    context_decomposition,
    is_k_scoped,
    k_scoped_splitting,
    matching_relation,
    scope_of,
)

__version__ = "0.1.0"

__all__ = [
    "Atom", "ClockId", "Guard", "atom_guard", "predictor", "recorder",
    "FULL", "Interval", "interval_set",
    "CallRule", "DtEcmvpa", "InternalRule", "ReturnRule", "ScopedAutomaton",
    "classify", "is_deterministic", "is_valid", "make_automaton",
    "max_constant", "validate",
    "Configuration", "accepts", "accepts_scoped", "membership", "membership_scoped",
    "ContextDecomposition", "Matching", "StackedAlphabet", "TimedWord",
    "clock_valuations", "context_decomposition", "is_k_scoped",
    "k_scoped_splitting", "matching_relation", "scope_of",
]
