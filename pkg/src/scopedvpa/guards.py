"""Event-clock guards: disjunctions of conjunctions of atomic bounds.

Clocks are input-determined: a recorder ``x_a`` holds the time since the
last ``a`` and a predictor ``y_a`` the time until the next ``a``; either
may be undefined at a position.  An atomic bound on an undefined clock is
false.  The ``undef`` atom (satisfied exactly when the clock is undefined)
exists so that machine-generated guards can partition the valuation space;
hand-written machines normally omit a clock instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .intervals import Interval

RECORDER = "x"
PREDICTOR = "y"

_OPS = ("<", "<=", "=", ">=", ">", "undef")


@dataclass(frozen=True, order=True)
class ClockId:
    kind: str  # RECORDER or PREDICTOR
    symbol: str

    def __post_init__(self) -> None:
        if self.kind not in (RECORDER, PREDICTOR):
            raise ValueError(f"bad clock kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}_{self.symbol}"

    @staticmethod
    def parse(text: str) -> "ClockId":
        if len(text) < 3 or text[1] != "_" or text[0] not in (RECORDER, PREDICTOR):
            raise ValueError(f"malformed clock id {text!r}")
        return ClockId(text[0], text[2:])


def recorder(symbol: str) -> ClockId:
    return ClockId(RECORDER, symbol)


def predictor(symbol: str) -> ClockId:
    return ClockId(PREDICTOR, symbol)


@dataclass(frozen=True, order=True)
class Atom:
    """One atomic constraint ``clock op bound`` (bound ignored for undef)."""

    clock: ClockId
    op: str
    bound: int = 0

    def __post_init__(self) -> None:
        if self.op not in _OPS:
            raise ValueError(f"bad comparator {self.op!r}")
        if self.bound < 0:
            raise ValueError("guard constants are nonnegative integers")

    def holds(self, value: Optional[Fraction]) -> bool:
        if self.op == "undef":
            return value is None
        if value is None:
            return False
        if self.op == "<":
            return value < self.bound
        if self.op == "<=":
            return value <= self.bound
        if self.op == "=":
            return value == self.bound
        if self.op == ">=":
            return value >= self.bound
        return value > self.bound

    def __str__(self) -> str:
        if self.op == "undef":
            return f"undef({self.clock})"
        return f"{self.clock}{self.op}{self.bound}"


# A valuation maps clocks to values; a missing key means undefined.
Valuation = Mapping[ClockId, Fraction]


@dataclass(frozen=True)
class Guard:
    """Disjunctive normal form; () is false, ((),) is true."""

    terms: tuple[tuple[Atom, ...], ...] = ((),)

    def holds(self, valuation: Valuation) -> bool:
        return any(
            all(atom.holds(valuation.get(atom.clock)) for atom in term)
            for term in self.terms
        )

    @property
    def is_true(self) -> bool:
        return any(len(term) == 0 for term in self.terms)

    def clocks(self) -> frozenset[ClockId]:
        return frozenset(atom.clock for term in self.terms for atom in term)

    def constants(self) -> frozenset[int]:
        return frozenset(
            atom.bound for term in self.terms for atom in term if atom.op != "undef"
        )

    def conjoin(self, other: "Guard") -> "Guard":
        terms = tuple(
            tuple(dict.fromkeys(a + b)) for a in self.terms for b in other.terms
        )
        return Guard(terms)

    def disjoin(self, other: "Guard") -> "Guard":
        return Guard(tuple(dict.fromkeys(self.terms + other.terms)))

    def __str__(self) -> str:
        if self.is_true:
            return "true"
        if not self.terms:
            return "false"
        parts = []
        for term in self.terms:
            parts.append(" & ".join(str(a) for a in term))
        return " | ".join(parts)


TRUE = Guard()
FALSE = Guard(())


def atom_guard(clock: ClockId, op: str, bound: int = 0) -> Guard:
    return Guard(((Atom(clock, op, bound),),))


def conjunction(atoms: Iterable[Atom]) -> Guard:
    return Guard((tuple(atoms),))


# ---------------------------------------------------------------------------
# Satisfiability.  Clocks are independent of each other, so a conjunction is
# satisfiable iff every clock's allowed value set is nonempty, where the
# allowed set lives in Q>=0 plus the "undefined" pseudo-value.
# ---------------------------------------------------------------------------


@dataclass
class _ValueSet:
    # numeric part [low, high] with strictness, plus undefined allowed or not
    low: Fraction
    low_strict: bool
    high: Optional[Fraction]
    high_strict: bool
    numeric_empty: bool
    undefined_ok: bool

    @staticmethod
    def everything() -> "_ValueSet":
        return _ValueSet(Fraction(0), False, None, False, False, True)

    def restrict(self, atom: Atom) -> None:
        if atom.op == "undef":
            self.numeric_empty = True
            return
        self.undefined_ok = False
        b = Fraction(atom.bound)
        if atom.op == "<":
            self._upper(b, True)
        elif atom.op == "<=":
            self._upper(b, False)
        elif atom.op == "=":
            self._upper(b, False)
            self._lower(b, False)
        elif atom.op == ">=":
            self._lower(b, False)
        else:
            self._lower(b, True)

    def _upper(self, b: Fraction, strict: bool) -> None:
        # at an equal bound, a strict upper constraint is the tighter one
        if self.high is None or (b, not strict) < (self.high, not self.high_strict):
            self.high, self.high_strict = b, strict

    def _lower(self, b: Fraction, strict: bool) -> None:
        # at an equal bound, a strict lower constraint is the tighter one
        if (b, strict) > (self.low, self.low_strict):
            self.low, self.low_strict = b, strict

    def nonempty(self) -> bool:
        if self.undefined_ok:
            return True
        if self.numeric_empty:
            return False
        if self.high is None:
            return True
        if self.low > self.high:
            return False
        if self.low == self.high and (self.low_strict or self.high_strict):
            return False
        return True


def term_satisfiable(term: Iterable[Atom]) -> bool:
    sets: dict[ClockId, _ValueSet] = {}
    for atom in term:
        vs = sets.setdefault(atom.clock, _ValueSet.everything())
        vs.restrict(atom)
    return all(vs.nonempty() for vs in sets.values())


def satisfiable(guard: Guard) -> bool:
    return any(term_satisfiable(term) for term in guard.terms)


def conjunction_satisfiable(g1: Guard, g2: Guard) -> bool:
    """Whether some valuation satisfies both guards."""
    return satisfiable(g1.conjoin(g2))


# ---------------------------------------------------------------------------
# Region atoms: total class assignments over a fixed clock set.  Each class
# comes from interval_set(cmax) plus the undefined class (None).  Distinct
# atoms are mutually unsatisfiable and every guard over those clocks is a
# union of atoms, which is what guard-splitting before determinization needs.
# ---------------------------------------------------------------------------


def class_satisfies(cls: Optional[Interval], atom: Atom) -> bool:
    """Whether every valuation in the class satisfies the atomic bound.

    Classes are at least as fine as any bound with the same cmax, so a class
    either wholly satisfies or wholly refutes an atom.
    """
    if atom.op == "undef":
        return cls is None
    if cls is None:
        return False
    b = atom.bound
    if atom.op == "<":
        return cls.high is not None and (cls.high < b or (cls.high == b and cls.high_strict))
    if atom.op == "<=":
        return cls.high is not None and cls.high <= b
    if atom.op == "=":
        return cls.low == b and cls.high == b
    if atom.op == ">=":
        return cls.low > b or (cls.low == b and not cls.low_strict)
    return cls.low >= b


def class_map_satisfies(cls_map: Mapping[ClockId, Optional[Interval]], guard: Guard) -> bool:
    return any(
        all(class_satisfies(cls_map[atom.clock], atom) for atom in term)
        for term in guard.terms
    )


def class_guard(cls_map: Mapping[ClockId, Optional[Interval]]) -> Guard:
    """The guard holding exactly on valuations matching the class map."""
    atoms: list[Atom] = []
    for clock in sorted(cls_map):
        cls = cls_map[clock]
        if cls is None:
            atoms.append(Atom(clock, "undef"))
            continue
        if cls.high is not None and cls.low == cls.high:
            atoms.append(Atom(clock, "=", cls.low))
            continue
        atoms.append(Atom(clock, ">" if cls.low_strict else ">=", cls.low))
        if cls.high is not None:
            atoms.append(Atom(clock, "<" if cls.high_strict else "<=", cls.high))
    return conjunction(atoms)
