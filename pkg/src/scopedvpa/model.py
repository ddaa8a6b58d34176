"""The automaton model: timed multistack visibly pushdown machines with
event-clock guards and aged stacks, plus validation and classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional

from . import guards as G
from .guards import Guard
from .intervals import FULL, Interval, interval_set
from .words import CALL, INTERNAL, RESERVED_SYMBOLS, RETURN, StackedAlphabet

Location = Hashable

DT_ECMVPA = "dt-ECMVPA"
ECMVPA = "ECMVPA"
MVPA = "MVPA"
ECVPA = "ECVPA"
VPA = "VPA"


@dataclass(frozen=True)
class CallRule:
    source: Location
    symbol: str
    guard: Guard
    target: Location
    push: str


@dataclass(frozen=True)
class ReturnRule:
    source: Location
    symbol: str
    interval: Interval
    pop: str
    guard: Guard
    target: Location


@dataclass(frozen=True)
class InternalRule:
    source: Location
    symbol: str
    guard: Guard
    target: Location


Rule = "CallRule | ReturnRule | InternalRule"


@dataclass(frozen=True)
class DtEcmvpa:
    """Locations plus per-stack call/return/internal rules.

    Call rules push one symbol (never the bottom marker) with age zero;
    return rules pop the top symbol when its age lies in the rule interval,
    except that the bottom marker is never popped; guards constrain the
    event clocks of the rule symbol's own stack.
    """

    alphabet: StackedAlphabet
    locations: frozenset
    initial: frozenset
    final: frozenset
    stack_alphabets: tuple[frozenset[str], ...]
    bottoms: tuple[str, ...]
    calls: tuple[CallRule, ...]
    returns: tuple[ReturnRule, ...]
    internals: tuple[InternalRule, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        by_symbol: dict[str, list] = {}
        by_source: dict[tuple, list] = {}
        for rule in self.calls + self.returns + self.internals:
            by_symbol.setdefault(rule.symbol, []).append(rule)
            by_source.setdefault((rule.source, rule.symbol), []).append(rule)
        self._index["symbol"] = by_symbol
        self._index["source"] = by_source

    @property
    def n(self) -> int:
        return self.alphabet.n

    def rules_for(self, symbol: str) -> list:
        return self._index["symbol"].get(symbol, [])

    def rules_from(self, source, symbol: str) -> list:
        return self._index["source"].get((source, symbol), [])

    def all_rules(self) -> tuple:
        """Canonical rule order: calls, returns, internals."""
        return self.calls + self.returns + self.internals

    def rule_index(self, rule) -> int:
        return self.all_rules().index(rule)

    def bottom(self, h: int) -> str:
        return self.bottoms[h - 1]

    def replace(self, **changes) -> "DtEcmvpa":
        from dataclasses import replace as _replace

        return _replace(self, _index={}, **changes)


@dataclass(frozen=True)
class ScopedAutomaton:
    """A machine together with the scope bound its language is cut to."""

    k: int
    inner: DtEcmvpa

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("scope bound k must be >= 1")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.code}: {self.message}"


def _err(code: str, message: str) -> Diagnostic:
    return Diagnostic("error", code, message)


def validate(a: DtEcmvpa) -> list[Diagnostic]:
    """Every violated structural invariant, with rule positions."""
    out: list[Diagnostic] = []
    if len(a.stack_alphabets) != a.n or len(a.bottoms) != a.n:
        out.append(_err("stack-count", "stack alphabets/bottoms do not match the alphabet"))
        return out
    for h in range(1, a.n + 1):
        if a.bottom(h) not in a.stack_alphabets[h - 1]:
            out.append(_err("bottom-missing", f"bottom of stack {h} not in its alphabet"))
    for sym in a.alphabet.symbols():
        if sym in RESERVED_SYMBOLS:
            out.append(_err("reserved-symbol", f"symbol {sym!r} is reserved"))
    if not a.initial <= a.locations:
        out.append(_err("unknown-location", "initial locations outside the location set"))
    if not a.final <= a.locations:
        out.append(_err("unknown-location", "final locations outside the location set"))

    def check_common(idx: int, rule, kind: str) -> Optional[int]:
        if rule.source not in a.locations or rule.target not in a.locations:
            out.append(_err("unknown-location", f"{kind} rule {idx}: endpoint not a location"))
        if rule.symbol not in a.alphabet:
            out.append(_err("unknown-symbol", f"{kind} rule {idx}: symbol {rule.symbol!r}"))
            return None
        if a.alphabet.kind_of(rule.symbol) != kind:
            out.append(_err("visibility", f"{kind} rule {idx}: {rule.symbol!r} is a "
                                          f"{a.alphabet.kind_of(rule.symbol)} symbol"))
            return None
        h = a.alphabet.stack_of(rule.symbol)
        local = a.alphabet.clocks_of_stack(h) | _extra_local_clocks(a, h)
        if not rule.guard.clocks() <= local:
            out.append(_err("guard-locality",
                            f"{kind} rule {idx}: guard mentions clocks outside stack {h}"))
        return h

    for idx, rule in enumerate(a.calls):
        h = check_common(idx, rule, CALL)
        if h is None:
            continue
        if rule.push == a.bottom(h):
            out.append(_err("bottom-pushed", f"call rule {idx} pushes the bottom marker"))
        elif rule.push not in a.stack_alphabets[h - 1]:
            out.append(_err("unknown-stack-symbol", f"call rule {idx} pushes {rule.push!r}"))
    for idx, rule in enumerate(a.returns):
        h = check_common(idx, rule, RETURN)
        if h is None:
            continue
        if rule.pop not in a.stack_alphabets[h - 1]:
            out.append(_err("unknown-stack-symbol", f"return rule {idx} pops {rule.pop!r}"))
    for idx, rule in enumerate(a.internals):
        check_common(idx, rule, INTERNAL)
    return out


def _extra_local_clocks(a: DtEcmvpa, h: int) -> frozenset:
    # separator clocks of decorated single-stack machines count as local
    if a.n == 1:
        return frozenset(
            clock for sep in RESERVED_SYMBOLS
            for clock in (G.recorder(sep), G.predictor(sep))
        )
    return frozenset()


def is_valid(a: DtEcmvpa) -> bool:
    return not any(d.severity == "error" for d in validate(a))


def is_deterministic(a: DtEcmvpa):
    """True plus None, or False plus a witness pair of clashing rules.

    Two rules clash when they read the same symbol from the same location
    (and for returns, pop the same symbol with overlapping age intervals)
    and their guards are simultaneously satisfiable.
    """
    if len(a.initial) != 1:
        return False, ("initial", tuple(sorted(map(str, a.initial))))
    groups: dict[tuple, list] = {}
    for rule in a.calls:
        groups.setdefault(("c", rule.source, rule.symbol), []).append(rule)
    for rule in a.internals:
        groups.setdefault(("l", rule.source, rule.symbol), []).append(rule)
    for rule in a.returns:
        groups.setdefault(("r", rule.source, rule.symbol, rule.pop), []).append(rule)
    for key, rules in groups.items():
        for i in range(len(rules)):
            for j in range(i + 1, len(rules)):
                r1, r2 = rules[i], rules[j]
                if key[0] == "r" and r1.interval.intersect(r2.interval) is None:
                    continue
                if G.conjunction_satisfiable(r1.guard, r2.guard):
                    return False, (r1, r2)
    return True, None


def max_constant(a: DtEcmvpa) -> int:
    """Largest constant in any guard or return interval (0 if none)."""
    cmax = 0
    for rule in a.all_rules():
        for c in rule.guard.constants():
            cmax = max(cmax, c)
    for rule in a.returns:
        cmax = max(cmax, rule.interval.low)
        if rule.interval.high is not None:
            cmax = max(cmax, rule.interval.high)
    return cmax


def classify(a: DtEcmvpa) -> str:
    timed_stack = any(not r.interval.is_full for r in a.returns)
    trivial_guards = all(r.guard.is_true for r in a.all_rules())
    if timed_stack:
        return DT_ECMVPA
    if a.n == 1:
        return VPA if trivial_guards else ECVPA
    return MVPA if trivial_guards else ECMVPA


def make_automaton(
    alphabet: StackedAlphabet,
    locations: Iterable,
    initial: Iterable,
    final: Iterable,
    stack_alphabets: Iterable[Iterable[str]] = None,
    bottoms: Iterable[str] = None,
    calls: Iterable[CallRule] = (),
    returns: Iterable[ReturnRule] = (),
    internals: Iterable[InternalRule] = (),
) -> DtEcmvpa:
    """Assemble an automaton, defaulting the stack alphabets to the pushed
    and popped symbols plus a fresh bottom marker per stack."""
    calls = tuple(calls)
    returns = tuple(returns)
    internals = tuple(internals)
    n = alphabet.n
    if bottoms is None:
        bottoms = tuple(f"_bot{h}" for h in range(1, n + 1))
    else:
        bottoms = tuple(bottoms)
    if stack_alphabets is None:
        per_stack: list[set[str]] = [set() for _ in range(n)]
        for rule in calls:
            per_stack[alphabet.stack_of(rule.symbol) - 1].add(rule.push)
        for rule in returns:
            per_stack[alphabet.stack_of(rule.symbol) - 1].add(rule.pop)
        stack_alphabets = tuple(
            frozenset(per_stack[h]) | {bottoms[h]} for h in range(n)
        )
    else:
        stack_alphabets = tuple(frozenset(s) for s in stack_alphabets)
    return DtEcmvpa(
        alphabet=alphabet,
        locations=frozenset(locations),
        initial=frozenset(initial),
        final=frozenset(final),
        stack_alphabets=stack_alphabets,
        bottoms=bottoms,
        calls=calls,
        returns=returns,
        internals=internals,
    )


__all__ = [
    "CallRule", "ReturnRule", "InternalRule", "DtEcmvpa", "ScopedAutomaton",
    "Diagnostic", "validate", "is_valid", "is_deterministic", "max_constant",
    "interval_set", "classify", "make_automaton",
    "DT_ECMVPA", "ECMVPA", "MVPA", "ECVPA", "VPA", "FULL",
]
