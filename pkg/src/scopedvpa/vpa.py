"""Single-stack machinery: subset/summary determinization, emptiness by
saturation, and the guard-into-alphabet round trip that reduces event-clock
machines to plain ones.

Determinized locations are (S, R) pairs: R is the set of control states
reachable on the input so far, and S is the summary relating states at the
last unmatched call to states now, which is what lets a pop stitch the
segment below the matching push back together.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from . import guards as G
from .guards import Guard
from .intervals import FULL, Interval, interval_set
from .model import (
    VPA,
    CallRule,
    DtEcmvpa,
    InternalRule,
    ReturnRule,
    classify,
    make_automaton,
    max_constant,
)
from .words import CALL, INTERNAL, RETURN, StackedAlphabet


@dataclass(frozen=True)
class SummaryState:
    """A determinized location: summary pairs S plus reachable set R."""

    pairs: frozenset
    reachable: frozenset

    @staticmethod
    def of(pairs: Iterable, reachable: Iterable) -> "SummaryState":
        return SummaryState(frozenset(pairs), frozenset(reachable))


@dataclass(frozen=True)
class AnnotatedSymbol:
    """A symbol carrying the guard (and, for returns, the age interval) of
    the rule that read it, so an untimed machine can see the timing choice."""

    base: str
    guard: Guard
    interval: Optional[Interval] = None

    def __str__(self) -> str:
        parts = [self.base, str(self.guard)]
        if self.interval is not None:
            parts.append(str(self.interval))
        return "⟨" + "; ".join(parts) + "⟩"


def _single_stack(v: DtEcmvpa, op: str) -> None:
    if v.n != 1:
        raise ValueError(f"{op} requires a single-stack machine")


DET_BOTTOM = ("detbot",)


def vpa_determinize(v: DtEcmvpa) -> DtEcmvpa:
    """Subset construction with summaries for an untimed single-stack VPA.

    Internal symbols advance S and R through the rule relation; a call
    pushes (S, R, symbol) and restarts S at the identity; a return pops and
    stitches: the new S pairs q with q' when the pushed summary carries q to
    the call, the current summary crosses the matched segment, and a pop
    rule lands on q'.  Unmatched returns (on the bare stack) advance like
    internal symbols through the bottom-pop rules.
    """
    _single_stack(v, "vpa_determinize")
    if classify(v) != VPA:
        raise ValueError("vpa_determinize requires trivial guards and intervals")
    alph = v.alphabet
    bottom = v.bottom(1)
    identity = frozenset((q, q) for q in v.locations)

    calls_from: dict[tuple, list[CallRule]] = {}
    for r in v.calls:
        calls_from.setdefault((r.source, r.symbol), []).append(r)
    rets: dict[str, list[ReturnRule]] = {}
    for r in v.returns:
        rets.setdefault(r.symbol, []).append(r)
    ints: dict[str, list[InternalRule]] = {}
    for r in v.internals:
        ints.setdefault(r.symbol, []).append(r)

    start = SummaryState.of(identity, v.initial)

    def internal_image(st: SummaryState, sym: str) -> SummaryState:
        rules = ints.get(sym, [])
        return SummaryState(
            frozenset((q, r.target) for (q, q2) in st.pairs for r in rules if r.source == q2),
            frozenset(r.target for q in st.reachable for r in rules if r.source == q),
        )

    def bottom_image(st: SummaryState, sym: str) -> SummaryState:
        rules = [r for r in rets.get(sym, []) if r.pop == bottom]
        return SummaryState(
            frozenset((q, r.target) for (q, q2) in st.pairs for r in rules if r.source == q2),
            frozenset(r.target for q in st.reachable for r in rules if r.source == q),
        )

    def call_image(st: SummaryState, sym: str) -> SummaryState:
        reach = frozenset(r.target for q in st.reachable
                          for r in calls_from.get((q, sym), []))
        return SummaryState(identity, reach)

    rets_from: dict[tuple, list[ReturnRule]] = {}
    for r in v.returns:
        rets_from.setdefault((r.source, r.symbol), []).append(r)

    def return_image(st: SummaryState, push, sym: str) -> SummaryState:
        pushed_state, call_sym = push
        segment_from: dict = {}
        for (p1, p2) in st.pairs:
            segment_from.setdefault(p1, []).append(p2)

        land_cache: dict = {}

        def land(q2) -> frozenset:
            hit = land_cache.get(q2)
            if hit is not None:
                return hit
            targets = set()
            for cr in calls_from.get((q2, call_sym), []):
                for p2 in segment_from.get(cr.target, ()):
                    for rr in rets_from.get((p2, sym), ()):
                        if rr.pop == cr.push:
                            targets.add(rr.target)
            out = frozenset(targets)
            land_cache[q2] = out
            return out

        pairs = frozenset((q, t) for (q, q2) in pushed_state.pairs for t in land(q2))
        reach = frozenset(t for q in pushed_state.reachable for t in land(q))
        return SummaryState(pairs, reach)

    states: set[SummaryState] = {start}
    stack_syms: set = set()
    rules_by_key: dict = {}
    symbols = sorted(alph.symbols())
    return_symbols = [s for s in symbols if alph.kind_of(s) == RETURN]
    state_queue: list[SummaryState] = [start]
    pair_queue: list[tuple] = []
    paired: set = set()

    def note_state(st: SummaryState) -> None:
        if st not in states:
            states.add(st)
            state_queue.append(st)

    def note_push(push) -> None:
        if push not in stack_syms:
            stack_syms.add(push)
            for st in states:
                if (st, push) not in paired:
                    paired.add((st, push))
                    pair_queue.append((st, push))

    def emit(key, rule, target) -> None:
        if key not in rules_by_key:
            rules_by_key[key] = rule
            note_state(target)

    while state_queue or pair_queue:
        if state_queue:
            st = state_queue.pop()
            for sym in symbols:
                kind = alph.kind_of(sym)
                if kind == INTERNAL:
                    nxt = internal_image(st, sym)
                    if nxt.reachable:
                        emit(("l", st, sym), InternalRule(st, sym, G.TRUE, nxt), nxt)
                elif kind == CALL:
                    nxt = call_image(st, sym)
                    if nxt.reachable:
                        push = (st, sym)
                        emit(("c", st, sym), CallRule(st, sym, G.TRUE, nxt, push), nxt)
                        note_push(push)
                else:
                    nxt = bottom_image(st, sym)
                    if nxt.reachable:
                        emit(("rb", st, sym),
                             ReturnRule(st, sym, FULL, DET_BOTTOM, G.TRUE, nxt), nxt)
            for push in list(stack_syms):
                if (st, push) not in paired:
                    paired.add((st, push))
                    pair_queue.append((st, push))
        else:
            st, push = pair_queue.pop()
            for sym in return_symbols:
                nxt = return_image(st, push, sym)
                if nxt.reachable:
                    emit(("r", st, push, sym),
                         ReturnRule(st, sym, FULL, push, G.TRUE, nxt), nxt)

    rules = list(rules_by_key.values())
    finals = frozenset(st for st in states if st.reachable & v.final)
    return make_automaton(
        alph, states, [start], finals,
        stack_alphabets=[frozenset(stack_syms) | {DET_BOTTOM}],
        bottoms=[DET_BOTTOM],
        calls=[r for r in rules if isinstance(r, CallRule)],
        returns=[r for r in rules if isinstance(r, ReturnRule)],
        internals=[r for r in rules if isinstance(r, InternalRule)],
    )


# ------------------------------------------------------------- emptiness


@dataclass(frozen=True)
class EmptinessResult:
    empty: bool
    witness: Optional[tuple[str, ...]]  # a shortest accepted symbol sequence
    bound: Optional[int]  # length of the minimal witness when nonempty


def vpa_emptiness(v: DtEcmvpa) -> EmptinessResult:
    """Summary saturation with minimal-length bookkeeping.

    Well-nested summaries never cross a bare-stack pop (the stack is held
    up by the enclosing call), so bare pops only appear on the empty-stack
    spine of a run: word = empty-level part, then unmatched calls each
    followed by a well-nested part.  Witnesses rebuild from derivations.
    """
    _single_stack(v, "vpa_emptiness")
    if classify(v) != VPA:
        raise ValueError("vpa_emptiness requires trivial guards and intervals")
    bottom = v.bottom(1)
    INF = 1 << 60

    # wn[(q, q2)] = (length, derivation) for strictly well-nested segments
    wn: dict[tuple, tuple[int, tuple]] = {(q, q): (0, ("eps",)) for q in v.locations}

    def better(table, key, length, deriv) -> bool:
        cur = table.get(key)
        if cur is None or length < cur[0]:
            table[key] = (length, deriv)
            return True
        return False

    changed = True
    while changed:
        changed = False
        for (q, q2), (n1, _) in list(wn.items()):
            for r in v.internals:
                if r.source == q2:
                    changed |= better(wn, (q, r.target), n1 + 1,
                                      ("cat", (q, q2), r.symbol))
        for cr in v.calls:
            for (q1, q2), (n_in, _) in list(wn.items()):
                if q1 != cr.target:
                    continue
                for rr in v.returns:
                    if rr.source == q2 and rr.pop == cr.push:
                        changed |= better(wn, (cr.source, rr.target), n_in + 2,
                                          ("wrap", cr.symbol, (q1, q2), rr.symbol))
        for (a, b), (n1, _) in list(wn.items()):
            for (b2, c), (n2, _) in list(wn.items()):
                if b2 == b:
                    changed |= better(wn, (a, c), n1 + n2, ("join", (a, b), (b, c)))

    # empty-stack spine: well-nested segments plus bare-stack pops
    empty: dict = {q: (0, ("start",)) for q in v.initial}
    changed = True
    while changed:
        changed = False
        for q, (n, _) in list(empty.items()):
            for (q1, q2), (m, _) in wn.items():
                if q1 == q:
                    changed |= better(empty, q2, n + m, ("via", q, (q1, q2)))
            for r in v.returns:
                if r.pop == bottom and r.source == q:
                    changed |= better(empty, r.target, n + 1, ("step", q, r.symbol))

    # beyond the first unmatched call the stack never empties again
    dist: dict = dict(empty)
    changed = True
    while changed:
        changed = False
        for q, (n, _) in list(dist.items()):
            for cr in v.calls:
                if cr.source == q:
                    changed |= better(dist, cr.target, n + 1, ("pstep", q, cr.symbol))
            for (q1, q2), (m, _) in wn.items():
                if q1 == q:
                    changed |= better(dist, q2, n + m, ("pvia", q, (q1, q2)))

    best = None
    for q in v.final:
        if q in dist and (best is None or dist[q][0] < dist[best][0]):
            best = q
    if best is None:
        return EmptinessResult(True, None, None)

    def expand_wn(key) -> list[str]:
        _, deriv = wn[key]
        tag = deriv[0]
        if tag == "eps":
            return []
        if tag == "cat":
            _, prev, sym = deriv
            return expand_wn(prev) + [sym]
        if tag == "wrap":
            _, call_sym, inner, ret_sym = deriv
            return [call_sym] + expand_wn(inner) + [ret_sym]
        _, left, right = deriv
        return expand_wn(left) + expand_wn(right)

    def expand(table, q) -> list[str]:
        _, deriv = table[q]
        tag = deriv[0]
        if tag == "start":
            return []
        if tag in ("via", "pvia"):
            _, prev, key = deriv
            base = empty if tag == "via" else dist
            return expand(base, prev) + expand_wn(key)
        _, prev, sym = deriv
        base = empty if tag == "step" else dist
        return expand(base, prev) + [sym]

    witness = tuple(expand(dist, best))
    return EmptinessResult(False, witness, len(witness))


# ----------------------------------------------------- untime and retime


def ecvpa_untime(e: DtEcmvpa) -> tuple[DtEcmvpa, dict]:
    """Move each rule's guard into the symbol read, leaving a plain VPA.

    Returns the untimed machine plus the annotation alphabet: a map from
    each AnnotatedSymbol's serialized name to the AnnotatedSymbol.  A timed
    word is accepted by the source machine iff some per-position labelling
    with annotated symbols whose guards hold there is accepted here.
    """
    _single_stack(e, "ecvpa_untime")
    if any(not r.interval.is_full for r in e.returns):
        raise ValueError("ecvpa_untime requires an untimed stack")
    alph = e.alphabet
    annots: dict[str, AnnotatedSymbol] = {}

    def name_of(rule, with_interval: bool) -> str:
        ann = AnnotatedSymbol(rule.symbol, rule.guard,
                              rule.interval if with_interval else None)
        name = str(ann)
        annots[name] = ann
        return name

    calls = [CallRule(r.source, name_of(r, False), G.TRUE, r.target, r.push)
             for r in e.calls]
    returns = [ReturnRule(r.source, name_of(r, True), FULL, r.pop, G.TRUE, r.target)
               for r in e.returns]
    internals = [InternalRule(r.source, name_of(r, False), G.TRUE, r.target)
                 for r in e.internals]
    by_kind = {CALL: set(), RETURN: set(), INTERNAL: set()}
    for name, ann in annots.items():
        by_kind[alph.kind_of(ann.base)].add(name)
    new_alph = StackedAlphabet.build(
        [by_kind[CALL]], [by_kind[RETURN]], [by_kind[INTERNAL]]
    )
    ut = make_automaton(
        new_alph, e.locations, e.initial, e.final,
        stack_alphabets=e.stack_alphabets, bottoms=e.bottoms,
        calls=calls, returns=returns, internals=internals,
    )
    return ut, annots


def ecvpa_retime(v: DtEcmvpa, annots: dict, base_alphabet: StackedAlphabet) -> DtEcmvpa:
    """Inverse of ecvpa_untime: annotations become guards again."""
    _single_stack(v, "ecvpa_retime")

    def ann(rule) -> AnnotatedSymbol:
        if rule.symbol not in annots:
            raise ValueError(f"symbol {rule.symbol!r} carries no annotation")
        return annots[rule.symbol]

    calls = [CallRule(r.source, ann(r).base, ann(r).guard, r.target, r.push)
             for r in v.calls]
    returns = [
        ReturnRule(r.source, ann(r).base,
                   ann(r).interval if ann(r).interval is not None else FULL,
                   r.pop, ann(r).guard, r.target)
        for r in v.returns
    ]
    internals = [InternalRule(r.source, ann(r).base, ann(r).guard, r.target)
                 for r in v.internals]
    return make_automaton(
        base_alphabet, v.locations, v.initial, v.final,
        stack_alphabets=v.stack_alphabets, bottoms=v.bottoms,
        calls=calls, returns=returns, internals=internals,
    )


# -------------------------------------------------------- guard splitting


def relevant_clocks_by_symbol(machine: DtEcmvpa) -> dict[str, tuple]:
    """For each symbol, the clocks mentioned by any rule reading it."""
    out: dict[str, set] = {}
    for rule in machine.all_rules():
        out.setdefault(rule.symbol, set()).update(rule.guard.clocks())
    return {sym: tuple(sorted(clocks)) for sym, clocks in out.items()}


def _boundary_classes(constants: frozenset[int]) -> tuple:
    """The coarsest interval partition separating the given constants,
    plus the undefined class: points at each constant, the gaps between,
    and the tails."""
    bounds = sorted(constants)
    classes: list[Optional[Interval]] = []
    prev = None
    for b in bounds:
        if prev is None:
            if b > 0:
                classes.append(Interval(0, False, b, True))
        else:
            if b > prev:
                classes.append(Interval(prev, True, b, True))
        classes.append(Interval(b, False, b, False))
        prev = b
    classes.append(Interval(prev, True, None, True) if prev is not None else
                   Interval(0, False, None, True))
    classes.append(None)
    return tuple(classes)


def split_guards_into_classes(machine: DtEcmvpa) -> DtEcmvpa:
    """Replace every rule by one copy per total class assignment over the
    clocks relevant to its symbol.

    Per symbol and clock, classes partition the value space along the
    constants that symbol's rules compare the clock with (plus the
    undefined class), so two rules on one symbol either share a guard or
    exclude each other; that is what keeps the machine deterministic after
    the untime/determinize/retime round trip.
    """
    relevant = relevant_clocks_by_symbol(machine)
    bounds: dict[tuple, set[int]] = {}
    for rule in machine.all_rules():
        for term in rule.guard.terms:
            for atom in term:
                if atom.op != "undef":
                    bounds.setdefault((rule.symbol, atom.clock), set()).add(atom.bound)
    no_bounds = _boundary_classes(frozenset())  # defined-anywhere or undefined
    classes_for = {
        key: _boundary_classes(frozenset(consts)) for key, consts in bounds.items()
    }
    for sym, clocks in relevant.items():
        combos = 1
        for clock in clocks:
            combos *= len(classes_for.get((sym, clock), no_bounds))
        if combos > 200_000:
            raise ValueError(
                f"guard splitting for {sym!r} needs {combos} classes; "
                "reduce guard clocks or constants"
            )

    def split(rule, rebuild):
        clocks = relevant.get(rule.symbol, ())
        if not clocks:
            return [rebuild(rule, rule.guard)]
        menus = [classes_for.get((rule.symbol, c), no_bounds) for c in clocks]
        out = []
        for combo in itertools.product(*menus):
            cls_map = dict(zip(clocks, combo))
            if G.class_map_satisfies(cls_map, rule.guard):
                out.append(rebuild(rule, G.class_guard(cls_map)))
        return out

    calls = [r2 for r in machine.calls
             for r2 in split(r, lambda r, g: CallRule(r.source, r.symbol, g,
                                                      r.target, r.push))]
    returns = [r2 for r in machine.returns
               for r2 in split(r, lambda r, g: ReturnRule(r.source, r.symbol, r.interval,
                                                          r.pop, g, r.target))]
    internals = [r2 for r in machine.internals
                 for r2 in split(r, lambda r, g: InternalRule(r.source, r.symbol, g,
                                                              r.target))]
    return machine.replace(calls=tuple(dict.fromkeys(calls)),
                           returns=tuple(dict.fromkeys(returns)),
                           internals=tuple(dict.fromkeys(internals)))


def ecvpa_determinize(e: DtEcmvpa) -> DtEcmvpa:
    """Deterministic language-equal machine for a single-stack event-clock
    VPA: split guards into exclusive classes, move them into the alphabet,
    determinize the resulting plain VPA, and move them back."""
    _single_stack(e, "ecvpa_determinize")
    if any(not r.interval.is_full for r in e.returns):
        raise ValueError("ecvpa_determinize requires an untimed stack")
    split = split_guards_into_classes(e)
    ut, annots = ecvpa_untime(split)
    det = vpa_determinize(ut)
    return ecvpa_retime(det, annots, e.alphabet)
