"""JSON file formats for automata, alphabets, and timed words.

The grammar is documented in the README; serialization is canonical
(sorted keys, fixed separators) so regenerated fixtures are byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .guards import Atom, ClockId, Guard
from .intervals import Interval
from .model import CallRule, DtEcmvpa, InternalRule, ReturnRule, make_automaton
from .words import StackedAlphabet, TimedWord


class FormatError(ValueError):
    """Raised on malformed input files, with a position annotation."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# ----------------------------------------------------------------- guards


def guard_to_json(guard: Guard) -> Any:
    if guard.is_true:
        return "true"
    if not guard.terms:
        return "false"

    def term_json(term: tuple[Atom, ...]) -> Any:
        atoms = [str(a) for a in term]
        return atoms[0] if len(atoms) == 1 else {"and": atoms}

    terms = [term_json(t) for t in guard.terms]
    return terms[0] if len(terms) == 1 else {"or": terms}


def _parse_atom(text: str, where: str) -> Atom:
    text = text.strip()
    if text.startswith("undef(") and text.endswith(")"):
        return Atom(ClockId.parse(text[6:-1]), "undef")
    for op in ("<=", ">=", "=", "<", ">"):
        if op in text:
            clock_text, bound_text = text.split(op, 1)
            try:
                return Atom(ClockId.parse(clock_text.strip()), op, int(bound_text))
            except ValueError as exc:
                raise FormatError(where, f"bad atom {text!r}: {exc}") from exc
    raise FormatError(where, f"bad atom {text!r}")


def guard_from_json(node: Any, where: str = "guard") -> Guard:
    if node == "true":
        return Guard()
    if node == "false":
        return Guard(())
    if isinstance(node, str):
        return Guard(((_parse_atom(node, where),),))
    if isinstance(node, dict) and "and" in node:
        atoms = tuple(_parse_atom(a, where) for a in node["and"])
        return Guard((atoms,))
    if isinstance(node, dict) and "or" in node:
        out = Guard(())
        for sub in node["or"]:
            out = out.disjoin(guard_from_json(sub, where))
        return out
    raise FormatError(where, f"bad guard node {node!r}")


# ------------------------------------------------------------- alphabets


def alphabet_to_json(alph: StackedAlphabet) -> dict:
    return {
        "stacks": alph.n,
        "calls": [sorted(c) for c in alph.calls],
        "returns": [sorted(r) for r in alph.returns],
        "internals": [sorted(i) for i in alph.internals],
    }


def alphabet_from_json(node: Any, where: str = "alphabet") -> StackedAlphabet:
    try:
        n = node["stacks"]
        calls, returns, internals = node["calls"], node["returns"], node["internals"]
    except (KeyError, TypeError) as exc:
        raise FormatError(where, f"missing field: {exc}") from exc
    if not (len(calls) == len(returns) == len(internals) == n):
        raise FormatError(where, "per-stack arrays do not match the stack count")
    try:
        return StackedAlphabet.build(calls, returns, internals)
    except ValueError as exc:
        raise FormatError(where, str(exc)) from exc


# ------------------------------------------------------------------ words


def word_to_json(word: TimedWord) -> list:
    def frac(t: Fraction) -> str:
        return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"

    return [[sym, frac(t)] for sym, t in word.events]


def word_from_json(node: Any, where: str = "word") -> TimedWord:
    events = []
    for idx, rec in enumerate(node):
        if not isinstance(rec, (list, tuple)) or len(rec) != 2:
            raise FormatError(f"{where}[{idx}]", f"expected [symbol, time], got {rec!r}")
        sym, t = rec
        try:
            events.append((sym, Fraction(t)))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{where}[{idx}]", f"bad timestamp {t!r}") from exc
    try:
        return TimedWord(tuple(events))
    except ValueError as exc:
        raise FormatError(where, str(exc)) from exc


# --------------------------------------------------------------- automata


def _location_names(a: DtEcmvpa) -> dict:
    """Stable printable names for locations, which may be structured."""
    locs = sorted(a.locations, key=lambda l: (isinstance(l, str) and l) or repr(l))
    if all(isinstance(l, str) for l in locs):
        return {l: l for l in locs}
    return {l: f"s{i}" for i, l in enumerate(locs)}


def automaton_to_json(a: DtEcmvpa) -> dict:
    names = _location_names(a)
    return {
        "alphabet": alphabet_to_json(a.alphabet),
        "locations": sorted(names.values()),
        "initial": sorted(names[l] for l in a.initial),
        "final": sorted(names[l] for l in a.final),
        "stacks": [
            {"symbols": sorted(syms), "bottom": a.bottoms[h]}
            for h, syms in enumerate(a.stack_alphabets)
        ],
        "rules": {
            "call": [
                {"from": names[r.source], "symbol": r.symbol,
                 "guard": guard_to_json(r.guard), "to": names[r.target], "push": r.push}
                for r in a.calls
            ],
            "return": [
                {"from": names[r.source], "symbol": r.symbol, "interval": str(r.interval),
                 "pop": r.pop, "guard": guard_to_json(r.guard), "to": names[r.target]}
                for r in a.returns
            ],
            "internal": [
                {"from": names[r.source], "symbol": r.symbol,
                 "guard": guard_to_json(r.guard), "to": names[r.target]}
                for r in a.internals
            ],
        },
    }


def automaton_from_json(node: Any) -> DtEcmvpa:
    alph = alphabet_from_json(node.get("alphabet"), "alphabet")
    try:
        locations = list(node["locations"])
        initial = list(node["initial"])
        final = list(node["final"])
        stacks = node["stacks"]
        rules = node["rules"]
    except (KeyError, TypeError) as exc:
        raise FormatError("automaton", f"missing field: {exc}") from exc
    calls = []
    for idx, r in enumerate(rules.get("call", [])):
        where = f"rules.call[{idx}]"
        calls.append(CallRule(r["from"], r["symbol"],
                              guard_from_json(r.get("guard", "true"), where),
                              r["to"], r["push"]))
    returns = []
    for idx, r in enumerate(rules.get("return", [])):
        where = f"rules.return[{idx}]"
        try:
            interval = Interval.parse(r.get("interval", "[0,inf)"))
        except ValueError as exc:
            raise FormatError(where, str(exc)) from exc
        returns.append(ReturnRule(r["from"], r["symbol"], interval, r["pop"],
                                  guard_from_json(r.get("guard", "true"), where),
                                  r["to"]))
    internals = []
    for idx, r in enumerate(rules.get("internal", [])):
        where = f"rules.internal[{idx}]"
        internals.append(InternalRule(r["from"], r["symbol"],
                                      guard_from_json(r.get("guard", "true"), where),
                                      r["to"]))
    return make_automaton(
        alph, locations, initial, final,
        stack_alphabets=[set(s["symbols"]) for s in stacks],
        bottoms=[s["bottom"] for s in stacks],
        calls=calls, returns=returns, internals=internals,
    )


# ------------------------------------------------------------------- text


def dumps(node: Any) -> str:
    return json.dumps(node, ensure_ascii=False, sort_keys=True,
                      indent=2, separators=(",", ": ")) + "\n"


def automaton_to_text(a: DtEcmvpa) -> str:
    return dumps(automaton_to_json(a))


def automaton_from_text(text: str) -> DtEcmvpa:
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return automaton_from_json(node)


def word_to_text(word: TimedWord) -> str:
    return dumps(word_to_json(word))


def word_from_text(text: str) -> TimedWord:
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return word_from_json(node)
