"""Concrete run semantics: configurations, steps, and membership."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import CallRule, DtEcmvpa, InternalRule, ReturnRule, ScopedAutomaton
from .words import CALL, INTERNAL, RETURN, TimedWord, clock_valuations, is_k_scoped


@dataclass(frozen=True)
class Configuration:
    """A run state: location, events consumed, and per-stack contents.

    Stacks are tuples of (symbol, push time), top first; the bottom marker
    is implicit and never stored, so an empty tuple is a bare stack.  An
    entry's age at time t is t minus its push time.
    """

    location: object
    position: int
    stacks: tuple[tuple[tuple[str, Fraction], ...], ...]

    def stack_height(self, h: int) -> int:
        return len(self.stacks[h - 1])

    def digest(self) -> str:
        text = repr((self.location, self.position, self.stacks))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def initial_configurations(a: DtEcmvpa) -> list[Configuration]:
    empty = tuple(() for _ in range(a.n))
    return [Configuration(loc, 0, empty) for loc in a.initial]


def step(a: DtEcmvpa, cfg: Configuration, event: tuple[str, Fraction],
         valuation) -> list[tuple[object, Configuration]]:
    """All successors of cfg under the next event, with the rules used.

    The valuation must be the event-clock valuation of the whole word at
    the event's position.
    """
    symbol, t = event
    if symbol not in a.alphabet:
        raise ValueError(f"symbol {symbol!r} not in the alphabet")
    kind = a.alphabet.kind_of(symbol)
    h = a.alphabet.stack_of(symbol)
    out: list[tuple[object, Configuration]] = []
    for rule in a.rules_from(cfg.location, symbol):
        if not rule.guard.holds(valuation):
            continue
        if kind == INTERNAL:
            out.append((rule, Configuration(rule.target, cfg.position + 1, cfg.stacks)))
        elif kind == CALL:
            stacks = list(cfg.stacks)
            stacks[h - 1] = ((rule.push, t),) + stacks[h - 1]
            out.append((rule, Configuration(rule.target, cfg.position + 1, tuple(stacks))))
        else:
            stack = cfg.stacks[h - 1]
            if not stack:
                # bottom stays; no age test applies
                if rule.pop != a.bottom(h):
                    continue
                out.append((rule, Configuration(rule.target, cfg.position + 1, cfg.stacks)))
            else:
                top_sym, pushed_at = stack[0]
                if rule.pop != top_sym or not rule.interval.contains(t - pushed_at):
                    continue
                stacks = list(cfg.stacks)
                stacks[h - 1] = stack[1:]
                out.append((rule, Configuration(rule.target, cfg.position + 1, tuple(stacks))))
    return out


@dataclass(frozen=True)
class RunWitness:
    """An accepting run as (rule index, configuration digest) steps."""

    steps: tuple[tuple[int, str], ...]


def membership(a: DtEcmvpa, word: TimedWord) -> tuple[bool, Optional[RunWitness]]:
    """Breadth-first closure over configurations, position by position."""
    vals = clock_valuations(word)
    frontier: dict[Configuration, list] = {c: [] for c in initial_configurations(a)}
    rules = a.all_rules()
    rule_pos = {id(r): i for i, r in enumerate(rules)}
    for j, event in enumerate(word.events):
        nxt: dict[Configuration, list] = {}
        for cfg, trail in frontier.items():
            for rule, succ in step(a, cfg, event, vals[j]):
                if succ not in nxt:
                    nxt[succ] = trail + [(rule_pos[id(rule)], succ.digest())]
        frontier = nxt
        if not frontier:
            return False, None
    for cfg, trail in frontier.items():
        if cfg.location in a.final:
            return True, RunWitness(tuple(trail))
    return False, None


def accepts(a: DtEcmvpa, word: TimedWord) -> bool:
    return membership(a, word)[0]


def membership_scoped(sa: ScopedAutomaton, word: TimedWord) -> tuple[bool, Optional[RunWitness]]:
    """Membership in the k-scope-restricted language."""
    if not is_k_scoped(word, sa.inner.alphabet, sa.k):
        return False, None
    return membership(sa.inner, word)


def accepts_scoped(sa: ScopedAutomaton, word: TimedWord) -> bool:
    return membership_scoped(sa, word)[0]
