"""Brute-force language oracles: enumeration and pairwise comparison.

These walk prefix trees with shared frontiers instead of re-running
membership per word, so exhaustive checks to useful depths stay cheap.
The timed variants sample timestamps from a half-integer grid; since all
guard and interval constants are integers, that grid exercises every
open/closed boundary (a testing heuristic, not a completeness theorem).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from .model import DtEcmvpa, ScopedAutomaton
from .semantics import accepts, accepts_scoped
from .words import CALL, RETURN, TimedWord, is_k_scoped


class OracleBoundExceeded(ValueError):
    def __init__(self, estimate: int, bound: int):
        super().__init__(f"enumeration would visit about {estimate} words, over the bound {bound}")
        self.estimate = estimate
        self.bound = bound


# ------------------------------------------------------ untimed walking

Frontier = frozenset  # of (location, stack-contents tuple-of-tuples)


def untimed_initial(a: DtEcmvpa) -> Frontier:
    empty = tuple(() for _ in range(a.n))
    return frozenset((loc, empty) for loc in a.initial)


def untimed_step(a: DtEcmvpa, frontier: Frontier, symbol: str) -> Frontier:
    """Successor frontier; guards must be trivial (untimed machines)."""
    kind = a.alphabet.kind_of(symbol)
    h = a.alphabet.stack_of(symbol)
    out = set()
    for loc, stacks in frontier:
        for rule in a.rules_from(loc, symbol):
            if kind == CALL:
                st = list(stacks)
                st[h - 1] = (rule.push,) + st[h - 1]
                out.add((rule.target, tuple(st)))
            elif kind == RETURN:
                stack = stacks[h - 1]
                if not stack:
                    if rule.pop == a.bottom(h):
                        out.add((rule.target, stacks))
                elif rule.pop == stack[0]:
                    st = list(stacks)
                    st[h - 1] = stack[1:]
                    out.add((rule.target, tuple(st)))
            else:
                out.add((rule.target, stacks))
    return frozenset(out)


def untimed_accepting(a: DtEcmvpa, frontier: Frontier) -> bool:
    return any(loc in a.final for loc, _ in frontier)


def untimed_language(a: DtEcmvpa, max_len: int,
                     symbols: Optional[Sequence[str]] = None) -> list[tuple[str, ...]]:
    """All accepted symbol sequences up to max_len, in length-lex order."""
    syms = sorted(symbols if symbols is not None else a.alphabet.symbols())
    out: list[tuple[str, ...]] = []

    def walk(prefix: tuple[str, ...], frontier: Frontier) -> None:
        if untimed_accepting(a, frontier):
            out.append(prefix)
        if len(prefix) == max_len:
            return
        for s in syms:
            nxt = untimed_step(a, frontier, s)
            if nxt:
                walk(prefix + (s,), nxt)

    walk((), untimed_initial(a))
    out.sort(key=lambda w: (len(w), w))
    return out


def compare_untimed(a: DtEcmvpa, b: DtEcmvpa, max_len: int) -> Optional[tuple[str, ...]]:
    """First symbol sequence up to max_len where acceptance differs, if any.

    Frontier pairs already verified with at least as much lookahead are
    skipped, which keeps exhaustive comparisons near-linear in distinct
    behaviours rather than in words.
    """
    syms = sorted(a.alphabet.symbols())
    memo: dict[tuple[Frontier, Frontier], int] = {}

    def walk(prefix, fa, fb, remaining) -> Optional[tuple[str, ...]]:
        if untimed_accepting(a, fa) != untimed_accepting(b, fb):
            return prefix
        if remaining == 0:
            return None
        seen = memo.get((fa, fb), -1)
        if seen >= remaining:
            return None
        memo[(fa, fb)] = remaining
        for s in syms:
            na, nb = untimed_step(a, fa, s), untimed_step(b, fb, s)
            if not na and not nb:
                continue
            hit = walk(prefix + (s,), na, nb, remaining - 1)
            if hit is not None:
                return hit
        return None

    return walk((), untimed_initial(a), untimed_initial(b), max_len)


# ------------------------------------------------- k-scope aware walking


@dataclass(frozen=True)
class _ScopeState:
    """Per-stack context counters and pending push ages, in contexts."""

    current: int  # 0 = none yet
    counts: tuple[int, ...]
    pending: tuple[tuple[int, ...], ...]  # per stack, push-context ordinals


def _scope_initial(n: int) -> _ScopeState:
    return _ScopeState(0, (0,) * n, ((),) * n)


def _scope_step(st: _ScopeState, a: DtEcmvpa, symbol: str, k: int) -> Optional[_ScopeState]:
    """Advance the scope tracker, or None when a pop would break the bound."""
    h = a.alphabet.stack_of(symbol)
    kind = a.alphabet.kind_of(symbol)
    counts = list(st.counts)
    if st.current != h:
        counts[h - 1] += 1
    pending = list(st.pending)
    if kind == CALL:
        pending[h - 1] = (counts[h - 1],) + pending[h - 1]
    elif kind == RETURN and pending[h - 1]:
        pushed = pending[h - 1][0]
        if counts[h - 1] - pushed + 1 > k:
            return None
        pending[h - 1] = pending[h - 1][1:]
    return _ScopeState(h, tuple(counts), tuple(pending))


def find_scoped_accepted(sa: ScopedAutomaton, max_len: int) -> Optional[tuple[str, ...]]:
    """Some k-scoped accepted symbol sequence up to max_len, if one exists.

    Untimed machines only; prefixes are pruned as soon as the run frontier
    dies or a pop exceeds the scope bound.
    """
    a = sa.inner
    syms = sorted(a.alphabet.symbols())

    def walk(prefix, frontier, scope) -> Optional[tuple[str, ...]]:
        if untimed_accepting(a, frontier):
            return prefix
        if len(prefix) == max_len:
            return None
        for s in syms:
            nscope = _scope_step(scope, a, s, sa.k)
            if nscope is None:
                continue
            nxt = untimed_step(a, frontier, s)
            if nxt:
                hit = walk(prefix + (s,), nxt, nscope)
                if hit is not None:
                    return hit
        return None

    return walk((), untimed_initial(a), _scope_initial(a.n))


# ----------------------------------------------------------- timed grids

HALF = Fraction(1, 2)


def delta_grid(cmax: int) -> tuple[Fraction, ...]:
    """Inter-event delays covering every interval class up to cmax."""
    out = [Fraction(0)]
    step = HALF
    v = step
    while v <= cmax:
        out.append(v)
        v += step
    out.append(Fraction(cmax) + HALF)
    return tuple(out)


def timed_words_on_grid(symbol_seqs: Iterable[tuple[str, ...]],
                        deltas: Sequence[Fraction]) -> Iterator[TimedWord]:
    """Every timing of every sequence with per-step delays from the grid."""
    for seq in symbol_seqs:
        if not seq:
            yield TimedWord(())
            continue
        for combo in product(deltas, repeat=len(seq)):
            times = []
            t = Fraction(0)
            for d in combo:
                t += d
                times.append(t)
            yield TimedWord(tuple(zip(seq, times)))


def sampled_grid_corpus(alphabet_symbols: Sequence[str], max_len: int,
                        deltas: Sequence[Fraction], budget: int,
                        seed: int = 0) -> list[TimedWord]:
    """A deterministic corpus: exhaustive timings for short words, then a
    seeded sample of longer ones, at most about `budget` words in total."""
    import random

    rng = random.Random(seed)
    syms = sorted(alphabet_symbols)
    corpus: list[TimedWord] = [TimedWord(())]
    exhaustive_len = 1
    while (len(syms) * len(deltas)) ** (exhaustive_len + 1) <= budget // 2 \
            and exhaustive_len < max_len:
        exhaustive_len += 1
    seqs = []
    for n in range(1, exhaustive_len + 1):
        seqs.extend(product(syms, repeat=n))
    corpus.extend(timed_words_on_grid(seqs, deltas))
    while len(corpus) < budget:
        n = rng.randint(exhaustive_len + 1, max_len) if max_len > exhaustive_len else max_len
        seq = tuple(rng.choice(syms) for _ in range(n))
        times = []
        t = Fraction(0)
        for _ in range(n):
            t += rng.choice(deltas)
            times.append(t)
        corpus.append(TimedWord(tuple(zip(seq, times))))
    return corpus


# -------------------------------------------------------------- CLI verb


def oracle_enumerate(sa: ScopedAutomaton, max_len: int,
                     deltas: Optional[Sequence[Fraction]] = None,
                     bound: int = 2_000_000) -> list[TimedWord]:
    """The accepted language sample, exhaustively.

    Untimed machines (no guards, no aged stacks) enumerate symbol sequences
    with zero timestamps; timed machines enumerate every grid timing.
    Refuses with a size estimate when the walk would exceed the bound.
    """
    a = sa.inner
    syms = sorted(a.alphabet.symbols())
    timed = any(not r.guard.is_true for r in a.all_rules()) or \
        any(not r.interval.is_full for r in a.returns)
    n_sym = max(len(syms), 1)
    if not timed:
        estimate = n_sym ** max_len if max_len else 1
        if estimate > bound:
            raise OracleBoundExceeded(estimate, bound)
        seqs = untimed_language(a, max_len)
        out = [TimedWord(tuple((s, Fraction(0)) for s in seq)) for seq in seqs
               if is_k_scoped(TimedWord(tuple((s, Fraction(0)) for s in seq)),
                              a.alphabet, sa.k)]
        return out
    from .model import max_constant

    deltas = tuple(deltas) if deltas is not None else delta_grid(max_constant(a))
    estimate = sum((n_sym * len(deltas)) ** n for n in range(max_len + 1))
    if estimate > bound:
        raise OracleBoundExceeded(estimate, bound)
    seqs = [seq for n in range(0, max_len + 1) for seq in product(syms, repeat=n)]
    out = []
    for w in timed_words_on_grid(seqs, deltas):
        if accepts_scoped(sa, w):
            out.append(w)
    out.sort(key=lambda w: (len(w), tuple(w.events)))
    return out
