"""Stacked visibly-pushdown alphabets, timed words, and word analysis.

Positions in all public results are 1-indexed, matching the usual
convention for word structures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .guards import ClockId, Valuation, predictor, recorder

CALL = "call"
RETURN = "return"
INTERNAL = "internal"

# Separator names are reserved for decorated projections.
RESERVED_SYMBOLS = ("#", "#'")


@dataclass(frozen=True)
class StackedAlphabet:
    """A visibly pushdown alphabet partitioned among n stacks.

    For each stack h the sets calls[h], returns[h], internals[h] give the
    symbols that push, pop, and leave stack h alone; all 3n sets must be
    pairwise disjoint.
    """

    calls: tuple[frozenset[str], ...]
    returns: tuple[frozenset[str], ...]
    internals: tuple[frozenset[str], ...]
    _info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not (len(self.calls) == len(self.returns) == len(self.internals)):
            raise ValueError("calls/returns/internals must cover the same stacks")
        if len(self.calls) < 1:
            raise ValueError("need at least one stack")
        info: dict[str, tuple[str, int]] = {}
        for h in range(len(self.calls)):
            for kind, group in ((CALL, self.calls[h]), (RETURN, self.returns[h]),
                                (INTERNAL, self.internals[h])):
                for sym in group:
                    if sym in info:
                        raise ValueError(f"symbol {sym!r} assigned twice")
                    info[sym] = (kind, h + 1)
        self._info.update(info)

    @staticmethod
    def build(calls: Sequence[Iterable[str]], returns: Sequence[Iterable[str]],
              internals: Sequence[Iterable[str]]) -> "StackedAlphabet":
        return StackedAlphabet(
            tuple(frozenset(c) for c in calls),
            tuple(frozenset(r) for r in returns),
            tuple(frozenset(i) for i in internals),
        )

    @property
    def n(self) -> int:
        return len(self.calls)

    def symbols(self) -> frozenset[str]:
        return frozenset(self._info)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._info

    def kind_of(self, symbol: str) -> str:
        return self._info[symbol][0]

    def stack_of(self, symbol: str) -> int:
        """The 1-based stack owning the symbol."""
        return self._info[symbol][1]

    def stack_symbols(self, h: int) -> frozenset[str]:
        return self.calls[h - 1] | self.returns[h - 1] | self.internals[h - 1]

    def clocks_of_stack(self, h: int) -> frozenset[ClockId]:
        out = set()
        for sym in self.stack_symbols(h):
            out.add(recorder(sym))
            out.add(predictor(sym))
        return frozenset(out)

    def restrict_to_stack(self, h: int) -> "StackedAlphabet":
        """The single-stack alphabet of stack h."""
        return StackedAlphabet(
            (self.calls[h - 1],), (self.returns[h - 1],), (self.internals[h - 1],)
        )


@dataclass(frozen=True)
class TimedWord:
    """A finite sequence of (symbol, timestamp) with weakly monotone time."""

    events: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        prev = Fraction(0)
        for i, (sym, t) in enumerate(self.events):
            if t < 0:
                raise ValueError(f"negative timestamp at position {i + 1}")
            if i > 0 and t < prev:
                raise ValueError(f"timestamps must be weakly monotone at position {i + 1}")
            prev = t

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, object]]) -> "TimedWord":
        events = tuple((sym, Fraction(t)) for sym, t in pairs)
        return TimedWord(events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def symbol(self, pos: int) -> str:
        return self.events[pos - 1][0]

    def time(self, pos: int) -> Fraction:
        return self.events[pos - 1][1]

    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.events)

    def shifted(self, delta: Fraction) -> "TimedWord":
        return TimedWord(tuple((s, t + delta) for s, t in self.events))


EMPTY_WORD = TimedWord(())


def clock_valuations(word: TimedWord) -> tuple[Valuation, ...]:
    """Per-position clock valuations.

    At position j the recorder of ``a`` is t_j - t_i for the last i < j with
    symbol a, and the predictor is t_m - t_j for the first m > j; a missing
    entry in the mapping means the clock is undefined there.
    """
    n = len(word)
    vals: list[dict[ClockId, Fraction]] = [dict() for _ in range(n)]
    last_seen: dict[str, Fraction] = {}
    for j in range(n):
        sym_j, t_j = word.events[j]
        for sym, t in last_seen.items():
            vals[j][recorder(sym)] = t_j - t
        last_seen[sym_j] = t_j
    next_seen: dict[str, Fraction] = {}
    for j in range(n - 1, -1, -1):
        sym_j, t_j = word.events[j]
        for sym, t in next_seen.items():
            vals[j][predictor(sym)] = t - t_j
        next_seen[sym_j] = t_j
    return tuple(vals)


@dataclass(frozen=True)
class Matching:
    """The matching relation of one stack: call/return position pairs plus
    the calls and returns that never find a partner."""

    pairs: frozenset[tuple[int, int]]
    unmatched_calls: tuple[int, ...]
    unmatched_returns: tuple[int, ...]

    def partner_of_call(self, i: int) -> Optional[int]:
        for a, b in self.pairs:
            if a == i:
                return b
        return None

    def partner_of_return(self, j: int) -> Optional[int]:
        for a, b in self.pairs:
            if b == j:
                return a
        return None


def matching_relation(word: TimedWord, alphabet: StackedAlphabet, h: int) -> Matching:
    """Pair calls with returns of stack h by a single stack scan."""
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    unmatched_returns: list[int] = []
    for pos in range(1, len(word) + 1):
        sym = word.symbol(pos)
        if sym not in alphabet or alphabet.stack_of(sym) != h:
            continue
        kind = alphabet.kind_of(sym)
        if kind == CALL:
            stack.append(pos)
        elif kind == RETURN:
            if stack:
                pairs.append((stack.pop(), pos))
            else:
                unmatched_returns.append(pos)
    return Matching(frozenset(pairs), tuple(stack), tuple(unmatched_returns))


@dataclass(frozen=True)
class ContextDecomposition:
    """Maximal same-stack runs, in word order: (stack, first, last)."""

    contexts: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.contexts)

    def stack_contexts(self, h: int) -> tuple[tuple[int, int, int], ...]:
        return tuple(c for c in self.contexts if c[0] == h)

    def context_index_of(self, pos: int) -> int:
        """0-based index of the context containing a position."""
        for idx, (_, start, end) in enumerate(self.contexts):
            if start <= pos <= end:
                return idx
        raise ValueError(f"position {pos} out of range")


def context_decomposition(word: TimedWord, alphabet: StackedAlphabet) -> ContextDecomposition:
    contexts: list[tuple[int, int, int]] = []
    for pos in range(1, len(word) + 1):
        h = alphabet.stack_of(word.symbol(pos))
        if contexts and contexts[-1][0] == h:
            stack, start, _ = contexts[-1]
            contexts[-1] = (stack, start, pos)
        else:
            contexts.append((h, pos, pos))
    return ContextDecomposition(tuple(contexts))


def scope_of(word: TimedWord, alphabet: StackedAlphabet, h: int, j: int) -> Optional[int]:
    """Number of maximal stack-h contexts a matched return spans from its
    call, or None when position j is not a matched stack-h return."""
    matching = matching_relation(word, alphabet, h)
    i = matching.partner_of_return(j)
    if i is None:
        return None
    ctxs = context_decomposition(word, alphabet).stack_contexts(h)
    count = 0
    for _, start, end in ctxs:
        if end >= i and start <= j:
            count += 1
    return count


def is_k_scoped(word: TimedWord, alphabet: StackedAlphabet, k: int) -> bool:
    """Every matched return occurs within k maximal contexts of its stack."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ctxs = context_decomposition(word, alphabet)
    for h in range(1, alphabet.n + 1):
        spans = ctxs.stack_contexts(h)
        if not spans:
            continue
        # context ordinal of every position of stack h
        ordinal: dict[int, int] = {}
        for num, (_, start, end) in enumerate(spans):
            for pos in range(start, end + 1):
                ordinal[pos] = num
        for i, j in matching_relation(word, alphabet, h).pairs:
            if ordinal[j] - ordinal[i] + 1 > k:
                return False
    return True


@dataclass(frozen=True)
class Splitting:
    """A context decomposition plus, per stack, cut positions making each
    stack's projection a concatenation of blocks of at most k contexts.

    A cut after position p is h-consistent: no matched stack-h pair
    straddles it.
    """

    k: int
    contexts: ContextDecomposition
    cuts: tuple[tuple[int, ...], ...]  # per stack, positions cut after


def _straddle_free(pairs: frozenset[tuple[int, int]], p: int) -> bool:
    return not any(i <= p < j for i, j in pairs)


def k_scoped_splitting(word: TimedWord, alphabet: StackedAlphabet, k: int) -> Optional[Splitting]:
    """A splitting witnessing k-scopedness, or None if there is none.

    Cuts are placed greedily at every stack-h position that ends a maximal
    h-context or is a matched h-return, whenever no matched h-pair straddles
    it.  For k-scoped words this bounds every block by k contexts.
    """
    if not is_k_scoped(word, alphabet, k):
        return None
    ctxs = context_decomposition(word, alphabet)
    all_cuts: list[tuple[int, ...]] = []
    for h in range(1, alphabet.n + 1):
        matching = matching_relation(word, alphabet, h)
        returns = frozenset(j for _, j in matching.pairs)
        spans = ctxs.stack_contexts(h)
        context_ends = frozenset(end for _, _, end in spans)
        cuts = [
            p
            for _, start, end in spans
            for p in range(start, end + 1)
            if (p in returns or p in context_ends) and _straddle_free(matching.pairs, p)
        ]
        for width in _block_widths(spans, context_ends, cuts):
            assert width <= k, "cut construction exceeded the block bound"
        all_cuts.append(tuple(cuts))
    return Splitting(k, ctxs, tuple(all_cuts))


def _block_widths(spans, context_ends, cuts) -> list[int]:
    """Contexts touched by each inter-cut block of one stack's projection."""
    ordinal = {}
    for num, (_, start, end) in enumerate(spans):
        for pos in range(start, end + 1):
            ordinal[pos] = num
    widths = []
    prev, midway = -1, False
    for p in cuts:
        widths.append(ordinal[p] - prev + (1 if midway else 0))
        prev, midway = ordinal[p], p not in context_ends
    if spans:
        widths.append(len(spans) - 1 - prev + (1 if midway else 0))
    return widths
