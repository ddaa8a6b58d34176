"""Built-in example machines and words used by tests and the CLI docs.

``fix_a`` is a two-stack machine over call pairs (â,a / ĉ,c on stack 1 and
b / d on stack 2) whose language interleaves the stacks in six contexts and
constrains timing four ways: the first stack-2 push must age at least 4
before the block's last pop, the reopening push must come while the next d
is at most 2 away, the hatted return must come within 5 of the hatted call,
and the last pop must come within 2 of the last push.
"""

from __future__ import annotations

from fractions import Fraction as F

from .guards import atom_guard, predictor, recorder
from .intervals import FULL, Interval
from .model import CallRule, DtEcmvpa, ReturnRule, make_automaton
from .words import StackedAlphabet, TimedWord

A_HAT = "â"
C_HAT = "ĉ"


def fix_a_alphabet() -> StackedAlphabet:
    return StackedAlphabet.build(
        calls=[{A_HAT, "a"}, {"b"}],
        returns=[{"c", C_HAT}, {"d"}],
        internals=[set(), set()],
    )


def fix_a() -> DtEcmvpa:
    """The twelve-location two-stack fixture machine.

    Stack 1 uses {α, $}: the hatted call pushes $, plain calls push α, plain
    returns pop α, and the hatted return pops $, so the hatted pair matches
    across three stack-1 contexts.  Stack 2 uses {$} only.
    """
    from .guards import TRUE

    alph = fix_a_alphabet()
    locs = [f"l{i}" for i in range(11)]
    g_yd = atom_guard(predictor("d"), "<=", 2)
    g_xahat = atom_guard(recorder(A_HAT), "<=", 5)
    g_xb = atom_guard(recorder("b"), "<=", 2)
    aged = Interval(4, False, None, True)
    calls = [
        CallRule("l0", A_HAT, TRUE, "l1", "$"),
        CallRule("l1", "a", TRUE, "l1", "α"),
        CallRule("l1", "b", TRUE, "l2", "$"),
        CallRule("l2", "b", TRUE, "l2", "$"),
        CallRule("l5", "a", TRUE, "l6", "α"),
        CallRule("l6", "a", TRUE, "l6", "α"),
        CallRule("l6", "b", g_yd, "l7", "$"),
        CallRule("l7", "b", TRUE, "l7", "$"),
    ]
    returns = [
        ReturnRule("l2", "d", FULL, "$", TRUE, "l3"),
        ReturnRule("l3", "d", FULL, "$", TRUE, "l3"),
        ReturnRule("l3", "d", aged, "$", TRUE, "l4"),
        ReturnRule("l4", "c", FULL, "α", TRUE, "l4"),
        ReturnRule("l4", "c", FULL, "α", TRUE, "l5"),
        ReturnRule("l7", "c", FULL, "α", TRUE, "l8"),
        ReturnRule("l8", "c", FULL, "α", TRUE, "l8"),
        ReturnRule("l8", C_HAT, FULL, "$", g_xahat, "l9"),
        ReturnRule("l9", "d", FULL, "$", TRUE, "l9"),
        ReturnRule("l9", "d", FULL, "$", g_xb, "l10"),
    ]
    return make_automaton(
        alph, locs, initial=["l0"], final=["l10"],
        stack_alphabets=[{"α", "$", "_bot1"}, {"$", "_bot2"}],
        bottoms=["_bot1", "_bot2"],
        calls=calls, returns=returns, internals=[],
    )


_WPLUS_SYMBOLS = (A_HAT, "a", "b", "b", "d", "d", "c", "a", "b", "c", C_HAT, "d")
_WPLUS_TIMES = (F(0), F(0), F(1, 2), F(1), F(1), F(9, 2), F(23, 5),
                F(47, 10), F(24, 5), F(49, 10), F(5), F(11, 2))


def w_plus() -> TimedWord:
    """The frozen 12-event accepted word."""
    return TimedWord(tuple(zip(_WPLUS_SYMBOLS, _WPLUS_TIMES)))


def w_minus() -> TimedWord:
    """w_plus with the hatted return too late: 28/5 - 0 > 5."""
    times = list(_WPLUS_TIMES)
    times[10] = F(28, 5)
    times[11] = F(57, 10)
    return TimedWord(tuple(zip(_WPLUS_SYMBOLS, times)))


def _with_times(**overrides: F) -> TimedWord:
    times = list(_WPLUS_TIMES)
    for idx, t in overrides.items():
        times[int(idx[1:])] = t
    return TimedWord(tuple(zip(_WPLUS_SYMBOLS, times)))


def perturbations() -> dict[str, list[TimedWord]]:
    """Twenty rejected timing variants of w_plus, grouped by the constraint
    they break.  Breaking the final-pop bound necessarily breaks the
    reopening-push bound too on this word shape: both constraints relate the
    same two events when the final blocks have one symbol each.
    """
    age = [_with_times(t5=t) for t in
           (F(44, 10), F(43, 10), F(42, 10), F(41, 10), F(405, 100), F(7, 2), F(2))]
    a_hat = [_with_times(t10=t10, t11=t11) for t10, t11 in (
        (F(51, 10), F(52, 10)), (F(52, 10), F(53, 10)), (F(55, 10), F(56, 10)),
        (F(6), F(61, 10)), (F(65, 10), F(66, 10)), (F(505, 100), F(51, 10)))]
    last_pop = [_with_times(t11=t) for t in
                (F(701, 100), F(75, 10), F(8), F(9), F(72, 10), F(705, 100), F(10))]
    return {"stack-age>=4": age, "x_" + A_HAT + "<=5": a_hat, "x_b<=2/y_d<=2": last_pop}


def fix_b_alphabet() -> StackedAlphabet:
    return StackedAlphabet.build(calls=[{"c"}], returns=[{"r"}], internals=[{"i"}])


def fix_b() -> DtEcmvpa:
    """A two-location single-stack machine for balanced call/return runs.

    The first call of a balanced block pushes a marked symbol so the final
    pop can restore the (accepting) start location.
    """
    from .guards import TRUE

    alph = fix_b_alphabet()
    return make_automaton(
        alph, ["p", "q"], initial=["p"], final=["p"],
        calls=[CallRule("p", "c", TRUE, "q", "A0"),
               CallRule("q", "c", TRUE, "q", "A")],
        returns=[ReturnRule("q", "r", FULL, "A", TRUE, "q"),
                 ReturnRule("q", "r", FULL, "A0", TRUE, "p")],
        internals=[],
    )
