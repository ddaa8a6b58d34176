"""Integer-bounded intervals used in age tests and region classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


@dataclass(frozen=True, order=True)
class Interval:
    """An interval over the nonnegative rationals with integer endpoints.

    ``high is None`` means unbounded above (always open on that side).
    """

    low: int
    low_strict: bool
    high: Optional[int]
    high_strict: bool

    def __post_init__(self) -> None:
        if self.low < 0:
            raise ValueError(f"interval lower bound must be >= 0, got {self.low}")
        if self.high is None:
            if not self.high_strict:
                raise ValueError("unbounded intervals must be open above")
        else:
            if self.high < self.low:
                raise ValueError(f"empty interval: {self}")
            if self.high == self.low and (self.low_strict or self.high_strict):
                raise ValueError(f"empty interval: {self}")

    def contains(self, value: Fraction) -> bool:
        if value < self.low or (value == self.low and self.low_strict):
            return False
        if self.high is None:
            return True
        if value > self.high or (value == self.high and self.high_strict):
            return False
        return True

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        """Intersection, or None when empty.

        At an equal bound the strict side is the tighter one.
        """
        if (self.low, self.low_strict) >= (other.low, other.low_strict):
            low, low_strict = self.low, self.low_strict
        else:
            low, low_strict = other.low, other.low_strict
        if self.high is None:
            high, high_strict = other.high, other.high_strict
        elif other.high is None:
            high, high_strict = self.high, self.high_strict
        elif (self.high, not self.high_strict) <= (other.high, not other.high_strict):
            high, high_strict = self.high, self.high_strict
        else:
            high, high_strict = other.high, other.high_strict
        if high is not None:
            if high < low:
                return None
            if high == low and (low_strict or high_strict):
                return None
        return Interval(low, low_strict, high, high_strict)

    @property
    def is_full(self) -> bool:
        return self.low == 0 and not self.low_strict and self.high is None

    def __str__(self) -> str:
        lb = "(" if self.low_strict else "["
        rb = ")" if self.high_strict else "]"
        hi = "inf" if self.high is None else str(self.high)
        return f"{lb}{self.low},{hi}{rb}"

    @staticmethod
    def parse(text: str) -> "Interval":
        text = text.strip()
        if not text or text[0] not in "([" or text[-1] not in ")]":
            raise ValueError(f"malformed interval {text!r}")
        low_strict = text[0] == "("
        high_strict = text[-1] == ")"
        body = text[1:-1].split(",")
        if len(body) != 2:
            raise ValueError(f"malformed interval {text!r}")
        low = int(body[0])
        hi_text = body[1].strip()
        high = None if hi_text in ("inf", "+inf") else int(hi_text)
        return Interval(low, low_strict, high, high_strict)


FULL = Interval(0, False, None, True)


def point(c: int) -> Interval:
    return Interval(c, False, c, False)


def open_between(a: int, b: int) -> Interval:
    return Interval(a, True, b, True)


def interval_set(cmax: int) -> tuple[Interval, ...]:
    """The canonical ordered partition of [0, oo):
    [0,0], (0,1), [1,1], ..., [cmax,cmax], (cmax,oo)."""
    if cmax < 0:
        raise ValueError("cmax must be >= 0")
    out: list[Interval] = [point(0)]
    for c in range(1, cmax + 1):
        out.append(open_between(c - 1, c))
        out.append(point(c))
    out.append(Interval(cmax, True, None, True))
    return tuple(out)


def class_of(value: Fraction, cmax: int) -> Interval:
    """The member of interval_set(cmax) containing value."""
    if value < 0:
        raise ValueError("values are nonnegative")
    if value > cmax:
        return Interval(cmax, True, None, True)
    if value == int(value):
        return point(int(value))
    return open_between(int(value), int(value) + 1)
