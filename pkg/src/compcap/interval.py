"""Closed intervals with rational endpoints.

Arithmetic is exact on the endpoints, so every result contains the exact
image of its operands. ``round_out`` widens endpoints to a dyadic grid to keep
numerators from growing without bound in long computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .exact import Q, dyadic_ceil, dyadic_floor, format_rational, parse_rational

Number = Union[Fraction, int]


class IntervalDivisionError(ZeroDivisionError):
    """Divisor interval contains zero."""


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", Q(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", Q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "Interval":
        x = Q(x)
        return cls(x, x)

    @classmethod
    def around(cls, x: Number, radius: Number) -> "Interval":
        x, radius = Q(x), Q(radius)
        return cls(x - radius, x + radius)

    @classmethod
    def hull_of(cls, items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    # -- queries -----------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Union[Number, "Interval"]) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Q(x)
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def round_out(self, bits: int) -> "Interval":
        """Smallest enclosing interval with endpoints on the 2**-bits grid."""
        lo = self.lo if self.lo.denominator == 1 else dyadic_floor(self.lo, bits)
        hi = self.hi if self.hi.denominator == 1 else dyadic_ceil(self.hi, bits)
        return Interval(lo, hi)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _lift(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval.point(x)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = self._lift(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other) -> "Interval":
        return self._lift(other) - self

    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            c = Q(other)
            if c >= 0:
                return Interval(self.lo * c, self.hi * c)
            return Interval(self.hi * c, self.lo * c)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0 and c >= 0:
            return Interval(a * c, b * d)
        ps = (a * c, a * d, b * c, b * d)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise IntervalDivisionError(f"division by interval containing zero: {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            c = Q(other)
            if c == 0:
                raise IntervalDivisionError("division by zero")
            return self * (1 / c)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Interval":
        return self._lift(other) * self.reciprocal()

    def sqr(self) -> "Interval":
        """Tight square (dependency-aware, unlike ``x * x``)."""
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def __pow__(self, n: int) -> "Interval":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        if n == 0:
            return Interval.point(1)
        if n % 2 == 0:
            return self.sqr() ** (n // 2) if n > 2 else self.sqr()
        if n == 1:
            return self
        return Interval(self.lo**n, self.hi**n)

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def max0(self) -> "Interval":
        """Elementwise max(x, 0)."""
        return Interval(max(self.lo, Fraction(0)), max(self.hi, Fraction(0)))

    # -- io ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_json(cls, d: dict) -> "Interval":
        return cls(parse_rational(d["lo"]), parse_rational(d["hi"]))

    def __repr__(self) -> str:
        return f"Interval[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def interval_arith(a: Interval, b: Interval, op: str) -> Interval:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


ZERO = Interval(Fraction(0), Fraction(0))
