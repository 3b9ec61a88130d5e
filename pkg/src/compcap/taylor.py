"""Interval Taylor arithmetic.

A series is a list of intervals ``[c0, c1, ..., cd]`` where ``ck`` encloses
``f^(k)(x)/k!`` for every ``x`` in the expansion domain. Evaluating an
expression on ``var(X)`` gives coefficient enclosures valid over all of ``X``,
which is what the certified quadrature's remainder term needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .elementary import ln2_enclosure, ln_interval
from .interval import Interval

Series = List[Interval]


class Ctx:
    """Order and working precision shared by the series of one evaluation."""

    __slots__ = ("order", "bits", "_inv_ln2")

    def __init__(self, order: int, bits: int):
        self.order = order
        self.bits = bits
        self._inv_ln2 = None

    def rnd(self, iv: Interval) -> Interval:
        return iv.round_out(self.bits)

    def const(self, c) -> Series:
        c = c if isinstance(c, Interval) else Interval.point(c)
        return [c] + [Interval.point(0)] * self.order

    def var(self, X: Interval) -> Series:
        s = [X, Interval.point(1)] + [Interval.point(0)] * (self.order - 1)
        return s[: self.order + 1]

    @property
    def inv_ln2(self) -> Interval:
        if self._inv_ln2 is None:
            self._inv_ln2 = self.rnd(ln2_enclosure(self.bits + 4).reciprocal())
        return self._inv_ln2

    # -- ops ---------------------------------------------------------------

    def add(self, a: Series, b: Series) -> Series:
        return [x + y for x, y in zip(a, b)]

    def sub(self, a: Series, b: Series) -> Series:
        return [x - y for x, y in zip(a, b)]

    def scale(self, a: Series, c) -> Series:
        return [self.rnd(x * c) for x in a]

    def add_const(self, a: Series, c) -> Series:
        return [a[0] + c] + a[1:]

    def mul(self, a: Series, b: Series) -> Series:
        out = []
        for k in range(self.order + 1):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                if a[j].is_point() and a[j].lo == 0:
                    continue
                acc = acc + a[j] * b[k - j]
            out.append(self.rnd(acc))
        return out

    def div(self, a: Series, b: Series) -> Series:
        b0 = b[0].reciprocal()
        q: Series = []
        for k in range(self.order + 1):
            acc = a[k]
            for j in range(1, k + 1):
                acc = acc - b[j] * q[k - j]
            q.append(self.rnd(acc * b0))
        return q

    def recip(self, b: Series) -> Series:
        return self.div(self.const(1), b)

    def ln(self, u: Series) -> Series:
        if u[0].lo <= 0:
            raise ValueError("log of series with non-positive range")
        v: Series = [self.rnd(ln_interval(u[0], self.bits))]
        inv0 = u[0].reciprocal()
        for k in range(1, self.order + 1):
            acc = u[k] * k
            for j in range(1, k):
                acc = acc - v[j] * u[k - j] * j
            v.append(self.rnd(acc * inv0 * Fraction(1, k)))
        return v

    def log2(self, u: Series) -> Series:
        return self.scale(self.ln(u), self.inv_ln2)

    def sqr(self, a: Series) -> Series:
        out = self.mul(a, a)
        # the constant term can be tightened
        out[0] = self.rnd(a[0].sqr())
        return out
