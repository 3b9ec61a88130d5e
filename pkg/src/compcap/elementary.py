"""Certified enclosures of ln, log2 and exp2 at rational arguments.

Logarithms: reduce ``x = 2**k * m`` with ``m`` in [1, 2), then
``ln m = 2 atanh((m-1)/(m+1))`` summed in fixed point with an explicit bound on
truncation and rounding error. exp2 uses a Taylor series with a Lagrange
remainder on the reduced argument.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import DomainError, Q, floor_log2, pow2
from .interval import Interval


def _atanh_fixed(num: int, den: int, W: int) -> tuple[int, int]:
    """Return (S, E) with S <= atanh(num/den) * 2**W <= S + E.

    Requires 0 <= num/den <= 1/3.
    """
    if num == 0:
        return 0, 0
    one = 1 << W
    Y = (num << W) // den  # y*2^W - 1 < Y <= y*2^W
    Y2 = (Y * Y) >> W
    term = Y
    S = 0
    j = 0
    while term:
        S += term // (2 * j + 1)
        term = (term * Y2) >> W
        j += 1
    # every floor loses < 1 ulp; per-term error stays below 3 ulp (y <= 1/3),
    # and the dropped tail is below 4 ulp.
    E = 4 * (j + 2) + 4
    del one
    return S, E


@lru_cache(maxsize=64)
def _ln2_fixed(W: int) -> tuple[int, int]:
    S, E = _atanh_fixed(1, 3, W)
    return 2 * S, 2 * E


def ln2_enclosure(bits: int) -> Interval:
    W = bits + 8
    S, E = _ln2_fixed(W)
    scale = 1 << W
    return Interval(Fraction(S, scale), Fraction(S + E, scale))


def _ln_mantissa(m: Fraction, W: int) -> tuple[int, int]:
    """Fixed-point enclosure of ln m for m in [1, 2): (S, E) with S <= ln m * 2^W <= S+E."""
    num, den = m.numerator - m.denominator, m.numerator + m.denominator
    S, E = _atanh_fixed(num, den, W)
    return 2 * S, 2 * E


def _split(x: Fraction) -> tuple[int, Fraction]:
    k = floor_log2(x)
    return k, x / pow2(k)


def ln_enclosure(x, bits: int) -> Interval:
    """Interval containing ln x with width <= 2**-bits."""
    x = Q(x)
    if x <= 0:
        raise DomainError(f"ln of non-positive {x}")
    k, m = _split(x)
    W = bits + 8 + max(0, abs(k).bit_length())
    while True:
        S, E = _ln_mantissa(m, W)
        L2, E2 = _ln2_fixed(W)
        scale = 1 << W
        if k >= 0:
            lo = Fraction(S + k * L2, scale)
            hi = Fraction(S + E + k * (L2 + E2), scale)
        else:
            lo = Fraction(S + k * (L2 + E2), scale)
            hi = Fraction(S + E + k * L2, scale)
        out = Interval(lo, hi)
        if out.width <= pow2(-bits):
            return out
        W += 8


def log2_enclosure(x, bits: int) -> Interval:
    """Interval containing log2 x with width <= 2**-bits.

    Powers of two give exact point intervals.
    """
    x = Q(x)
    if x <= 0:
        raise DomainError(f"log2 of non-positive {x}")
    k, m = _split(x)
    if m == 1:
        return Interval.point(k)
    W = bits + 10
    while True:
        S, E = _ln_mantissa(m, W)
        L2, E2 = _ln2_fixed(W)
        # ln m / ln 2 with both enclosed; ln m >= 0
        q = Interval(Fraction(S, L2 + E2), Fraction(S + E, L2))
        out = (q + k).round_out(bits + 4)
        if out.width <= pow2(-bits):
            return out
        W += 8


def ln_interval(X: Interval, bits: int) -> Interval:
    return Interval(ln_enclosure(X.lo, bits).lo, ln_enclosure(X.hi, bits).hi)


def log2_interval(X: Interval, bits: int) -> Interval:
    return Interval(log2_enclosure(X.lo, bits).lo, log2_enclosure(X.hi, bits).hi)


def exp_enclosure(x, bits: int) -> Interval:
    """Interval containing e**x, relative width about 2**-bits."""
    x = Q(x)
    return _exp_interval(Interval.point(x), bits)


def _exp_interval(t: Interval, bits: int) -> Interval:
    # e^t = (e^(t/2^r))^(2^r) with |t/2^r| <= 1/2
    r = 0
    while t.mag / pow2(r) > Fraction(1, 2):
        r += 1
    u = t * pow2(-r)
    W = bits + 2 * r + 12
    s = Interval.point(1)
    term = Interval.point(1)
    j = 1
    while True:
        term = (term * u * Fraction(1, j)).round_out(W)
        s = s + term
        j += 1
        # Lagrange remainder for |u| <= 1/2: |R| <= |u|^j / j! * e^(1/2) <= 2 |term| |u| / j
        bound = 2 * term.mag * u.mag / j
        if bound < pow2(-W):
            break
    s = Interval(s.lo - bound, s.hi + bound).round_out(W)
    for _ in range(r):
        s = s.sqr().round_out(W)
    return s


def exp2_enclosure(x, bits: int) -> Interval:
    """Interval containing 2**x with width <= 2**-bits."""
    x = Q(x)
    k = x.numerator // x.denominator
    f = x - k
    if f == 0:
        return Interval.point(pow2(k))
    extra = max(k, 0) + 4
    b = bits + extra
    while True:
        t = Interval.point(f) * ln2_enclosure(b + 4)
        out = (_exp_interval(t, b) * pow2(k)).round_out(bits + 4)
        if out.width <= pow2(-bits):
            return out
        b += 8
