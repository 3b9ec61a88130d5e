"""Exact rational helpers.

``fractions.Fraction`` is the rational type throughout the package: it is
canonical at construction (gcd-reduced, positive denominator), immutable and
totally ordered, which is everything the arithmetic layer needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


class DomainError(ValueError):
    """Argument outside the domain of a function (log of a non-positive, ...)."""


def Q(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction; strings may be ``"num/den"`` or decimals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def rat_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Exact ``a op b`` for op in add/sub/mul/div.

    Division by zero raises ``ZeroDivisionError``.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    a, b = Q(a), Q(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


def floor_div_pow2(num: int, den: int, n: int) -> int:
    """floor(num/den * 2**n) for den > 0."""
    if n >= 0:
        return (num << n) // den
    return num // (den << -n)


def dyadic_round(x: RationalLike, n: int) -> Fraction:
    """Nearest multiple of 2**-n to ``x``; ties go to the even numerator.

    ``|result - x| <= 2**-(n+1)``.
    """
    x = Q(x)
    scaled = x * (Fraction(2) ** n)
    k = round(scaled)  # Fraction.__round__ is round-half-even
    return Fraction(k) / (Fraction(2) ** n)


def dyadic_floor(x: Fraction, n: int) -> Fraction:
    return Fraction(floor_div_pow2(x.numerator, x.denominator, n)) / (Fraction(2) ** n)


def dyadic_ceil(x: Fraction, n: int) -> Fraction:
    return Fraction(-floor_div_pow2(-x.numerator, x.denominator, n)) / (Fraction(2) ** n)


def ceil_log2(x: Fraction) -> int:
    """Smallest integer k with x <= 2**k, for x > 0."""
    if x <= 0:
        raise DomainError("ceil_log2 needs x > 0")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** k < x:
        k += 1
    while Fraction(2) ** (k - 1) >= x:
        k -= 1
    return k


def floor_log2(x: Fraction) -> int:
    """Largest integer k with 2**k <= x, for x > 0."""
    if x <= 0:
        raise DomainError("floor_log2 needs x > 0")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** k > x:
        k -= 1
    while Fraction(2) ** (k + 1) <= x:
        k += 1
    return k


def pow2(k: int) -> Fraction:
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


def format_decimal(q: RationalLike, digits: int) -> str:
    """Decimal rendering of q rounded half-even to ``digits`` places."""
    q = Q(q)
    scaled = q * 10**digits
    n = round(scaled)  # Fraction.__round__ is half-even and exact
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"
