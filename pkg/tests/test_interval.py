from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap.interval import Interval, IntervalDivisionError, interval_arith

from conftest import rationals

F = Fraction


def iv(a, b):
    return Interval(F(a), F(b))


def test_examples():
    assert interval_arith(iv(1, 2), iv(3, 4), "add") == iv(4, 6)
    assert interval_arith(iv(-1, 1), iv(-1, 1), "mul") == iv(-1, 1)
    assert interval_arith(iv(1, 2), iv(1, 2), "sub") == iv(-1, 1)


def test_division_by_zero_interval():
    with pytest.raises(IntervalDivisionError):
        interval_arith(iv(1, 2), iv(-1, 1), "div")


def test_empty_rejected():
    with pytest.raises(ValueError):
        iv(2, 1)


def test_round_out_contains():
    x = iv(F(1, 3), F(2, 3)).round_out(8)
    assert x.contains(iv(F(1, 3), F(2, 3)))
    assert (x.lo * 256).denominator == 1 and (x.hi * 256).denominator == 1


@st.composite
def intervals_with_point(draw):
    a, b, t = draw(rationals(st, 1000, 50)), draw(rationals(st, 1000, 50)), draw(st.fractions(0, 1))
    lo, hi = min(a, b), max(a, b)
    return Interval(lo, hi), lo + (hi - lo) * t


@given(intervals_with_point(), intervals_with_point(), st.sampled_from(["add", "sub", "mul", "div"]))
def test_containment(xa, yb, op):
    (X, x), (Y, y) = xa, yb
    if op == "div" and Y.lo <= 0 <= Y.hi:
        return
    exact = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y if y else None}[op]
    assert interval_arith(X, Y, op).contains(exact)


@given(intervals_with_point(), intervals_with_point(), intervals_with_point())
def test_expression_containment(a, b, c):
    (A, x), (B, y), (C, z) = a, b, c
    assert (A * B - C * A + B * B).contains(x * y - z * x + y * y)
    assert A.sqr().contains(x * x)
