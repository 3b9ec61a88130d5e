from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap.exact import (
    Q,
    dyadic_round,
    format_decimal,
    format_rational,
    parse_rational,
    pow2,
    rat_arith,
)

from conftest import rationals

F = Fraction


def test_rat_arith_examples():
    assert rat_arith(F(1, 3), F(1, 6), "add") == F(1, 2)
    assert F(2, 4) == F(1, 2) and F(2, 4).denominator == 2
    r = rat_arith(F(355, 113), F(355, 113), "sub")
    assert r == 0 and (r.numerator, r.denominator) == (0, 1)


def test_division_by_zero_is_explicit():
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")


def test_unknown_op():
    with pytest.raises(ValueError):
        rat_arith(1, 2, "pow")


def test_floats_rejected():
    with pytest.raises(TypeError):
        Q(0.5)


@pytest.mark.parametrize("s,q", [("3/4", F(3, 4)), (" -7/21 ", F(-1, 3)), ("2", F(2)), ("0.125", F(1, 8))])
def test_parse_rational(s, q):
    assert parse_rational(s) == q


@pytest.mark.parametrize("s", ["", "a/b", "1/0"])
def test_parse_rational_rejects(s):
    with pytest.raises(ValueError):
        parse_rational(s)


def test_format_roundtrip():
    assert format_rational(F(-6, 4)) == "-3/2"
    assert format_decimal(F(1, 3), 5) == "0.33333"
    assert format_decimal(F(-3, 1000), 3) == "-0.003"


def test_dyadic_round_examples():
    r = dyadic_round(F(1, 3), 2)
    assert r in (F(1, 4), F(2, 4)) and abs(r - F(1, 3)) <= pow2(-2)
    assert dyadic_round(F(5, 2), 1) == F(5, 2)
    assert abs(dyadic_round(F(1, 3), 10) - F(1, 3)) <= pow2(-10)


def test_dyadic_round_ties_to_even():
    # 3/8 at n=2 sits between 1/4 and 2/4: even numerator wins
    assert dyadic_round(F(3, 8), 2) == F(2, 4)
    assert dyadic_round(F(1, 8), 2) == F(0)


@given(rationals(st), st.integers(0, 80))
def test_dyadic_round_bound(x, n):
    r = dyadic_round(x, n)
    assert (r * 2**n).denominator == 1
    assert abs(r - x) <= pow2(-(n + 1))


@given(rationals(st), rationals(st), rationals(st))
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if b:
        assert rat_arith(rat_arith(a, b, "div"), b, "mul") == a
