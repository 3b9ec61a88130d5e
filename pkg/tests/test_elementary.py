from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap.elementary import exp2_enclosure, ln2_enclosure, log2_enclosure
from compcap.exact import DomainError, pow2

F = Fraction


def _contains(iv, x):
    with mp.workdps(60):
        return mp.mpf(iv.lo.numerator) / iv.lo.denominator <= x <= mp.mpf(iv.hi.numerator) / iv.hi.denominator


def test_log2_exact_points():
    for p in (1, 10, 53):
        e = log2_enclosure(2, p)
        assert e.contains(1) and e.width <= pow2(-p)
        assert log2_enclosure(1, p).contains(0)


def test_log2_of_three():
    e = log2_enclosure(3, 20)
    assert F("1.584962") <= e.lo and e.hi <= F("1.584963")
    with mp.workdps(50):
        assert _contains(e, mp.log(3) / mp.log(2))


def test_log2_domain():
    with pytest.raises(DomainError):
        log2_enclosure(0, 10)
    with pytest.raises(DomainError):
        log2_enclosure(-1, 10)


@given(st.fractions(min_value=F(1, 10**6), max_value=10**6), st.integers(4, 90))
def test_log2_against_mpmath(x, p):
    e = log2_enclosure(x, p)
    assert e.width <= pow2(-p)
    with mp.workdps(60):
        assert _contains(e, mp.log(mp.mpf(x.numerator) / x.denominator, 2))


@given(st.fractions(min_value=F(1, 1000), max_value=1000), st.integers(4, 60))
def test_log2_width_tracks_precision(x, p):
    # one more bit of precision at least halves the guaranteed width
    assert log2_enclosure(x, p + 1).width <= pow2(-(p + 1))


def test_ln2():
    with mp.workdps(60):
        assert _contains(ln2_enclosure(100), mp.log(2))


@given(st.fractions(min_value=-20, max_value=20), st.integers(4, 60))
def test_exp2_against_mpmath(x, p):
    with mp.workdps(60):
        assert _contains(exp2_enclosure(x, p), mp.power(2, mp.mpf(x.numerator) / x.denominator))
