from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap.constructions.mixture import TrapezoidMixture
from compcap.exact import DomainError, pow2
from compcap.interval import Interval

F = Fraction


def test_single_bump_basics():
    m = TrapezoidMixture.single(F(3, 2))
    assert m.support() == (F(5, 2), F(11, 2))
    assert m.mass() == Interval.point(1)
    assert m.eval(F(4)) == Interval.point(F(1, 4)) == m.eval(F(-4))
    assert m.eval(F(1, 2)) == Interval.point(0)


def test_validation():
    with pytest.raises(DomainError):
        TrapezoidMixture.single(-1)
    with pytest.raises(DomainError):
        TrapezoidMixture.build([0], [Interval(F(-1), F(1))])


def test_inverse_cdf_examples():
    m = TrapezoidMixture.single(2)
    assert m.sample_inverse_cdf(0) == 3
    assert m.sample_inverse_cdf(F(1, 2)) == F(9, 2)  # median of the symmetric bump
    with pytest.raises(DomainError):
        m.sample_inverse_cdf(1)
    with pytest.raises(DomainError):
        m.sample_inverse_cdf(F(-1, 10))


@given(st.fractions(min_value=0, max_value=F(999, 1000)), st.sampled_from([F(0), F(1, 3), F(5)]))
def test_cdf_roundtrip(u, shift):
    m = TrapezoidMixture.build([shift, shift + F(3, 2)], [F(1, 3), F(2, 3)])
    x = m.sample_inverse_cdf(u, bits=48)
    assert abs(m.cdf_abs(x) - u) <= pow2(-30)


def test_cdf_ends():
    m = TrapezoidMixture.build([0, F(5, 2)], [F(1, 4), F(3, 4)])
    lo, hi = m.support()
    assert m.cdf_abs(lo) == 0 and m.cdf_abs(hi) == 1


def test_vectorised_sampler_matches_exact():
    m = TrapezoidMixture.build([0, F(1, 2), 7], [F(1, 5), F(2, 5), F(2, 5)])
    us = np.linspace(0, 0.999, 201)
    fast = m.sample_abs(us)
    exact = [float(m.sample_inverse_cdf(F(float(u)), 50)) for u in us]
    assert np.max(np.abs(fast - exact)) < 1e-9


def test_json_roundtrip():
    m = TrapezoidMixture.build([F(1, 3), 2], [Interval(F(1, 4), F(1, 3)), F(2, 3)])
    assert TrapezoidMixture.from_json(m.to_json()) == m
