import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap import fixtures
from compcap.constructions.star import KM_enclosure, build_star_pdf, compute_KM, eval_gM
from compcap.exact import DomainError, pow2
from compcap.interval import Interval

F = Fraction
LN2 = math.log(2)


def test_eval_gM_examples():
    assert eval_gM(8, 1) == Interval.point(0)
    assert eval_gM(8, 9) == Interval.point(0)
    assert eval_gM(8, 4).contains(F(1, 16)) and eval_gM(8, 4).width <= pow2(-40)


@given(st.integers(4, 40), st.fractions(min_value=0, max_value=50))
def test_gM_support(M, a):
    v = eval_gM(M, a)
    if a <= 2 or a >= M + 1:
        assert v == Interval.point(0)
    else:
        assert v.lo >= 0 and v.hi > 0


def test_KM_increasing_and_positive():
    vals = [KM_enclosure(M) for M in range(4, 65)]
    assert vals[0].lo > 0
    for a, b in zip(vals, vals[1:]):
        assert b.lo > a.hi


def test_KM_lower_bound_base2():
    for M in range(4, 65):
        assert float(KM_enclosure(M).lo) > LN2 * math.log(math.log(M) / math.log(3))


def test_KM_unscaled_bound_not_met():
    assert any(float(KM_enclosure(M).hi) < math.log(math.log(M) / math.log(3)) for M in range(4, 65))


def test_KM_loglog_growth():
    # K_{2M} - K_M ~ ln2 ln(log2(2M)/log2(M)) for large M
    for M in (16, 32):
        diff = float(KM_enclosure(2 * M).mid - KM_enclosure(M).mid)
        pred = LN2 * math.log(math.log2(2 * M) / math.log2(M))
        assert abs(diff / pred - 1) < 0.1


def test_compute_KM_creal():
    assert abs(compute_KM(8).approx(30) - KM_enclosure(8, 40).mid) <= pow2(-29)


def test_truncation_too_small():
    with pytest.raises(DomainError):
        build_star_pdf(fixtures.enumerator("injected-id"), 4)


def test_star_support_and_evenness(star_id):
    for a in (0, F(1, 2), 1, 2, F(-3, 2)):
        assert star_id.eval(a) == Interval.point(0)
    for a in (F(5, 2), F(17, 3), F(30)):
        assert star_id.eval(a) == star_id.eval(-a)
        assert star_id.eval(a).lo >= 0


def test_star_mass(star_id):
    m = star_id.mass_enclosure()
    assert m.contains(1)
    assert m.width <= 2 * star_id.tau / star_id.c2.lo + pow2(-20)


def test_star_log_moment_direct_vs_quadrature(star_id):
    q = star_id.log_moment_trunc()
    d = star_id.log_moment_direct()
    assert q.lo <= d.hi and d.lo <= q.hi


def test_star_truncation_16_support():
    s = build_star_pdf(fixtures.enumerator("injected-id"), 16)
    assert s.support() == (2, 17)
    assert s.to_json()["support"] == [2, 17]


def test_star_dovetail_mass_brackets():
    s = build_star_pdf(fixtures.enumerator("dovetail"), 16)
    assert s.mass_enclosure().contains(1)
