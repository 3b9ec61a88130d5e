from fractions import Fraction

import mpmath as mp
import pytest

from compcap import fixtures, oracle
from compcap.capacity.channel import (
    Channel,
    capacity_certificate,
    capacity_enclosure,
    capacity_truncations,
    quad_capacity_term,
)
from compcap.exact import DomainError, pow2
from compcap.hierarchy import check_monotone
from compcap.verify import load_golden

F = Fraction


def _mp(q):
    return mp.mpf(q.numerator) / q.denominator


def test_zero_inside_unit_radius(geo_train):
    r = quad_capacity_term(geo_train, 1, 1, 1)
    assert r.enclosure.lo == 0 == r.enclosure.hi


@pytest.mark.parametrize("c", [2, 10])
def test_scaling_invariance(oracle_channel, c):
    pdf = oracle_channel.f1
    a = quad_capacity_term(pdf, 4, 1, 12).enclosure
    b = quad_capacity_term(pdf, 4 * c, c, 12).enclosure
    assert a == b


def test_single_bump_closed_form():
    pdf = fixtures.single_bump(F(1, 2))
    r = quad_capacity_term(pdf, 1, 1, 6)
    assert r.enclosure.width <= pow2(-20)
    with mp.workdps(30):
        ref = oracle.single_bump_capacity(F(1, 2), 1)
        assert _mp(r.enclosure.lo) <= ref <= _mp(r.enclosure.hi)
        # two independent oracle routes agree with each other
        assert abs(ref - oracle.single_bump_capacity_quad(F(1, 2), 1)) < mp.mpf(10) ** -20


@pytest.mark.parametrize("shift,P,s", fixtures.SINGLE_BUMPS)
def test_single_bump_fixtures(shift, P, s):
    r = quad_capacity_term(fixtures.single_bump(shift), P, s, int(shift) + 5)
    with mp.workdps(30):
        ref = oracle.single_bump_capacity(shift, P / s)
        assert _mp(r.enclosure.lo) <= ref <= _mp(r.enclosure.hi)


def test_budget_refinement():
    pdf = fixtures.single_bump(F(1, 3))
    w = [quad_capacity_term(pdf, 3, 1, 6, tol=pow2(-t)).enclosure.width for t in (10, 20, 30)]
    assert w[0] >= w[1] >= w[2]


def test_channel_validation():
    with pytest.raises(DomainError):
        Channel(fixtures.single_bump(0), fixtures.single_bump(1), 0, 1, 1)
    with pytest.raises(DomainError):
        quad_capacity_term(fixtures.single_bump(0), -1, 1, 4)


def test_truncations_at_one(oracle_channel):
    assert capacity_truncations(oracle_channel, 1) == (0, 0)
    with pytest.raises(ValueError):
        capacity_truncations(oracle_channel, 0)


@pytest.mark.parametrize("name", ["oracle-1", "bumps-1"])
def test_truncations_monotone(name):
    ch = fixtures.channel(name, 32)
    cert = capacity_certificate(ch)
    assert check_monotone(cert.a_seq.term, 32) is None
    assert check_monotone(cert.b_seq.term, 32) is None
    assert all(cert.a_seq.term(k) <= cert.a_seq.bound for k in (1, 16, 32))
    assert capacity_enclosure(ch, 32).hi + capacity_truncations(ch, 32)[1] <= cert.a_seq.bound + cert.b_seq.bound


def test_symmetric_channel():
    ch = fixtures.channel("sym-1", 32)
    cert = capacity_certificate(ch)
    for k in range(1, 33):
        a, b = capacity_truncations(ch, k)
        assert a == b
        assert cert.anytime(k) == 0


def test_oracle_channel_converges(oracle_channel):
    gold = load_golden("capacity_oracle1.json")
    cert = capacity_certificate(oracle_channel)
    ref = float(gold["oracle_value"])
    for k in range(gold["k0"], 33):
        assert abs(float(cert.anytime(k)) - ref) < 1e-3
    enc = capacity_enclosure(oracle_channel, 32)
    assert enc.lo <= F(gold["oracle_value"]) <= enc.hi


def test_trace_rows(oracle_channel):
    rows = capacity_certificate(oracle_channel).trace(4)
    assert [r[0] for r in rows] == [1, 2, 3, 4]
    assert all(r[3] == r[1] - r[2] for r in rows)
