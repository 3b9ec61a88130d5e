from fractions import Fraction

import pytest

from compcap import fixtures
from compcap.capacity.channel import quad_capacity_term
from compcap.capacity.montecarlo import batch_uniforms, mc_estimate, sample_inverse_cdf
from compcap.exact import DomainError

F = Fraction


def test_deterministic():
    pdf = fixtures.single_bump(F(1, 2))
    a = mc_estimate(pdf, 1, 1, 100_000, seed=7)
    b = mc_estimate(pdf, 1, 1, 100_000, seed=7)
    assert a == b
    assert a != mc_estimate(pdf, 1, 1, 100_000, seed=8)


def test_schedule_invariant():
    pdf = fixtures.single_bump(3)
    assert mc_estimate(pdf, 10, 1, 300_000, 5, threads=1) == mc_estimate(pdf, 10, 1, 300_000, 5, threads=4)


def test_zero_samples_rejected():
    with pytest.raises(DomainError):
        mc_estimate(fixtures.single_bump(0), 1, 1, 0, 1)


def test_agrees_with_quadrature():
    pdf = fixtures.single_bump(F(1, 2))
    q = quad_capacity_term(pdf, 1, 1, 6).enclosure
    r = mc_estimate(pdf, 1, 1, 200_000, seed=12345)
    assert r.agrees_with(float(q.mid))


def test_counter_streams():
    u = batch_uniforms(1, 0, 8)
    assert (u == batch_uniforms(1, 0, 8)).all()
    assert not (u == batch_uniforms(1, 1, 8)).all()


def test_refuses_heavy_tail():
    short = fixtures.bump_train("geo-1", 8)
    with pytest.raises(DomainError):
        mc_estimate(short, 1, 1, 1000, 1)


def test_bump_train_sampling(oracle_channel):
    ch = oracle_channel
    r = mc_estimate(ch.f1.pdf, 4, 1, 100_000, 3)
    q = quad_capacity_term(ch.f1, 4, 1, 32).enclosure
    assert r.agrees_with(float(q.mid), k=4)


def test_sample_inverse_cdf_wrapper():
    pdf = fixtures.single_bump(2)
    assert sample_inverse_cdf(pdf, 0) == 3
    assert sample_inverse_cdf(pdf, F(1, 2)) == F(9, 2)
