from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap import oracle
from compcap.constructions.bump import (
    G_KNOTS,
    eval_g,
    g_piece,
    integral_g,
    moment_enclosure,
    moment_M,
    phi,
    phi_rational,
    psi,
    psi_enclosure,
)
from compcap.creal import CReal
from compcap.elementary import log2_enclosure
from compcap.exact import DomainError, pow2
from compcap.quadrature import integrate

F = Fraction


def _mp(q):
    return mp.mpf(q.numerator) / q.denominator


def _inside(iv, x, slack=0):
    return _mp(iv.lo) - slack <= x <= _mp(iv.hi) + slack


def g_series(ctx, X):
    pc = g_piece(X.mid)
    if pc is None:
        return ctx.const(0)
    return ctx.add_const(ctx.scale(ctx.var(X), pc[1]), pc[0])


def test_eval_g_examples():
    assert eval_g(F(5, 2)) == F(1, 4)
    assert eval_g(1) == 0 and eval_g(4) == 0
    assert eval_g(F(7, 2)) == F(1, 8)


@given(st.fractions(min_value=-10, max_value=10))
def test_g_bounds(a):
    v = eval_g(a)
    assert 0 <= v <= F(1, 4)
    if a <= 1 or a >= 4:
        assert v == 0


def test_integral_g():
    assert integral_g() == F(1, 2)
    pieces = [integrate(g_series, a, a + 1, tol=pow2(-40)).enclosure for a in (1, 2, 3)]
    for p, want in zip(pieces, (F(1, 8), F(1, 4), F(1, 8))):
        assert p.contains(want)
    r = integrate(g_series, 0, 5, knots=G_KNOTS, tol=pow2(-24))
    assert r.enclosure.contains(F(1, 2)) and r.enclosure.width <= pow2(-20)


@pytest.mark.parametrize("n", range(1, 9))
def test_psi_equals_moment(n):
    a, b = moment_enclosure(n, 40), psi_enclosure(n, 40)
    assert a.width <= pow2(-40) and b.width <= pow2(-40)
    assert abs(a.mid - b.mid) <= pow2(-30)
    with mp.workdps(30):
        assert _inside(a, oracle.moment(n), mp.mpf(2) ** -38)


def test_psi_zero_against_oracle():
    e = psi_enclosure(0, 40)
    assert e.lo > 0
    with mp.workdps(30):
        assert _inside(e, oracle.psi(0), mp.mpf(2) ** -38)


def test_moment_bound_defensible():
    for n in range(1, 101):
        assert moment_enclosure(n, 32).lo >= log2_enclosure(n + 2, 32).hi / 2


def test_moment_bound_unscaled_fails():
    # the plateau-only chain without the factor 1/4 would claim M(n) >= 2 log2(n+2)
    assert any(moment_enclosure(n, 32).hi < 2 * log2_enclosure(n + 2, 32).lo for n in range(1, 101))


def test_moment_increasing():
    prev = moment_enclosure(1, 32)
    for n in range(2, 102):
        cur = moment_enclosure(n, 32)
        assert cur.lo > prev.hi
        prev = cur


def test_moment_domain():
    with pytest.raises(DomainError):
        moment_M(0)


@given(st.fractions(min_value=0, max_value=64), st.fractions(min_value=0, max_value=64))
def test_psi_monotone(u1, u2):
    if u1 == u2:
        return
    a, b = psi_enclosure(min(u1, u2), 40), psi_enclosure(max(u1, u2), 40)
    if max(u1, u2) - min(u1, u2) > pow2(-30):
        assert a.hi < b.lo


def test_phi_examples():
    assert phi_rational(psi_enclosure(0, 60).mid, 30) == 0
    assert abs(phi(psi(CReal.from_rational(2))).approx(20) - 2) <= pow2(-20)
    assert abs(phi(moment_M(5)).approx(20) - 5) <= pow2(-20)


def test_phi_below_range():
    with pytest.raises(DomainError):
        phi(CReal.from_rational(0))
    with pytest.raises(DomainError):
        psi(CReal.from_rational(-1))


@given(st.fractions(min_value=0, max_value=16))
def test_phi_psi_roundtrip(u):
    z = psi(CReal.from_rational(u))
    assert abs(phi(z).approx(20) - u) <= pow2(-20)


@given(st.fractions(min_value=F(7, 5), max_value=8))
def test_psi_phi_roundtrip(z):
    if z <= psi_enclosure(0, 40).hi:
        return
    u = phi_rational(z, 40)
    assert abs(psi_enclosure(u, 40).mid - z) <= pow2(-30)


def test_phi_against_oracle():
    for z in (F(2), F(3), F(9, 2)):
        with mp.workdps(30):
            assert abs(_mp(phi_rational(z, 30)) - oracle.phi(z)) < mp.mpf(2) ** -28
