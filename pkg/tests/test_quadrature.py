from fractions import Fraction

import mpmath as mp
from hypothesis import given
from hypothesis import strategies as st

from compcap.exact import pow2
from compcap.quadrature import integrate

F = Fraction


def log2_shift(c):
    def fn(ctx, X):
        return ctx.log2(ctx.add_const(ctx.var(X), c))

    return fn


def test_polynomial_exact():
    r = integrate(lambda ctx, X: ctx.sqr(ctx.var(X)), 0, 3, tol=pow2(-30))
    assert r.enclosure.contains(9) and r.enclosure.width <= pow2(-28)


def test_log_against_mpmath():
    r = integrate(log2_shift(1), 0, 4, tol=pow2(-30))
    with mp.workdps(40):
        ref = mp.quad(lambda t: mp.log(t + 1, 2), [0, 4])
        lo = mp.mpf(r.enclosure.lo.numerator) / r.enclosure.lo.denominator
        hi = mp.mpf(r.enclosure.hi.numerator) / r.enclosure.hi.denominator
        assert lo <= ref <= hi
    assert r.converged


def test_reversed_limits():
    a = integrate(log2_shift(2), 1, 3, tol=pow2(-24)).enclosure
    b = integrate(log2_shift(2), 3, 1, tol=pow2(-24)).enclosure
    assert a == -b


def test_budget_flags_partial_result():
    r = integrate(log2_shift(F(1, 1000)), 0, 1, tol=pow2(-60), budget=4)
    assert not r.converged
    with mp.workdps(40):
        ref = mp.quad(lambda t: mp.log(t + mp.mpf(1) / 1000, 2), [0, 1])
        assert mp.mpf(r.enclosure.lo.numerator) / r.enclosure.lo.denominator <= ref
        assert ref <= mp.mpf(r.enclosure.hi.numerator) / r.enclosure.hi.denominator


def test_refinement_monotone():
    widths = [integrate(log2_shift(1), 0, 4, tol=pow2(-t)).enclosure.width for t in (8, 16, 24)]
    assert widths[0] >= widths[1] >= widths[2]


@given(st.fractions(min_value=F(1, 8), max_value=8), st.fractions(min_value=0, max_value=4))
def test_containment_random(c, a):
    r = integrate(log2_shift(c), a, a + 1, tol=pow2(-20))
    with mp.workdps(40):
        ref = mp.quad(lambda t: mp.log(t + mp.mpf(c.numerator) / c.denominator, 2), [mp.mpf(a.numerator) / a.denominator, mp.mpf(a.numerator) / a.denominator + 1])
        assert mp.mpf(r.enclosure.lo.numerator) / r.enclosure.lo.denominator <= ref
        assert ref <= mp.mpf(r.enclosure.hi.numerator) / r.enclosure.hi.denominator
