from fractions import Fraction

import mpmath as mp
import pytest

from compcap import fixtures, oracle
from compcap.constructions.bump import eval_g
from compcap.constructions.bumptrain import auto_shift, build_bump_train, log_moment, pdf_eval
from compcap.creal import PrecisionCapError
from compcap.exact import DomainError, pow2
from compcap.hierarchy import Sigma1Cert

F = Fraction


def _mp(q):
    return mp.mpf(q.numerator) / q.denominator


@pytest.fixture(scope="module")
def ref():
    """mpmath reference for the first 12 bumps; z* summed over 64 terms (tail < 2^-60)."""
    with mp.workdps(30):
        M = [oracle.moment(n) for n in range(1, 65)]
        w = [mp.mpf(2) ** -n + (2 if n == 1 else 0) for n in range(1, 65)]
        z = mp.fsum(a / b for a, b in zip(w, M))
        alpha = [oracle.phi(z * M[n] / 2) for n in range(12)]
        coef = [w[n] / (z * M[n]) for n in range(12)]
    return {"zstar": z, "alpha": alpha, "coef": coef}


def test_telescoping(geo_train):
    cert = fixtures.cert("geo-1")
    assert sum(geo_train.d(n) for n in range(1, 13)) == F(4095, 4096)
    acc = F(0)
    for M in range(1, 513):
        acc += geo_train.d(M)
        assert acc == cert.term(M)


def test_auto_shift_values():
    assert auto_shift(fixtures.cert("geo-1"), 32) == 2
    assert auto_shift(fixtures.cert("geo-1/2"), 32) == 3
    assert auto_shift(fixtures.cert("geo-3"), 32) == 0


def test_infeasible_shift_rejected():
    with pytest.raises(DomainError):
        build_bump_train(fixtures.cert("geo-1/2"), 16, shift=0)


def test_generic_tail_hits_precision_cap():
    # bound 2 with no declared decay: the generic tail only decays like 1/log M
    slow = Sigma1Cert(lambda k: 1 - pow2(-k), 2, name="geo-undeclared")
    with pytest.raises(PrecisionCapError) as ei:
        build_bump_train(slow, 16, precision_bits=40)
    assert ei.value.achievable < 40


def test_positions_and_weights_against_oracle(geo_train, ref):
    with mp.workdps(30):
        assert abs(_mp(geo_train.zstar.approx(60)) - ref["zstar"]) < mp.mpf(2) ** -50
        for n in range(1, 13):
            a = geo_train.alpha_star(n).enclosure(40)
            assert _mp(a.lo) - mp.mpf(2) ** -36 <= ref["alpha"][n - 1] <= _mp(a.hi) + mp.mpf(2) ** -36
            c = geo_train.coef(n, 48)
            assert _mp(c.lo) - mp.mpf(2) ** -40 <= ref["coef"][n - 1] <= _mp(c.hi) + mp.mpf(2) ** -40
    assert all(geo_train.alpha_star(n).approx(8) >= 0 for n in range(1, 20))


def test_mass_within_tail(geo_train):
    widths = []
    for M in (8, 12, 16, 32):
        m = geo_train.mass_enclosure(M)
        assert m.contains(1)
        assert m.hi - m.lo <= geo_train.mass_tail(M) + pow2(-40)
        widths.append(m.width)
    assert widths == sorted(widths, reverse=True)


@pytest.mark.parametrize("M", [8, 16, 32])
def test_log_moment_identity(geo_train, M):
    lm = log_moment(geo_train, M) - geo_train.shift
    target = fixtures.cert("geo-1").term(M)
    tail = geo_train.tail_w(M)
    assert lm.lo - tail <= target <= lm.hi + tail


def test_pdf_eval_support_and_evenness(geo_train):
    assert pdf_eval(geo_train, F(1, 2)).hi == 0
    for a in (F(5, 2), F(7, 2), F(11, 2), F(40, 3)):
        assert pdf_eval(geo_train, a) == pdf_eval(geo_train, -a)
        assert pdf_eval(geo_train, a).lo >= 0


def test_pdf_eval_against_oracle_sum(geo_train, ref):
    a1 = geo_train.alpha_star(1).approx(40)
    for x in (a1 + F(3, 2), a1 + F(5, 2), a1 + F(7, 2)):
        iv = pdf_eval(geo_train, x)
        with mp.workdps(30):
            # bumps beyond the 12th start past x here
            want = mp.fsum(c * oracle.g(_mp(x) - a) for c, a in zip(ref["coef"], ref["alpha"]))
            assert _mp(iv.lo) - mp.mpf(2) ** -30 <= want <= _mp(iv.hi) + mp.mpf(2) ** -30
        # the first bump alone never exceeds the certified value
        assert (geo_train.coef(1, 48) * eval_g(x - a1)).lo <= iv.hi


def test_json_descriptor(geo_train):
    d = geo_train.to_json(40)
    assert d["kind"] == "bump_train" and d["truncation"] == 32 and len(d["bumps"]) == 32
    assert d["shift"] == "2/1"
