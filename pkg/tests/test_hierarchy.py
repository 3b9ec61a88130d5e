from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compcap import fixtures
from compcap.exact import pow2
from compcap.hierarchy import (
    Delta2Cert,
    DovetailEnumerator,
    EnumerationExhausted,
    InjectedEnumerator,
    SpeckerNumber,
    check_monotone,
    constant_cert,
    delta2_anytime,
    geometric_cert,
    load_machine_table,
    re_enumerate,
    sigma1_partial,
    sigma1_shift,
    specker_partial,
)
from compcap.verify import load_golden

F = Fraction


def test_sigma1_partial_examples():
    assert sigma1_partial(geometric_cert(1), 3) == F(7, 8)
    z = constant_cert(0)
    assert all(sigma1_partial(z, k) == 0 for k in range(20))


def test_specker_cert_matches_direct_sum():
    en = fixtures.enumerator("injected-even")
    cert = SpeckerNumber(en).as_sigma1()
    assert sigma1_partial(cert, 16) == sum(F(1, 2 ** (2 * l)) for l in range(1, 17))


def test_specker_partial_examples():
    assert specker_partial(SpeckerNumber(fixtures.enumerator("injected-id")), 3) == F(7, 8)
    assert specker_partial(SpeckerNumber(fixtures.enumerator("injected-even")), 2) == F(5, 16)
    with pytest.raises(ValueError):
        specker_partial(SpeckerNumber(fixtures.enumerator("injected-id")), 0)


def test_specker_dovetail_golden():
    s = SpeckerNumber(DovetailEnumerator())
    want = load_golden("specker_dovetail_k10.json")
    prev = F(0)
    for row in want["rows"]:
        v = specker_partial(s, row["l"])
        assert f"{v.numerator}/{v.denominator}" == row["partial_sum"]["exact"]
        assert prev < v < 1
        prev = v


def test_re_enumerate_examples():
    assert re_enumerate(InjectedEnumerator([3, 1, 4, 5]), 2) == 1
    d = DovetailEnumerator()
    assert re_enumerate(d, 1) == re_enumerate(d, 1)
    assert re_enumerate(DovetailEnumerator(), 1) == re_enumerate(d, 1)


def test_enumerations_start_at_one():
    with pytest.raises(ValueError):
        re_enumerate(DovetailEnumerator(), 0)


def test_injected_table_must_be_injective():
    with pytest.raises(ValueError):
        InjectedEnumerator([1, 2, 1])
    with pytest.raises(EnumerationExhausted):
        InjectedEnumerator([1, 2]).enumerate(3)


def test_dovetail_prefix_distinct():
    p = DovetailEnumerator().prefix(100)
    assert len(set(p)) == 100 and min(p) >= 1


def test_dovetail_content_hash_is_table_hash():
    _, h = load_machine_table()
    assert DovetailEnumerator().content_hash == h


def test_dovetail_budget_exhaustion():
    d = DovetailEnumerator(max_stage=20)
    with pytest.raises(EnumerationExhausted):
        d.prefix(10_000)


def test_independent_cursors():
    en = fixtures.enumerator("dovetail")
    a, b = en.cursor(), en.cursor()
    xs = [next(a) for _ in range(5)]
    assert [next(b) for _ in range(5)] == xs


def test_delta2_examples():
    a = geometric_cert(1)
    assert all(delta2_anytime(Delta2Cert(a, a), k) == 0 for k in range(30))
    b = Delta2Cert(geometric_cert(1), sigma1_shift(geometric_cert(1), F(-1, 2)))
    assert all(delta2_anytime(b, k) == F(1, 2) for k in range(30))


def test_sigma1_shift_examples():
    a = geometric_cert(1)
    assert all(sigma1_shift(a, 0).term(k) == a.term(k) for k in range(10))
    assert sigma1_shift(a, 1).term(5) == 2 - pow2(-5)
    sp = sigma1_shift(SpeckerNumber(fixtures.enumerator("dovetail")).as_sigma1(), F(3, 2))
    assert check_monotone(sp.term, 300) is None
    assert all(sp.term(k) <= sp.bound for k in (0, 10, 300)) and sp.bound == 3


@pytest.mark.parametrize("name", sorted(fixtures.CERTS))
def test_fixture_certs_monotone_and_bounded(name):
    c = fixtures.cert(name)
    assert check_monotone(c.term, 2048) is None
    assert all(c.term(k) <= c.bound for k in range(0, 2049, 64))
    assert c.term(2048) <= fixtures.CERT_LIMITS[name]


@pytest.mark.parametrize("name", ["injected-id", "injected-even", "dovetail"])
def test_specker_certs_monotone_and_bounded(name):
    c = SpeckerNumber(fixtures.enumerator(name)).as_sigma1()
    assert check_monotone(c.term, 2048) is None
    assert c.term(2048) < 1


def test_specker_cert_saturates_after_budget():
    c = SpeckerNumber(DovetailEnumerator(max_stage=40)).as_sigma1()
    vals = [c.term(k) for k in range(0, 200)]
    assert vals == sorted(vals) and vals[-1] == vals[-2]


@given(st.fractions(min_value=-10, max_value=10), st.integers(0, 256))
def test_delta2_common_shift_invariance(u, k):
    a, b = fixtures.cert("geo-1"), SpeckerNumber(fixtures.enumerator("injected-even")).as_sigma1()
    d = Delta2Cert(a, b)
    ds = Delta2Cert(sigma1_shift(a, u), sigma1_shift(b, u))
    assert delta2_anytime(ds, k) == delta2_anytime(d, k)


@given(st.lists(st.integers(1, 4096), min_size=1, max_size=60, unique=True))
def test_injected_specker_brute_force(table):
    s = SpeckerNumber(InjectedEnumerator(table))
    assert s.partial(len(table)) == sum(F(1, 2**p) for p in table)
