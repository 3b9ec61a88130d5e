import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from compcap import fixtures

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


def rationals(st, max_num=10**6, max_den=10**4):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@pytest.fixture(scope="session")
def geo_train():
    return fixtures.bump_train("geo-1", 32)


@pytest.fixture(scope="session")
def oracle_channel():
    return fixtures.channel("oracle-1", 32)


@pytest.fixture(scope="session")
def star_id():
    from compcap.constructions.star import build_star_pdf

    return build_star_pdf(fixtures.enumerator("injected-id"), 64)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
