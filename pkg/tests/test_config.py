from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from compcap.config import ConfigError, RunConfig, parse_config_text, parse_value

GOOD = """\
[run]
schema_version = 1
channel = oracle-1
P = 4
sigma1_sq = 1/2
k = 8
timestamp = no
"""


def test_parse_good():
    cfg = parse_config_text(GOOD)
    assert cfg.P == 4 and cfg.sigma1_sq == Fraction(1, 2) and cfg.k == 8
    assert cfg.timestamp is False


@pytest.mark.parametrize(
    "text,field,line",
    [
        ("[run]\nschema_version = 1\nk = 0\n", "k", 3),
        ("[run]\nschema_version = 1\n\nP = -1\n", "P", 4),
        ("[run]\nschema_version = 1\nbogus = 3\n", "bogus", 3),
        ("[run]\nschema_version = 1\nterms = many\n", "terms", 3),
        ("[run]\nschema_version = 2\n", "schema_version", 2),
        ("[run]\nk = 3\n", "schema_version", None),
    ],
)
def test_diagnostics(text, field, line):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text)
    assert err.value.field == field
    assert err.value.line == line
    if line is not None:
        assert str(err.value).startswith(f"line {line}:")


def test_missing_section():
    with pytest.raises(ConfigError):
        parse_config_text("schema_version = 1\n")


def test_digest_ignores_presentation():
    a = RunConfig(k=8)
    b = RunConfig(k=8, out="x.csv", format="csv", threads=4, timestamp=False)
    assert a.digest == b.digest
    assert a.digest != RunConfig(k=9).digest
    assert a.digest != RunConfig(k=8, seed=1).digest


def test_overrides_win():
    cfg = parse_config_text(GOOD).merged({"k": 12, "P": None})
    assert cfg.k == 12 and cfg.P == 4


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_rational_roundtrip(p, q):
    assert parse_value("P", f"{p}/{q}") == Fraction(p, q)
