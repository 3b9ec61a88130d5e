"""Named certificates, enumerators, channels and single-bump cases.

Every fixture here is computable with known limits, so the pipelines built on
top of them can be checked against exact or independent reference values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .capacity.channel import Channel
from .capacity.theorem1 import build_channel_pair
from .constructions.bumptrain import build_bump_train
from .constructions.mixture import TrapezoidMixture
from .hierarchy import (
    DovetailEnumerator,
    InjectedEnumerator,
    REEnumerator,
    Sigma1Cert,
    SpeckerNumber,
    constant_cert,
    geometric_cert,
)

F = Fraction


def _identity(l: int) -> int:
    return l


def _double(l: int) -> int:
    return 2 * l


CERTS: dict[str, Callable[[], Sigma1Cert]] = {
    "geo-1": lambda: geometric_cert(1, name="geo-1"),
    "geo-1/2": lambda: geometric_cert(F(1, 2), name="geo-1/2"),
    "geo-3": lambda: geometric_cert(3, name="geo-3"),
    "const-1": lambda: constant_cert(1, name="const-1"),
}

# limits of the fixture certificates (the injected oracles)
CERT_LIMITS = {"geo-1": F(1), "geo-1/2": F(1, 2), "geo-3": F(3), "const-1": F(1)}

ENUMERATORS: dict[str, Callable[[], REEnumerator]] = {
    "injected-id": lambda: InjectedEnumerator(_identity, "phi(l)=l"),
    "injected-even": lambda: InjectedEnumerator(_double, "phi(l)=2l"),
    "injected-table": lambda: InjectedEnumerator([3, 1, 4, 5], "3,1,4,5"),
    "dovetail": lambda: DovetailEnumerator(),
}

# (shift, P, sigma^2): whole-line density g(|a| - shift)
SINGLE_BUMPS = (
    (F(0), F(1), F(1)),
    (F(1, 2), F(1), F(1)),
    (F(3), F(10), F(1)),
    (F(7, 4), F(1), F(4)),
    (F(10), F(2), F(3)),
)

# (name, x1, x2, P, sigma1^2, sigma2^2)
TRAIN_CHANNELS = {
    "oracle-1": ("geo-1", "geo-1/2", F(4), F(1), F(2)),
    "sym-1": ("geo-1", "geo-1", F(1), F(1), F(1)),
}

# (name, shift1, shift2, P, sigma1^2, sigma2^2)
BUMP_CHANNELS = {
    "bumps-1": (F(1, 2), F(3), F(1), F(1), F(1)),
}

CHANNEL_NAMES = tuple(TRAIN_CHANNELS) + tuple(BUMP_CHANNELS)


def cert(name: str) -> Sigma1Cert:
    try:
        return CERTS[name]()
    except KeyError:
        raise KeyError(f"unknown certificate fixture {name!r}; have {sorted(CERTS)}") from None


def enumerator(name: str) -> REEnumerator:
    try:
        return ENUMERATORS[name]()
    except KeyError:
        raise KeyError(f"unknown enumerator {name!r}; have {sorted(ENUMERATORS)}") from None


def specker(name: str) -> SpeckerNumber:
    return SpeckerNumber(enumerator(name))


def single_bump(shift) -> TrapezoidMixture:
    return TrapezoidMixture.single(shift)


def channel(name: str, terms: int = 32, P=None, s1=None, s2=None) -> Channel:
    """A fixture channel; P and the noise variances may be overridden."""
    if name in TRAIN_CHANNELS:
        c1, c2, P0, a, b = TRAIN_CHANNELS[name]
        x1 = cert(c1)
        x2 = x1 if c2 == c1 else cert(c2)
        return build_channel_pair(x1, x2, P or P0, s1 or a, s2 or b, terms, name=name)
    if name in BUMP_CHANNELS:
        sh1, sh2, P0, a, b = BUMP_CHANNELS[name]
        return Channel(single_bump(sh1), single_bump(sh2), s1 or a, s2 or b, P or P0, name=name)
    raise KeyError(f"unknown channel fixture {name!r}; have {list(CHANNEL_NAMES)}")


def bump_train(name: str, terms: int = 32, shift=None):
    return build_bump_train(cert(name), terms, shift=shift, name=name)
