"""Certified numerics for fading-channel secrecy capacities built from limit-computable reals."""

__version__ = "0.1.0"

from .creal import CReal, PrecisionCapError, effective_limit
from .exact import DomainError, Q
from .hierarchy import (
    Delta2Cert,
    DovetailEnumerator,
    InjectedEnumerator,
    Pi1Cert,
    Sigma1Cert,
    SpeckerNumber,
    delta2_anytime,
    re_enumerate,
    sigma1_partial,
    sigma1_shift,
    specker_partial,
)
from .interval import Interval

__all__ = [
    "CReal",
    "Delta2Cert",
    "DomainError",
    "DovetailEnumerator",
    "InjectedEnumerator",
    "Interval",
    "Pi1Cert",
    "PrecisionCapError",
    "Q",
    "Sigma1Cert",
    "SpeckerNumber",
    "delta2_anytime",
    "effective_limit",
    "re_enumerate",
    "sigma1_partial",
    "sigma1_shift",
    "specker_partial",
]
