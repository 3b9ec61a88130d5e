from .channel import Channel, capacity_certificate, capacity_enclosure, capacity_truncations, quad_capacity_term
from .lemma2 import Lemma2Run, lemma2_x
from .montecarlo import mc_estimate, sample_inverse_cdf
from .theorem1 import Theorem1Report, theorem1_check

__all__ = [
    "Channel",
    "Lemma2Run",
    "Theorem1Report",
    "capacity_certificate",
    "capacity_enclosure",
    "capacity_truncations",
    "lemma2_x",
    "mc_estimate",
    "quad_capacity_term",
    "sample_inverse_cdf",
    "theorem1_check",
]
