"""Monte-Carlo cross-check of the capacity integrals.

Samples |a| by inverting the exact piecewise-quadratic CDF of a bump mixture.
Uniforms come from Philox-4x64 with key (seed, 0) and counter (0, 0, 0, batch):
batch b always sees the same stream, so results do not depend on how batches
are scheduled across threads. Batch statistics are merged in batch order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..constructions.bumptrain import BumpTrainPdf
from ..constructions.mixture import TrapezoidMixture
from ..exact import DomainError, Q
from .channel import MixturePdf, TrainPdf

BATCH = 1 << 16
TAIL_MAX = Fraction(1, 10**6)
_KEY_TAG = 0x636F6D7063617021


@dataclass(frozen=True)
class MCResult:
    mean: float
    ci95: float
    stderr: float
    samples: int
    seed: int

    def agrees_with(self, value: float, k: float = 3.0) -> bool:
        return abs(self.mean - value) <= k * self.stderr

    def to_json(self) -> dict:
        return {"mean": repr(self.mean), "ci95": repr(self.ci95), "stderr": repr(self.stderr),
                "samples": self.samples, "seed": self.seed}


def _mixture_of(pdf) -> TrapezoidMixture:
    if isinstance(pdf, MixturePdf):
        return pdf.mix
    if isinstance(pdf, TrainPdf):
        pdf = pdf.pdf
    if isinstance(pdf, TrapezoidMixture):
        return pdf
    if isinstance(pdf, BumpTrainPdf):
        if pdf.mass_tail(pdf.terms) > TAIL_MAX:
            raise DomainError("truncated pdf tail exceeds 1e-6; refusing to sample")
        return pdf.snapshot(pdf.terms).mixture
    raise TypeError(f"unsupported pdf type {type(pdf).__name__}")


def batch_uniforms(seed: int, batch: int, n: int) -> np.ndarray:
    bg = np.random.Philox(key=[seed & (2**64 - 1), _KEY_TAG], counter=[0, 0, 0, batch])
    return np.random.Generator(bg).random(n)


def _batch_stats(mix: TrapezoidMixture, c: float, seed: int, batch: int, n: int) -> tuple[int, float, float]:
    u = batch_uniforms(seed, batch, n)
    a = mix.sample_abs(u)
    v = np.log2(1.0 + c * a * a)
    m = float(v.mean())
    return n, m, float(((v - m) ** 2).sum())


def mc_estimate(pdf, P, sigma_sq, samples: int, seed: int, threads: int = 1) -> MCResult:
    """Mean of log2(1 + P a^2 / sigma^2) under the pdf, with a normal 95% interval."""
    if samples <= 0:
        raise DomainError("samples must be > 0")
    P, sigma_sq = Q(P), Q(sigma_sq)
    if P <= 0 or sigma_sq <= 0:
        raise DomainError("P and sigma^2 must be > 0")
    mix = _mixture_of(pdf)
    c = float(P / sigma_sq)
    sizes = [BATCH] * (samples // BATCH)
    if samples % BATCH:
        sizes.append(samples % BATCH)
    jobs = [(mix, c, seed, b, n) for b, n in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            stats = list(ex.map(lambda j: _batch_stats(*j), jobs))
    else:
        stats = [_batch_stats(*j) for j in jobs]
    # Chan et al. pairwise merge, in batch order
    n_tot, mean, m2 = 0, 0.0, 0.0
    for n, m, s2 in stats:
        delta = m - mean
        tot = n_tot + n
        mean += delta * n / tot
        m2 += s2 + delta * delta * n_tot * n / tot
        n_tot = tot
    var = m2 / (n_tot - 1) if n_tot > 1 else 0.0
    se = math.sqrt(var / n_tot)
    return MCResult(mean, 1.96 * se, se, n_tot, seed)


def sample_inverse_cdf(pdf, u, bits: int = 48) -> Fraction:
    """|a| with CDF(|a|) = u for u in [0, 1)."""
    return _mixture_of(pdf).sample_inverse_cdf(u, bits)
