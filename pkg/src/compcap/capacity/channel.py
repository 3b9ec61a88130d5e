"""Secrecy-capacity functional with certified truncations.

For a channel (f1, f2, s1, s2, P) the capacity is

    C = int log2(1 + P a^2 / s1) f1(a) da - int log2(1 + P a^2 / s2) f2(a) da.

a_n and b_n are the two integrals restricted to [-n, n]. They are assembled
from unit segments [j, j+1] (both sides by evenness), and each segment's
certified lower endpoint is clipped at 0, so a_n is nondecreasing by
construction and never exceeds the true truncated integral.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..constructions.bump import psi_enclosure
from ..constructions.bumptrain import BumpTrainPdf
from ..constructions.mixture import TrapezoidMixture
from ..elementary import log2_enclosure
from ..exact import DomainError, Q, pow2
from ..hierarchy import Delta2Cert, Sigma1Cert
from ..interval import Interval
from ..quadrature import QuadratureResult
from ..taylor import Ctx, Series

DEFAULT_TOL = pow2(-28)


def capacity_integrand(c: Fraction):
    """Series of log2(1 + c a^2)."""

    def h(ctx: Ctx, X: Interval) -> Series:
        x = ctx.var(X)
        return ctx.log2(ctx.add_const(ctx.scale(ctx.sqr(x), c), 1))

    return h


def gap_integrand(s: Fraction):
    """Series of log2(1 + s / a^2), the difference log2(1 + c a^2) - log2(c a^2) with s = 1/c."""

    def h(ctx: Ctx, X: Interval) -> Series:
        x = ctx.var(X)
        return ctx.log2(ctx.add_const(ctx.scale(ctx.recip(ctx.sqr(x)), s), 1))

    return h


def _log2_hi(x: Fraction) -> Fraction:
    return log2_enclosure(x, 24).hi


# -- pdf adapters ---------------------------------------------------------------


class MixturePdf:
    """A fixed rational mixture (single-bump fixtures)."""

    kind = "mixture"

    def __init__(self, mix: TrapezoidMixture, name: str = ""):
        self.mix = mix
        self.name = name or "mixture"

    def support_lo(self) -> Fraction:
        return self.mix.support()[0]

    def mass(self) -> Interval:
        return self.mix.mass()

    def segment(self, h, j: int, tol: Fraction, h_sup: Fraction) -> QuadratureResult:
        return self.mix.integrate(h, j, j + 1, tol=tol)

    def log_moment_upper(self) -> Fraction:
        return sum((2 * c.hi * psi_enclosure(s, 24).hi for s, c in zip(self.mix.shifts, self.mix.coefs)), Fraction(0))

    def outside_bound(self, k: int, L: Fraction) -> Fraction:
        """Upper bound on int_{|a|>k} log2(1 + c a^2) f, given L >= log2(1 + c).

        Uses log2(1 + c a^2) <= log2(a^2) + log2(1 + c) for |a| >= 1 and the
        whole-line log-moment 2 Psi(shift) of a unit-coefficient bump.
        """
        tot = Fraction(0)
        for s, c in zip(self.mix.shifts, self.mix.coefs):
            if s + 4 > k:
                tot += c.hi * (2 * psi_enclosure(s, 24).hi + L)
        return tot

    def describe(self) -> dict:
        return {"name": self.name, **self.mix.to_json()}


class TrainPdf:
    """A bump-train pdf; segments integrate every bump that reaches them."""

    kind = "bump_train"

    def __init__(self, pdf: BumpTrainPdf, bits: int = 32):
        self.pdf = pdf
        self.bits = bits
        self.name = pdf.name
        self._lock = threading.Lock()
        self._mix: Optional[TrapezoidMixture] = None
        self._n = 0

    def _mixture(self, radius) -> TrapezoidMixture:
        N = self.pdf.covering_terms(radius, self.bits)
        with self._lock:
            if self._mix is None or self._n < N:
                snap = self.pdf.snapshot(max(N, 1), self.bits)
                self._mix, self._n = snap.mixture, N
            return self._mix

    def support_lo(self) -> Fraction:
        return self.pdf.alpha_dyadic(1, self.bits) + 1 - pow2(-self.bits)

    def mass(self) -> Interval:
        return Interval.point(1)

    def segment(self, h, j: int, tol: Fraction, h_sup: Fraction) -> QuadratureResult:
        mix = self._mixture(j + 1)
        eps = pow2(-self.bits)
        r = mix.integrate(h, j, j + 1, tol=tol)
        # bumps near the segment may sit up to eps away from their true position
        near = sum(
            (c.hi for s, c in zip(mix.shifts, mix.coefs) if s + 1 - eps < j + 1 and s + 4 + eps > j),
            Fraction(0),
        )
        e = near * h_sup * eps / 2
        return QuadratureResult(r.enclosure + Interval(-e, e), r.subdivisions, Fraction(j + 1), r.converged)

    def log_moment_upper(self) -> Fraction:
        return Fraction(self.pdf.source.bound) + self.pdf.shift

    def inside_terms(self, k: int) -> int:
        """Number of leading bumps certifiably inside [-k, k]."""
        eps = pow2(-self.bits)
        n = 0
        while self.pdf.alpha_dyadic(n + 1, self.bits) + 4 + eps <= k:
            n += 1
        return n

    def outside_bound(self, k: int, L: Fraction) -> Fraction:
        """Each bump contributes exactly w_n to the log2(a^2) moment."""
        n = self.inside_terms(k)
        return self.pdf.tail_w(n) + L * self.pdf.mass_tail(n)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": "bump_train",
            "source": self.pdf.source.name,
            "shift": f"{self.pdf.shift.numerator}/{self.pdf.shift.denominator}",
        }


PdfLike = Union[MixturePdf, TrainPdf]


def as_pdf(p) -> PdfLike:
    if isinstance(p, (MixturePdf, TrainPdf)):
        return p
    if isinstance(p, TrapezoidMixture):
        return MixturePdf(p)
    if isinstance(p, BumpTrainPdf):
        return TrainPdf(p)
    raise TypeError(f"unsupported pdf type {type(p).__name__}")


# -- channel ----------------------------------------------------------------------


@dataclass
class Channel:
    f1: object
    f2: object
    sigma1_sq: Fraction
    sigma2_sq: Fraction
    P: Fraction
    name: str = ""
    tol: Fraction = DEFAULT_TOL
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.sigma1_sq, self.sigma2_sq, self.P = Q(self.sigma1_sq), Q(self.sigma2_sq), Q(self.P)
        for label, v in (("sigma1_sq", self.sigma1_sq), ("sigma2_sq", self.sigma2_sq), ("P", self.P)):
            if v <= 0:
                raise DomainError(f"{label} must be > 0")
        same = self.f1 is self.f2
        self.f1 = as_pdf(self.f1)
        self.f2 = self.f1 if same else as_pdf(self.f2)
        self._lock = threading.Lock()

    def snr(self, side: int) -> Fraction:
        return self.P / (self.sigma1_sq if side == 1 else self.sigma2_sq)

    def pdf(self, side: int) -> PdfLike:
        return self.f1 if side == 1 else self.f2

    def is_symmetric(self) -> bool:
        return self.f1 is self.f2 and self.sigma1_sq == self.sigma2_sq

    def describe(self) -> dict:
        return {
            "name": self.name,
            "P": _fmt(self.P),
            "sigma1_sq": _fmt(self.sigma1_sq),
            "sigma2_sq": _fmt(self.sigma2_sq),
            "f1": self.f1.describe(),
            "f2": self.f2.describe(),
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


_SEG_CACHE: dict = {}
_SEG_LOCK = threading.Lock()


def capacity_segment(pdf: PdfLike, c: Fraction, j: int, tol: Fraction = DEFAULT_TOL) -> Interval:
    """Enclosure of int_j^{j+1} log2(1 + c a^2) f(a) da (one side).

    Depends on (P, sigma^2) only through c = P / sigma^2, so scaled channels
    share the exact same value.
    """
    key = (id(pdf), "cap", c, j, tol)
    with _SEG_LOCK:
        hit = _SEG_CACHE.get(key)
    if hit is not None:
        return hit[1]
    if j + 1 <= pdf.support_lo():
        enc = Interval.point(0)
    else:
        h_sup = _log2_hi(1 + c * (j + 2) ** 2)
        enc = pdf.segment(capacity_integrand(c), j, tol, h_sup).enclosure
    with _SEG_LOCK:
        _SEG_CACHE[key] = (pdf, enc)  # keep pdf alive so id() stays unique
    return enc


def quad_capacity_term(pdf, P, sigma_sq, radius: int, budget: int = 4000, tol: Fraction = DEFAULT_TOL) -> QuadratureResult:
    """Enclosure of int_{-r}^{r} log2(1 + P a^2 / sigma^2) f(a) da.

    ``budget`` caps the number of unit segments' quadrature subdivisions in
    aggregate; when exceeded the result is flagged ``converged=False``.
    """
    pdf = as_pdf(pdf)
    P, sigma_sq = Q(P), Q(sigma_sq)
    if P <= 0 or sigma_sq <= 0:
        raise DomainError("P and sigma^2 must be > 0")
    c = P / sigma_sq
    acc = Interval.point(0)
    for j in range(0, int(radius)):
        acc = acc + capacity_segment(pdf, c, j, tol)
    enc = acc * 2
    return QuadratureResult(enc, int(radius), Fraction(radius), enc.width <= 2 * int(radius) * tol + pow2(-20))


def truncation_enclosures(ch: Channel, n: int) -> tuple[Interval, Interval]:
    """Enclosures of the truncated integrals a_n, b_n (radius n)."""
    a = quad_capacity_term(ch.f1, ch.P, ch.sigma1_sq, n, tol=ch.tol).enclosure
    b = quad_capacity_term(ch.f2, ch.P, ch.sigma2_sq, n, tol=ch.tol).enclosure
    return a, b


def _lower_cumulative(pdf: PdfLike, c: Fraction, n: int, tol: Fraction) -> Fraction:
    return 2 * sum((max(Fraction(0), capacity_segment(pdf, c, j, tol).lo) for j in range(n)), Fraction(0))


def capacity_truncations(ch: Channel, n: int) -> tuple[Fraction, Fraction]:
    """Certified lower representatives (a_n, b_n); nondecreasing in n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _lower_cumulative(ch.f1, ch.snr(1), n, ch.tol)
    b = _lower_cumulative(ch.f2, ch.snr(2), n, ch.tol)
    return a, b


def outside_radius_bound(ch: Channel, side: int, k: int) -> Fraction:
    c = ch.snr(side)
    L = _log2_hi(1 + c)
    return ch.pdf(side).outside_bound(k, L)


def capacity_enclosure(ch: Channel, k: int) -> Interval:
    """Certified enclosure of C_S from radius k plus the outside-radius bounds."""
    a, b = truncation_enclosures(ch, k)
    ra, rb = outside_radius_bound(ch, 1, k), outside_radius_bound(ch, 2, k)
    return Interval(a.lo - b.hi - rb, a.hi + ra - b.lo)


@dataclass
class CapacityCertificate:
    channel: Channel
    a_seq: Sigma1Cert
    b_seq: Sigma1Cert
    as_delta2: Delta2Cert
    u_correction: Optional[Interval] = None

    def anytime(self, k: int) -> Fraction:
        from ..hierarchy import delta2_anytime

        return delta2_anytime(self.as_delta2, k)

    def trace(self, k_max: int) -> list[tuple[int, Fraction, Fraction, Fraction]]:
        rows = []
        for k in range(1, k_max + 1):
            a, b = self.a_seq.term(k), self.b_seq.term(k)
            rows.append((k, a, b, a - b))
        return rows


def _growth_bound(pdf: PdfLike, c: Fraction) -> int:
    """Natural K with int log2(1 + c a^2) f <= K.

    For |a| >= 1, log2(1 + c a^2) <= log2(1 + c) + log2(a^2).
    """
    v = _log2_hi(1 + c) * pdf.mass().hi + pdf.log_moment_upper()
    return int(v) + 1


def capacity_certificate(ch: Channel) -> CapacityCertificate:
    """Package a_n, b_n as Sigma1 certificates and C_S as their Delta2 difference."""

    def make(side: int) -> Sigma1Cert:
        pdf, c = ch.pdf(side), ch.snr(side)

        def term(k: int) -> Fraction:
            if k <= 0:
                return Fraction(0)
            return _lower_cumulative(pdf, c, k, ch.tol)

        return Sigma1Cert(term, _growth_bound(pdf, c), name=f"{ch.name or 'channel'}.{'ab'[side - 1]}")

    a_seq, b_seq = make(1), make(2)
    if ch.is_symmetric():
        b_seq = a_seq
    return CapacityCertificate(ch, a_seq, b_seq, Delta2Cert(a_seq, b_seq, name=f"C_S[{ch.name}]"))
