"""Decomposition C_S = x + u(P) for two bump-train densities.

Splitting log2(1 + c a^2) = log2(c) + log2(a^2) + log2(1 + 1/(c a^2)) gives

    C_S = (LM_1 - LM_2) + (z_1 - z_2),
    z_i = log2(P / s_i) + int log2(1 + s_i / (P a^2)) f_i(a) da,

where LM_i is the log2(a^2)-moment of f_i. With a common shift c, LM_1 - LM_2
= x1 - x2 = x, so u(P) = z_1 - z_2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..constructions.bumptrain import auto_shift, build_bump_train, log_moment
from ..elementary import log2_enclosure
from ..exact import Q
from ..hierarchy import Sigma1Cert, delta2_anytime
from ..interval import Interval
from .channel import Channel, TrainPdf, capacity_certificate, capacity_enclosure, gap_integrand


def z_enclosure(pdf: TrainPdf, P: Fraction, sigma_sq: Fraction, radius: int, tol: Fraction) -> Interval:
    s = sigma_sq / P
    h = gap_integrand(s)
    acc = Interval.point(0)
    for j in range(1, radius):
        h_sup = log2_enclosure(1 + 2 * s / (j * j), 24).hi
        acc = acc + pdf.segment(h, j, tol, h_sup).enclosure
    # outside the radius: h <= log2(1 + s / R^2) and at most the mass of bumps not inside
    n_in = pdf.inside_terms(radius)
    out = log2_enclosure(1 + s / (radius * radius), 24).hi * pdf.pdf.mass_tail(n_in)
    return log2_enclosure(P / sigma_sq, 40) + acc * 2 + Interval(Fraction(0), out)


def u_enclosure(ch: Channel, radius: int) -> Interval:
    z1 = z_enclosure(ch.f1, ch.P, ch.sigma1_sq, radius, ch.tol)
    if ch.is_symmetric():
        return Interval.point(0)
    z2 = z_enclosure(ch.f2, ch.P, ch.sigma2_sq, radius, ch.tol)
    return z1 - z2


def x_enclosure(ch: Channel, radius: int) -> Interval:
    """Enclosure of x1 - x2 from quadrature log-moments of the two densities."""
    parts = []
    for side in (1, 2):
        tp: TrainPdf = ch.pdf(side)
        n = max(1, tp.inside_terms(radius))
        lm = log_moment(tp.pdf, n, bits=tp.bits)
        parts.append(lm + Interval(Fraction(0), tp.pdf.tail_w(n)) - tp.pdf.shift)
    if ch.is_symmetric():
        return Interval.point(0)
    return parts[0] - parts[1]


@dataclass(frozen=True)
class Theorem1Report:
    k: int
    shift: Fraction
    capacity_anytime: Fraction
    capacity_enclosure: Interval
    x_estimate: Fraction
    x_enclosure: Interval
    u_from_capacity: Fraction
    u_direct: Interval
    residual: Fraction
    error_bound: Fraction

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.error_bound

    def to_json(self) -> dict:
        f = lambda q: f"{q.numerator}/{q.denominator}"
        return {
            "k": self.k,
            "shift": f(self.shift),
            "capacity_anytime": f(self.capacity_anytime),
            "capacity_enclosure": self.capacity_enclosure.to_json(),
            "x_estimate": f(self.x_estimate),
            "x_enclosure": self.x_enclosure.to_json(),
            "u_from_capacity": f(self.u_from_capacity),
            "u_direct": self.u_direct.to_json(),
            "residual": f(self.residual),
            "error_bound": f(self.error_bound),
            "passed": self.passed,
        }


def build_channel_pair(x1: Sigma1Cert, x2: Sigma1Cert, P, s1, s2, terms: int, name: str = "") -> Channel:
    """Two bump trains sharing one shift (so the log-moment difference is x1 - x2)."""
    if x1 is x2:
        p = build_bump_train(x1, terms)
        return Channel(p, p, s1, s2, P, name=name)
    c = max(auto_shift(x1, terms), auto_shift(x2, terms))
    p1 = build_bump_train(x1, terms, shift=c)
    p2 = build_bump_train(x2, terms, shift=c)
    return Channel(p1, p2, s1, s2, P, name=name)


def theorem1_check(
    x1: Sigma1Cert,
    x2: Sigma1Cert,
    P,
    s1,
    s2,
    k: int,
    *,
    channel: Optional[Channel] = None,
) -> Theorem1Report:
    ch = channel or build_channel_pair(x1, x2, Q(P), Q(s1), Q(s2), terms=k)
    cert = capacity_certificate(ch)
    cap = delta2_anytime(cert.as_delta2, k)
    cap_enc = capacity_enclosure(ch, k)
    if ch.is_symmetric():
        xe = Interval.point(0)
        ue = Interval.point(0)
    else:
        xe = x_enclosure(ch, k)
        ue = u_enclosure(ch, k)
    x_est = xe.mid
    u_cap = cap - x_est
    residual = u_cap - ue.mid
    # C = x + u exactly, so residual = (cap - C) - (x_est - x) - (u_mid - u)
    cap_err = max(cap - cap_enc.lo, cap_enc.hi - cap)
    bound = cap_err + xe.width / 2 + ue.width / 2
    return Theorem1Report(k, ch.f1.pdf.shift, cap, cap_enc, x_est, xe, u_cap, ue, residual, bound)
