"""Effective convergence of the high-SNR gap for the heavy-tailed density f*.

x_m = int_1^m log2(1 + s / a^2) f*(a) da with s = sigma^2 / P. The integrand
is nonnegative and at most s / (a^2 ln 2), which gives the effective rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..constructions.star import StarPdf
from ..creal import CReal, CSeq, ModulusFn, PrecisionCapError, effective_limit
from ..elementary import log2_enclosure
from ..exact import DomainError, Q, ceil_log2, pow2
from ..interval import Interval
from .channel import gap_integrand

DEFAULT_TOL = pow2(-30)


@dataclass
class Lemma2Run:
    star: StarPdf
    P: Fraction
    sigma_sq: Fraction
    m_max: int = 256
    tol: Fraction = DEFAULT_TOL
    segs: list = field(init=False, repr=False)

    def __post_init__(self):
        self.P, self.sigma_sq = Q(self.P), Q(self.sigma_sq)
        if self.P <= 0 or self.sigma_sq <= 0:
            raise DomainError("P and sigma^2 must be > 0")
        self.s = self.sigma_sq / self.P
        h = gap_integrand(self.s)
        denom = self.star.c2 * 2
        # segs[j] encloses int_j^{j+1} h f*_T
        self.segs = [Interval.point(0)] * self.m_max
        for j in range(2, min(self.m_max, self.star.truncation + 1)):
            self.segs[j] = self.star.segment_gstar(h, j, self.tol).enclosure / denom
        # h <= log2(1 + s/4) wherever f* lives
        self.trunc_err = log2_enclosure(1 + self.s / 4, 24).hi * self.star.fstar_l1_tail()

    def x_lower(self, m: int) -> Fraction:
        """Certified lower representative of x_m (nondecreasing in m)."""
        if m < 1 or m > self.m_max:
            raise ValueError("m out of range")
        return sum((max(Fraction(0), self.segs[j].lo) for j in range(1, m)), Fraction(0))

    def x_upper(self, m: int) -> Fraction:
        return sum((self.segs[j].hi for j in range(1, m)), Fraction(0)) + self.trunc_err

    def tail_beyond(self, m: int) -> Fraction:
        """Bound on int_m^inf h f* (one side of f* has mass 1/2)."""
        return log2_enclosure(1 + self.s / (m * m), 24).hi / 2

    def gap_upper(self, m: int) -> Fraction:
        """Certified upper bound on x_* - x_m, via x_{m_max} and its tail."""
        return self.x_upper(self.m_max) + self.tail_beyond(self.m_max) - self.x_lower(m)

    def rate_bound(self, m: int) -> Fraction:
        return self.s / m

    def as_creal(self) -> CReal:
        """x_* as an effective limit with modulus from the s/m bound."""
        s = self.s

        def approx2(mprec: int, m: int) -> Fraction:
            m = max(2, min(m, self.m_max))
            lo, hi = self.x_lower(m), self.x_upper(m)
            if hi - lo > pow2(-mprec):
                raise PrecisionCapError("x_m enclosure too wide", max(0, -ceil_log2(hi - lo)))
            return lo

        def e(N: int) -> int:
            # x_* - x_m < s/m, and m_max caps what is available
            m = int(s * (1 << N)) + 1
            if m > self.m_max:
                raise PrecisionCapError("Lemma-2 limit needs m beyond m_max", max(0, -ceil_log2(s / self.m_max)))
            return m

        return effective_limit(CSeq(approx2, name="x_m"), ModulusFn(e, name="s/m"), name="x*")


def lemma2_x(pdf_star: StarPdf, P, sigma_sq, m: int, m_max: int = 256) -> Fraction:
    if m <= 1:
        raise DomainError("m must be > 1")
    return Lemma2Run(pdf_star, P, sigma_sq, max(m_max, m)).x_lower(m)
