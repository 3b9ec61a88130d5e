"""Even densities built from finitely many shifted copies of the bump g.

``f(a) = sum_k coef_k * g(|a| - shift_k)`` with rational shifts >= 0 and
interval coefficients. This is the finite, exactly representable object behind
every truncated bump-train pdf and behind the single-bump test fixtures.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from ..exact import DomainError, Q, pow2
from ..interval import Interval
from ..quadrature import QuadratureResult, integrate
from ..taylor import Ctx, Series
from .bump import G_KNOTS, G_PIECES, eval_g

HSeriesFn = Callable[[Ctx, Interval], Series]


@dataclass(frozen=True)
class TrapezoidMixture:
    shifts: tuple
    coefs: tuple

    def __post_init__(self):
        if len(self.shifts) != len(self.coefs):
            raise ValueError("shifts and coefs differ in length")
        if any(s < 0 for s in self.shifts):
            raise DomainError("bump shifts must be >= 0")
        if any(c.lo < 0 for c in self.coefs):
            raise DomainError("bump coefficients must be >= 0")
        if list(self.shifts) != sorted(self.shifts):
            raise ValueError("shifts must be sorted")

    @classmethod
    def build(cls, shifts: Sequence, coefs: Sequence) -> "TrapezoidMixture":
        pairs = sorted(zip((Q(s) for s in shifts), (c if isinstance(c, Interval) else Interval.point(c) for c in coefs)),
                       key=lambda p: p[0])
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def single(cls, shift, coef=1) -> "TrapezoidMixture":
        """One bump; with coef=1 this is a probability density."""
        return cls.build([shift], [coef])

    def __len__(self) -> int:
        return len(self.shifts)

    # -- pointwise ---------------------------------------------------------

    def eval(self, alpha) -> Interval:
        x = abs(Q(alpha))
        acc = Interval.point(0)
        for s, c in zip(self.shifts, self.coefs):
            if s + 1 < x < s + 4:
                acc = acc + c * eval_g(x - s)
        return acc

    def mass(self) -> Interval:
        """Integral over the whole line: each bump carries coef * 2 * 1/2."""
        return sum(self.coefs, Interval.point(0))

    def support(self) -> tuple[Fraction, Fraction]:
        """Smallest [lo, hi] on the positive axis outside which f vanishes."""
        if not self.shifts:
            return Fraction(0), Fraction(0)
        return self.shifts[0] + 1, self.shifts[-1] + 4

    def knots(self) -> list[Fraction]:
        return sorted({s + k for s in self.shifts for k in G_KNOTS})

    def active(self, x: Fraction) -> list[int]:
        """Indices of bumps whose open support contains x."""
        hi = bisect.bisect_left(self.shifts, x - 1)
        lo = bisect.bisect_right(self.shifts, x - 4)
        return [k for k in range(lo, hi) if self.shifts[k] + 1 < x < self.shifts[k] + 4]

    def linear_coeffs(self, x: Fraction) -> tuple[Interval, Interval]:
        """(A, B) with f(t) = A + B t on the smooth piece containing x (x > 0, not a knot)."""
        A = Interval.point(0)
        B = Interval.point(0)
        for k in self.active(x):
            s, c = self.shifts[k], self.coefs[k]
            for lo, hi, c0, c1 in G_PIECES:
                if lo <= x - s <= hi:
                    # c * (c0 + c1 (t - s))
                    A = A + c * (c0 - c1 * s)
                    B = B + c * c1
                    break
        return A, B

    def series(self, ctx: Ctx, X: Interval) -> Optional[Series]:
        A, B = self.linear_coeffs(X.mid)
        if A.is_point() and A.lo == 0 and B.is_point() and B.lo == 0:
            return None
        s = ctx.const(A + B * X)
        if ctx.order >= 1:
            s[1] = B
        return s

    # -- integrals ---------------------------------------------------------

    def integrate(
        self,
        h: HSeriesFn,
        lo,
        hi,
        *,
        tol: Fraction = pow2(-30),
        budget: int = 4000,
        order: int = 8,
    ) -> QuadratureResult:
        """Certified enclosure of int_lo^hi h(a) f(a) da for 0 <= lo <= hi."""
        lo, hi = Q(lo), Q(hi)
        if lo < 0 or hi < lo:
            raise DomainError("integration range must satisfy 0 <= lo <= hi")
        s_lo, s_hi = self.support()
        a, b = max(lo, s_lo), min(hi, s_hi)
        if not self.shifts or a >= b:
            return QuadratureResult(Interval.point(0), 0, hi, True)

        def fn(ctx: Ctx, X: Interval) -> Series:
            f = self.series(ctx, X)
            if f is None:
                return ctx.const(0)
            return ctx.mul(h(ctx, X), f)

        r = integrate(fn, a, b, knots=self.knots(), tol=tol, budget=budget, order=order)
        return QuadratureResult(r.enclosure, r.subdivisions, hi, r.converged)

    # -- sampling (|a| has density 2 f / mass) -----------------------------

    def segments(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction, Fraction]]:
        """Exact CDF pieces of |a| using coefficient midpoints.

        Returns (x0, x1, A, B, F0): on [x0, x1] the density of |a| is
        (A + B t) and the CDF at x0 is F0. Densities are normalised to mass 1.
        """
        mids = [c.mid for c in self.coefs]
        total = sum(mids)
        if total <= 0:
            raise DomainError("mixture has zero mass")
        pts = self.knots()
        out = []
        F = Fraction(0)
        for x0, x1 in zip(pts, pts[1:]):
            xm = (x0 + x1) / 2
            A = B = Fraction(0)
            for k in self.active(xm):
                s = self.shifts[k]
                for plo, phi, c0, c1 in G_PIECES:
                    if plo <= xm - s <= phi:
                        A += 2 * mids[k] * (c0 - c1 * s) / total
                        B += 2 * mids[k] * c1 / total
                        break
            out.append((x0, x1, A, B, F))
            F += A * (x1 - x0) + B * (x1 * x1 - x0 * x0) / 2
        return out

    def cdf_abs(self, x) -> Fraction:
        x = Q(x)
        F = Fraction(0)
        for x0, x1, A, B, F0 in self.segments():
            if x <= x0:
                return F0
            if x < x1:
                return F0 + A * (x - x0) + B * (x * x - x0 * x0) / 2
            F = F0 + A * (x1 - x0) + B * (x1 * x1 - x0 * x0) / 2
        return F

    def sample_inverse_cdf(self, u, bits: int = 48) -> Fraction:
        """|a| with CDF(|a|) = u, to within 2**-bits (exact on linear CDF pieces)."""
        u = Q(u)
        if not 0 <= u < 1:
            raise DomainError("u must lie in [0, 1)")
        segs = self.segments()
        for x0, x1, A, B, F0 in segs:
            F1 = F0 + A * (x1 - x0) + B * (x1 * x1 - x0 * x0) / 2
            if u < F1 or (x0, x1) == segs[-1][:2]:
                break
        if u <= F0:
            return x0
        r = u - F0
        if B == 0:
            if A == 0:
                return x0
            return x0 + r / A
        # CDF is monotone on the piece: bisection on exact rationals
        lo, hi = x0, x1
        step = pow2(-bits)
        while hi - lo > step:
            m = (lo + hi) / 2
            if A * (m - x0) + B * (m * m - x0 * x0) / 2 < r:
                lo = m
            else:
                hi = m
        return (lo + hi) / 2

    def sample_abs(self, u: np.ndarray) -> np.ndarray:
        """Vectorised float inverse CDF of |a| (for Monte-Carlo)."""
        segs = self.segments()
        x0 = np.array([float(s[0]) for s in segs])
        A = np.array([float(s[2]) for s in segs])
        B = np.array([float(s[3]) for s in segs])
        F0 = np.array([float(s[4]) for s in segs])
        idx = np.clip(np.searchsorted(F0, u, side="right") - 1, 0, len(segs) - 1)
        a, b, xs = A[idx], B[idx], x0[idx]
        r = u - F0[idx]
        # solve (b/2) t^2 + (a + b xs) t - r = 0 for t = x - xs >= 0
        p = a + b * xs
        disc = np.maximum(p * p + 2 * b * r, 0.0)
        denom = p + np.sqrt(disc)  # cancellation-free root; also covers b == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom > 0, 2 * r / denom, 0.0)
        return xs + t

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": "mixture",
            "bumps": [{"shift": f"{s.numerator}/{s.denominator}", "coef": c.to_json()} for s, c in zip(self.shifts, self.coefs)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "TrapezoidMixture":
        from ..exact import parse_rational

        return cls.build([parse_rational(b["shift"]) for b in d["bumps"]], [Interval.from_json(b["coef"]) for b in d["bumps"]])
