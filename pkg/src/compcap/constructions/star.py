"""Heavy-tailed density f* whose log-moment is a multiple of a Specker number.

For M >= 4, g_M rises linearly on [2, 3], follows 1/(a log2(a)^2) on [3, M]
and falls linearly to 0 on [M, M+1]. With K_M = int g_M log2 and
I_M = int g_M, the density is

    g*(a) = sum_{M>=4} 2^-phi(M) g_M(a) / K_M,   c2 = int_0^inf g*,
    f*(a) = g*(|a|) / (2 c2),

so 4 int_1^inf log2(a) f*(a) da = (2/c2) sum_M 2^-phi(M).

Every K_M and I_M is assembled from cached unit-interval quadratures: on
[j, j+1] with 3 <= j < M the integrands do not depend on M.

Tail bounds: by injectivity of phi, sum_{M>T} 2^-phi(M) <= 1 - sum_{l<=T} 2^-phi(l).
I_M <= 1/(6 log2(3)^2) + 1/32 + ln(2)^2/ln(3) for all M >= 4, and
K_M >= 1/(6 log2(3)^2) + ln 2 * ln(ln(T+1)/ln 3) for M > T.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from ..creal import CReal, PrecisionCapError
from ..elementary import ln2_enclosure, ln_enclosure, ln_interval, log2_enclosure
from ..exact import DomainError, Q, pow2
from ..hierarchy import EnumerationExhausted, REEnumerator
from ..interval import Interval
from ..quadrature import QuadratureResult, integrate
from ..taylor import Ctx, Series

M_MIN = 4
HSeriesFn = Callable[[Ctx, Interval], Series]


def _log2sq(x, bits: int) -> Interval:
    L = log2_enclosure(x, bits)
    return L.sqr()


def c1_enclosure(bits: int = 48) -> Interval:
    """sup g_M = 1 / (3 log2(3)^2), attained at a = 3."""
    return (Interval.point(3) * _log2sq(3, bits + 8)).reciprocal().round_out(bits)


def eval_gM(M: int, alpha, bits: int = 48) -> Interval:
    if M < M_MIN:
        raise DomainError("g_M needs M >= 4")
    a = Q(alpha)
    if a <= 2 or a >= M + 1:
        return Interval.point(0)
    w = bits + 8
    if a <= 3:
        return ((a - 2) / (Interval.point(3) * _log2sq(3, w))).round_out(bits)
    if a <= M:
        return (Interval.point(1) / (_log2sq(a, w) * a)).round_out(bits)
    return ((M + 1 - a) / (_log2sq(M, w) * M)).round_out(bits)


# -- series pieces -----------------------------------------------------------


def _inv_a_log2sq(ctx: Ctx, X: Interval) -> Series:
    x = ctx.var(X)
    return ctx.recip(ctx.mul(x, ctx.sqr(ctx.log2(x))))


def _inv_a_log2(ctx: Ctx, X: Interval) -> Series:
    x = ctx.var(X)
    return ctx.recip(ctx.mul(x, ctx.log2(x)))


def _log2_var(ctx: Ctx, X: Interval) -> Series:
    return ctx.log2(ctx.var(X))


def _linear(ctx: Ctx, X: Interval, c0: Interval, c1: Interval) -> Series:
    s = ctx.const(c0 + c1 * X)
    s[1] = c1
    return s


def _q(fn, lo, hi, bits: int) -> Interval:
    r = integrate(fn, lo, hi, tol=pow2(-(bits + 2)), budget=20000)
    return r.enclosure


@lru_cache(maxsize=4096)
def _unit_K(j: int, bits: int) -> Interval:
    """int_j^{j+1} 1/(a log2 a) da."""
    return _q(_inv_a_log2, j, j + 1, bits)


@lru_cache(maxsize=4096)
def _unit_I(j: int, bits: int) -> Interval:
    """int_j^{j+1} 1/(a log2(a)^2) da."""
    return _q(_inv_a_log2sq, j, j + 1, bits)


@lru_cache(maxsize=64)
def _head_K(bits: int) -> Interval:
    """int_2^3 (a-2)/(3 log2(3)^2) log2(a) da."""
    inv = (Interval.point(3) * _log2sq(3, bits + 8)).reciprocal()

    def fn(ctx, X):
        return ctx.mul(_linear(ctx, X, inv * -2, inv), _log2_var(ctx, X))

    return _q(fn, 2, 3, bits)


@lru_cache(maxsize=4096)
def _ramp_K(M: int, bits: int) -> Interval:
    """int_M^{M+1} (M+1-a)/(M log2(M)^2) log2(a) da."""
    inv = (_log2sq(M, bits + 8) * M).reciprocal()

    def fn(ctx, X):
        return ctx.mul(_linear(ctx, X, inv * (M + 1), -inv), _log2_var(ctx, X))

    return _q(fn, M, M + 1, bits)


def _head_I(bits: int) -> Interval:
    return (Interval.point(6) * _log2sq(3, bits + 8)).reciprocal().round_out(bits + 4)


def _ramp_I(M: int, bits: int) -> Interval:
    return (Interval.point(2 * M) * _log2sq(M, bits + 8)).reciprocal().round_out(bits + 4)


def KM_enclosure(M: int, bits: int = 40) -> Interval:
    """Certified enclosure of K_M = int_2^{M+1} g_M(a) log2(a) da."""
    if M < M_MIN:
        raise DomainError("K_M needs M >= 4")
    b = bits + max(10, M.bit_length() + 2)
    acc = _head_K(b) + _ramp_K(M, b)
    for j in range(3, M):
        acc = acc + _unit_K(j, b)
    return acc


def IM_enclosure(M: int, bits: int = 40) -> Interval:
    """Certified enclosure of I_M = int g_M."""
    if M < M_MIN:
        raise DomainError("I_M needs M >= 4")
    b = bits + max(10, M.bit_length() + 2)
    acc = _head_I(b) + _ramp_I(M, b)
    for j in range(3, M):
        acc = acc + _unit_I(j, b)
    return acc


def compute_KM(M: int) -> CReal:
    return CReal.from_enclosure(lambda p: KM_enclosure(M, p), name=f"K_{M}")


def KM_lower_tail(T: int, bits: int = 40) -> Fraction:
    """Lower bound on K_M valid for every M > T (T >= 3)."""
    ln3 = ln_enclosure(3, bits)
    lnT = ln_enclosure(T + 1, bits)
    mid = ln2_enclosure(bits) * ln_interval(lnT / ln3, bits)
    return (_head_I(bits).lo + mid.lo) if mid.lo > 0 else _head_I(bits).lo


def IM_upper(bits: int = 40) -> Fraction:
    """Upper bound on I_M valid for every M >= 4."""
    l2 = ln2_enclosure(bits)
    return _head_I(bits).hi + Fraction(1, 32) + (l2.sqr() / ln_enclosure(3, bits)).hi


# -- the density ---------------------------------------------------------------


@dataclass
class StarPdf:
    enumerator: REEnumerator
    truncation: int
    bits: int = 40
    weights: tuple = field(init=False, repr=False)
    c2: Interval = field(init=False)
    tau: Fraction = field(init=False)

    def __post_init__(self):
        T, b = self.truncation, self.bits
        self._lock = threading.Lock()
        self._phi = []
        for l in range(1, T + 1):
            try:
                self._phi.append(self.enumerator.enumerate(l))
            except EnumerationExhausted:
                break
        # coefficient of g_M in g*: 2^-phi(M) / K_M (zero if phi(M) was not produced)
        ws = []
        for M in range(M_MIN, T + 1):
            if M <= len(self._phi):
                ws.append(Interval.point(pow2(-self._phi[M - 1])) / KM_enclosure(M, b))
            else:
                ws.append(Interval.point(0))
        self.weights = tuple(w.round_out(b + 4) for w in ws)
        c2_trunc = Interval.point(0)
        for M, w in zip(range(M_MIN, T + 1), self.weights):
            c2_trunc = c2_trunc + w * IM_enclosure(M, b)
        self.c2_trunc = c2_trunc
        self.tau = self.gstar_l1_tail()
        self.c2 = c2_trunc + Interval(Fraction(0), self.tau)

    # -- tails ---------------------------------------------------------------

    def _t_eff(self) -> int:
        # g_M with M beyond the produced prefix are all in the tail
        return max(3, min(self.truncation, len(self._phi)))

    def specker_tail(self) -> Fraction:
        """Bound on sum_{M > T} 2^-phi(M)."""
        s = sum((pow2(-p) for p in self._phi), Fraction(0))
        return 1 - s

    def gstar_l1_tail(self) -> Fraction:
        """Bound on int_0^inf (g* - g*_T)."""
        return IM_upper(self.bits) * self.specker_tail() / KM_lower_tail(self._t_eff(), self.bits)

    def gstar_sup_tail(self) -> Fraction:
        """Bound on sup (g* - g*_T)."""
        return c1_enclosure(self.bits).hi * self.specker_tail() / KM_lower_tail(self._t_eff(), self.bits)

    def fstar_l1_tail(self) -> Fraction:
        """Bound on the one-sided L1 distance between f* and its truncation."""
        return self.tau / (2 * self.c2.lo)

    # -- evaluation ------------------------------------------------------------

    def weight(self, M: int) -> Interval:
        if M < M_MIN or M > self.truncation:
            return Interval.point(0)
        return self.weights[M - M_MIN]

    def gstar_trunc(self, alpha) -> Interval:
        acc = Interval.point(0)
        for M in range(M_MIN, self.truncation + 1):
            w = self.weight(M)
            if w.hi:
                acc = acc + w * eval_gM(M, alpha, self.bits)
        return acc

    def eval(self, alpha) -> Interval:
        """Enclosure of f*(alpha) (includes the truncation tail)."""
        a = abs(Q(alpha))
        if a <= 2:
            return Interval.point(0)
        g = self.gstar_trunc(a) + Interval(Fraction(0), self.gstar_sup_tail())
        return g / (self.c2 * 2)

    def support(self) -> tuple[Fraction, Fraction]:
        return Fraction(2), Fraction(self.truncation + 1)

    def mass_enclosure(self) -> Interval:
        """Enclosure of int_R f* (truncated mass c2_T/c2 plus the tail)."""
        trunc = self.c2_trunc / self.c2
        return trunc + Interval(Fraction(0), self.tau / self.c2.lo)

    # -- integrals of h * g*_T on unit segments ---------------------------------

    def _segment_series(self, j: int) -> Callable[[Ctx, Interval], Series]:
        T = self.truncation
        if j == 2:
            S = sum(self.weights, Interval.point(0))
            inv = (Interval.point(3) * _log2sq(3, self.bits + 8)).reciprocal() * S

            def g(ctx, X):
                return _linear(ctx, X, inv * -2, inv)

            return g
        S = sum((self.weight(M) for M in range(j + 1, T + 1)), Interval.point(0))
        w = self.weight(j)
        ramp = (w / (_log2sq(j, self.bits + 8) * j)) if (w.hi and j >= M_MIN) else None

        def g(ctx, X):
            s = ctx.scale(_inv_a_log2sq(ctx, X), S)
            if ramp is not None:
                s = ctx.add(s, _linear(ctx, X, ramp * (j + 1), -ramp))
            return s

        return g

    def segment_gstar(self, h: HSeriesFn, j: int, tol: Fraction) -> QuadratureResult:
        """int_j^{j+1} h g*_T for integer j (zero outside [2, T+1])."""
        if j < 2 or j > self.truncation:
            return QuadratureResult(Interval.point(0), 0, Fraction(j + 1), True)
        g = self._segment_series(j)

        def fn(ctx, X):
            return ctx.mul(h(ctx, X), g(ctx, X))

        r = integrate(fn, j, j + 1, tol=tol, budget=4000)
        return QuadratureResult(r.enclosure, r.subdivisions, Fraction(j + 1), r.converged)

    def integrate_fstar(self, h: HSeriesFn, lo: int, hi: int, tol: Fraction = pow2(-30)) -> Interval:
        """int_lo^hi h f*_T for integers 0 <= lo <= hi (one side, c2 in the enclosure)."""
        acc = Interval.point(0)
        for j in range(max(lo, 2), min(hi, self.truncation + 1)):
            acc = acc + self.segment_gstar(h, j, tol).enclosure
        return acc / (self.c2 * 2)

    def log_moment_trunc(self, tol: Fraction = pow2(-30)) -> Interval:
        """4 int_1^inf log2(a) f*_T(a) da by quadrature."""
        return self.integrate_fstar(_log2_var, 1, self.truncation + 1, tol) * 4

    def log_moment_direct(self) -> Interval:
        """(2/c2) sum_{4<=M<=T} 2^-phi(M), by direct summation."""
        s = sum((pow2(-self._phi[M - 1]) for M in range(M_MIN, min(self.truncation, len(self._phi)) + 1)), Fraction(0))
        return Interval.point(2 * s) / self.c2

    def to_json(self) -> dict:
        return {
            "kind": "star",
            "enumerator": self.enumerator.describe(),
            "truncation": self.truncation,
            "precision_bits": self.bits,
            "phi_prefix": self._phi,
            "c2": self.c2.to_json(),
            "tail_bound": f"{self.tau.numerator}/{self.tau.denominator}",
            "mass_enclosure": self.mass_enclosure().to_json(),
            "support": [2, self.truncation + 1],
        }


def build_star_pdf(r: REEnumerator, truncation: int, *, bits: int = 40, tail_max: Optional[Fraction] = None) -> StarPdf:
    """Truncated f* for the enumeration r.

    With ``tail_max`` set, raises PrecisionCapError when the certified L1 tail
    of g* exceeds it.
    """
    if truncation < 5:
        raise DomainError("truncation must be >= 5")
    p = StarPdf(r, truncation, bits)
    if tail_max is not None and p.tau > Q(tail_max):
        raise PrecisionCapError(f"truncation {truncation} leaves L1 tail {float(p.tau):.3g}", 0)
    return p
