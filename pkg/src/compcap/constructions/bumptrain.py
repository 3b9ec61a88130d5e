"""Bump-train fading densities whose log-moment encodes a Sigma1 real.

Given a monotone certificate x1 with increments d_n, the density is

    f(a) = (1/z*) sum_n w_n / M(n) * g(|a| - alpha_n),
    z*   = sum_n w_n / M(n),
    alpha_n = Phi(z* M(n) / 2),

with w_n = d_n except w_1 = d_1 + shift. The choice of alpha_n makes every
bump contribute exactly w_n to int log2(a^2) f(a) da, so the whole-line
log-moment is x1 + shift. A positive shift is what makes alpha_1 exist when
x1 is small (z* M(1) / 2 must reach Psi(0)); ``shift=None`` picks the smallest
integer that provably suffices.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from ..creal import CReal, CSeq, ModulusFn, PrecisionCapError, effective_limit
from ..exact import DomainError, Q, ceil_log2, dyadic_round, pow2
from ..hierarchy import Sigma1Cert
from ..interval import Interval
from ..quadrature import QuadratureResult
from ..taylor import Ctx, Series
from .bump import eval_g, moment_enclosure, phi, psi_enclosure
from .mixture import TrapezoidMixture

M_MAX = 4096
TailFn = Callable[[int], Fraction]


def _log2_floor_int(n: int) -> int:
    return n.bit_length() - 1


@dataclass
class BumpTrainPdf:
    source: Sigma1Cert
    terms: int
    shift: Fraction
    tail_decay: Optional[TailFn] = None
    m_max: int = M_MAX
    name: str = ""
    zstar: CReal = field(init=False, repr=False)

    def __post_init__(self):
        self._lock = threading.Lock()
        self._alpha: dict[int, CReal] = {}
        self._wmax = Fraction(self.source.bound) + self.shift
        seq = CSeq(self._zstar_partial, name="z*-partials")
        self.zstar = effective_limit(seq, ModulusFn(self._zstar_modulus, name="z*-tail"), name="z*")

    # -- weights -----------------------------------------------------------

    def d(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError("d(n) is defined for n >= 1")
        return self.source.term(n) - self.source.term(n - 1)

    def w(self, n: int) -> Fraction:
        return self.d(n) + (self.shift if n == 1 else 0)

    def tail_w(self, M: int) -> Fraction:
        """Upper bound on sum_{n > M} w_n."""
        generic = Fraction(self.source.bound) - self.source.term(M)
        if self.tail_decay is None:
            return generic
        return min(generic, Q(self.tail_decay(M)))

    # -- z* ----------------------------------------------------------------

    def _zstar_partial(self, m: int, k: int) -> Fraction:
        """sum_{n<=k} w_n / M(n) to within 2**-m."""
        if k == 0:
            return Fraction(0)
        wb = m + 2 + ceil_log2(Fraction(k)) + max(0, ceil_log2(self._wmax + 1))
        acc = Interval.point(0)
        for n in range(1, k + 1):
            acc = acc + moment_enclosure(n, wb).reciprocal() * self.w(n)
        return dyadic_round(acc.mid, m + 1)

    def _tail_ratio(self, M: int) -> Fraction:
        # M(M+1) >= log2(M+2) since the bump sits at a >= 1
        return self.tail_w(M) / max(1, _log2_floor_int(M + 2))

    def _zstar_modulus(self, N: int) -> int:
        target = pow2(-N)
        if self._tail_ratio(self.m_max) > target:
            raise PrecisionCapError(
                f"z* tail bound cannot reach 2^-{N} within {self.m_max} terms",
                self.achievable_bits(),
            )
        lo, hi = 0, 1
        while self._tail_ratio(hi) > target:
            lo, hi = hi, min(2 * hi, self.m_max)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._tail_ratio(mid) > target:
                lo = mid
            else:
                hi = mid
        return hi

    def achievable_bits(self) -> int:
        r = self._tail_ratio(self.m_max)
        if r == 0:
            return 1 << 30
        return max(0, -ceil_log2(r))

    def zstar_enclosure(self, bits: int) -> Interval:
        return self.zstar.enclosure(bits)

    # -- shifts --------------------------------------------------------------

    def alpha_star(self, n: int) -> CReal:
        with self._lock:
            a = self._alpha.get(n)
            if a is None:
                Mn = CReal.from_enclosure(lambda p, n=n: moment_enclosure(n, p), name=f"M({n})")
                a = phi(self.zstar * Mn * Fraction(1, 2))
                self._alpha[n] = a
            return a

    def alpha_dyadic(self, n: int, bits: int) -> Fraction:
        """Dyadic within 2**-bits of alpha_n (clamped at 0, where alpha_n >= 0)."""
        return max(Fraction(0), self.alpha_star(n).approx(bits))

    def coef(self, n: int, bits: int) -> Interval:
        """Enclosure of w_n / (z* M(n))."""
        z = self.zstar_enclosure(bits + 4)
        Mn = moment_enclosure(n, bits + 4)
        return (Interval.point(self.w(n)) / (z * Mn)).round_out(bits + 2)

    def coef_hi(self, n: int, bits: int) -> Fraction:
        return self.coef(n, bits).hi

    # -- truncations ---------------------------------------------------------

    def mass_tail(self, M: int, bits: int = 40) -> Fraction:
        """Upper bound on the whole-line mass of bumps n > M."""
        z = self.zstar_enclosure(bits)
        return self.tail_w(M) / (z.lo * moment_enclosure(M + 1, bits).lo)

    def mass_enclosure(self, M: Optional[int] = None, bits: Optional[int] = None) -> Interval:
        """Enclosure of int f over the line, from the first M bumps plus the tail bound.

        Each bump has whole-line mass coef_n (two mirrored copies of mass 1/2).
        """
        M = self.terms if M is None else M
        bits = bits if bits is not None else max(48, M + 24)
        trunc = sum((self.coef(n, bits) for n in range(1, M + 1)), Interval.point(0))
        return trunc + Interval(Fraction(0), self.mass_tail(M, bits))

    def snapshot(self, M: Optional[int] = None, bits: int = 32) -> "BumpSnapshot":
        M = self.terms if M is None else M
        shifts = [self.alpha_dyadic(n, bits) for n in range(1, M + 1)]
        coefs = [self.coef(n, bits + 8) for n in range(1, M + 1)]
        mix = TrapezoidMixture(tuple(shifts), tuple(coefs))
        return BumpSnapshot(mix, pow2(-bits), M, self)

    def covering_terms(self, radius, bits: int = 32) -> int:
        """Largest N such that bumps n > N certifiably start beyond ``radius``."""
        radius = Q(radius)
        n = 1
        while self.alpha_dyadic(n, bits) - pow2(-bits) + 1 < radius:
            n += 1
            if n > self.m_max:
                raise PrecisionCapError("radius needs more bumps than m_max", self.achievable_bits())
        return n - 1

    # -- pointwise -------------------------------------------------------------

    def pdf_eval(self, alpha, M: Optional[int] = None, bits: int = 40) -> Interval:
        M = self.terms if M is None else M
        x = abs(Q(alpha))
        if x <= 1:
            return Interval.point(0)
        eps = pow2(-bits)
        acc = Interval.point(0)
        for n in range(1, M + 1):
            a = self.alpha_dyadic(n, bits)
            if x <= a + 1 - eps:
                break  # later bumps start even further out
            if x >= a + 4 + eps:
                continue
            gv = eval_g(x - a)
            # g is 1/4-Lipschitz
            g_iv = Interval(max(Fraction(0), gv - eps / 4), min(Fraction(1, 4), gv + eps / 4))
            acc = acc + self.coef(n, bits) * g_iv
        tail = Fraction(0)
        if not x < self.alpha_dyadic(M + 1, bits) - eps + 1:
            tail = self.mass_tail(M, bits) / 4  # coef_n * sup g summed over the tail
        return acc + Interval(Fraction(0), tail)

    # -- serialisation ---------------------------------------------------------

    def to_json(self, bits: int = 40) -> dict:
        z = self.zstar_enclosure(bits)
        bumps = []
        for n in range(1, self.terms + 1):
            bumps.append(
                {
                    "n": n,
                    "d": _fmt(self.d(n)),
                    "w": _fmt(self.w(n)),
                    "alpha_star": self.alpha_star(n).enclosure(bits).to_json(),
                    "coef": self.coef(n, bits).to_json(),
                }
            )
        return {
            "kind": "bump_train",
            "source": self.source.name,
            "K": self.source.bound,
            "shift": _fmt(self.shift),
            "truncation": self.terms,
            "precision_bits": bits,
            "zstar": z.to_json(),
            "bumps": bumps,
            "tail_bound": _fmt(self.mass_tail(self.terms, bits)),
            "mass_enclosure": self.mass_enclosure(self.terms, max(bits, self.terms + 24)).to_json(),
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class BumpSnapshot:
    """Finite rational stand-in for the first M bumps.

    Bump positions are dyadic and within ``eps`` of the true alpha_n; the
    coefficients are certified enclosures. ``shift_error`` turns an integral
    against the snapshot into one against the true truncation.
    """

    mixture: TrapezoidMixture
    eps: Fraction
    M: int
    pdf: BumpTrainPdf

    def shift_error(self, h_sup: Fraction) -> Fraction:
        """Bound on |int h (f_true - f_snap)| over a >= 0 when |h| <= h_sup on the bumps.

        Moving a bump by eps changes it in L1 by at most eps * TV(g) = eps / 2.
        """
        total = sum((c.hi for c in self.mixture.coefs), Fraction(0))
        return total * h_sup * self.eps / 2

    def integrate(self, h, lo, hi, h_sup: Fraction, **kw) -> QuadratureResult:
        """Enclosure of int_lo^hi h f_M (one side), shift error included."""
        r = self.mixture.integrate(h, lo, hi, **kw)
        e = self.shift_error(h_sup)
        return QuadratureResult(r.enclosure + Interval(-e, e), r.subdivisions, r.radius, r.converged)


def log2_sq_series(ctx: Ctx, X: Interval) -> Series:
    """log2(a^2) = 2 log2(a)."""
    return ctx.scale(ctx.log2(ctx.var(X)), 2)


def log_moment(pdf: BumpTrainPdf, M: int, *, bits: int = 32, tol: Fraction = pow2(-24)) -> Interval:
    """Enclosure of int_R log2(a^2) f_M(a) da by quadrature (f_M = first M bumps)."""
    snap = pdf.snapshot(M, bits)
    hi = snap.mixture.support()[1] + snap.eps
    h_sup = 2 * max(1, ceil_log2(hi))
    r = snap.integrate(log2_sq_series, 0, hi, h_sup, tol=tol)
    return r.enclosure * 2


def auto_shift(x1: Sigma1Cert, terms: int, bits: int = 32) -> Fraction:
    """Smallest integer c >= 0 with certified z*(c) M(1) / 2 >= Psi(0).

    z* M(1) >= d_1 + c + sum_{2<=n<=terms} d_n M(1)/M(n), so it is enough that
    this lower bound reaches 2 Psi(0).
    """
    m1 = moment_enclosure(1, bits)
    acc = Interval.point(0)
    for n in range(1, terms + 1):
        d = x1.term(n) - x1.term(n - 1)
        acc = acc + (m1 / moment_enclosure(n, bits)) * d
    need = 2 * psi_enclosure(0, bits).hi - acc.lo
    if need <= 0:
        return Fraction(0)
    return Fraction(-((-need.numerator) // need.denominator))


def build_bump_train(
    x1: Sigma1Cert,
    terms: int,
    tail_decay: Optional[TailFn] = None,
    shift=None,
    *,
    precision_bits: int = 40,
    m_max: int = M_MAX,
    name: str = "",
) -> BumpTrainPdf:
    """Construct the bump-train pdf for x1 truncated at ``terms`` bumps.

    Raises PrecisionCapError if z* cannot be certified to ``precision_bits``
    with the available tail bound, and DomainError if an explicit shift leaves
    alpha_1 undefined.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if x1.term(0) > x1.term(1):
        raise DomainError("certificate is not nondecreasing")
    c = auto_shift(x1, terms) if shift is None else Q(shift)
    if c < 0:
        raise DomainError("shift must be >= 0")
    if tail_decay is None:
        tail_decay = x1.tail_decay
    pdf = BumpTrainPdf(x1, terms, c, tail_decay, m_max, name or x1.name)
    pdf.zstar.approx(precision_bits)  # surfaces PrecisionCapError early
    pdf.alpha_star(1).approx(8)  # surfaces DomainError early
    return pdf


def pdf_eval(p: BumpTrainPdf, alpha, terms: Optional[int] = None) -> Interval:
    return p.pdf_eval(alpha, terms)
