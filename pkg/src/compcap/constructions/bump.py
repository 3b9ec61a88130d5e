"""The trapezoid bump g, its log-moments M(n), Psi and the inverse Phi.

g is 0 off [1, 4], rises linearly on [1, 2], is 1/4 on [2, 3] and falls on
[3, 4]; its integral is 1/2.

M(n) = int log2(a^2) g(a - n) da and Psi(u) = 2 int log2(u + a) g(a) da are
computed by two different closed forms so that Psi(n) = M(n) is a genuine
cross-check:

* ``moment_enclosure`` integrates each linear piece against log2 with the
  first antiderivatives of log2(t) and t log2(t);
* ``psi_enclosure`` uses g'' = (delta_1 - delta_2 - delta_3 + delta_4)/4 and the
  second antiderivative F(t) = t^2 log2(t)/2 - 3t^2/(4 ln 2), which collapses to
  Psi(u) = 1/4 sum_c s_c (u+c)^2 log2(u+c) - 3/(2 ln 2).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..creal import CReal
from ..elementary import ln2_enclosure, log2_enclosure
from ..exact import DomainError, Q, dyadic_round, pow2
from ..interval import Interval

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)

# (lo, hi, c0, c1): g(a) = c0 + c1 * a on [lo, hi]
G_PIECES = (
    (Fraction(1), Fraction(2), Fraction(-1, 4), Fraction(1, 4)),
    (Fraction(2), Fraction(3), Fraction(1, 4), Fraction(0)),
    (Fraction(3), Fraction(4), Fraction(1), Fraction(-1, 4)),
)
G_KNOTS = (Fraction(1), Fraction(2), Fraction(3), Fraction(4))


def eval_g(a) -> Fraction:
    a = Q(a)
    if a <= 1 or a >= 4:
        return Fraction(0)
    if a <= 2:
        return (a - 1) / 4
    if a < 3:
        return QUARTER
    return (4 - a) / 4


def g_range(X: Interval) -> Interval:
    """Exact range of g over X (g is unimodal with a plateau)."""
    vals = [eval_g(X.lo), eval_g(X.hi)]
    lo = min(vals)
    if X.hi > 2 and X.lo < 3:
        hi = QUARTER
    else:
        hi = max(vals)
    return Interval(lo, hi)


def integral_g() -> Fraction:
    """Closed form: two triangles of area 1/8 plus a plateau of area 1/4."""
    total = Fraction(0)
    for lo, hi, c0, c1 in G_PIECES:
        total += c0 * (hi - lo) + c1 * (hi * hi - lo * lo) / 2
    return total


def g_piece(a: Fraction) -> tuple[Fraction, Fraction] | None:
    """Linear coefficients (c0, c1) of the piece containing ``a`` (None off support)."""
    for lo, hi, c0, c1 in G_PIECES:
        if lo <= a <= hi:
            return c0, c1
    return None


# -- log-moments -------------------------------------------------------------


def _refine(fn, bits: int) -> Interval:
    """Call fn(working_bits) with growing precision until the width is <= 2**-bits."""
    wb = bits + 8
    target = pow2(-bits)
    while True:
        out = fn(wb)
        if out.width <= target:
            return out
        wb += max(8, (out.width / target).numerator.bit_length() - (out.width / target).denominator.bit_length() + 4)


def _antiderivative(t: Fraction, c0: Fraction, c1: Fraction, wb: int, inv_ln2: Interval) -> Interval:
    """int (c0 + c1 t) log2(t) dt evaluated at t (constant of integration 0)."""
    L = log2_enclosure(t, wb)
    out = (L * t - inv_ln2 * t) * c0
    if c1:
        out = out + (L * (t * t / 2) - inv_ln2 * (t * t / 4)) * c1
    return out


@lru_cache(maxsize=8192)
def moment_enclosure(n: int, bits: int) -> Interval:
    """Enclosure of M(n) = 2 int_1^4 log2(a + n) g(a) da, width <= 2**-bits."""
    if n < 0:
        raise DomainError("M(n) needs n >= 0")
    n = Fraction(n)
    extra = 2 * (int(n) + 4).bit_length() + 4

    def compute(wb: int) -> Interval:
        w = wb + extra
        inv_ln2 = ln2_enclosure(w).reciprocal()
        total = Interval.point(0)
        for lo, hi, c0, c1 in G_PIECES:
            # in t = a + n: g = c0 + c1 (t - n)
            d0, d1 = c0 - c1 * n, c1
            total = total + _antiderivative(hi + n, d0, d1, w, inv_ln2)
            total = total - _antiderivative(lo + n, d0, d1, w, inv_ln2)
        return (total * 2).round_out(wb + 4)

    return _refine(compute, bits)


def moment_M(n: int) -> CReal:
    if n < 1:
        raise DomainError("M(n) is defined for n >= 1")
    return CReal.from_enclosure(lambda p: moment_enclosure(n, p), name=f"M({n})")


_SIGNS = ((1, 1), (2, -1), (3, -1), (4, 1))


def psi_enclosure(u, bits: int) -> Interval:
    """Enclosure of Psi(u) for rational u > -1, width <= 2**-bits."""
    u = Q(u)
    if u <= -1:
        raise DomainError("Psi needs u > -1")
    mag = max(abs(u) + 4, Fraction(1))
    extra = 2 * (mag.numerator // mag.denominator + 1).bit_length() + 4

    def compute(wb: int) -> Interval:
        w = wb + extra
        s = Interval.point(0)
        for c, sign in _SIGNS:
            t = u + c
            term = log2_enclosure(t, w) * (t * t)
            s = s + term if sign > 0 else s - term
        out = s * QUARTER - ln2_enclosure(w).reciprocal() * Fraction(3, 2)
        return out.round_out(wb + 4)

    return _refine(compute, bits)


def psi(u: CReal) -> CReal:
    """Psi as a CReal map; Psi is 1/ln2-Lipschitz on u >= 0."""
    for N in (8, 16, 32):
        if u.approx(N) + pow2(-N) < 0:
            raise DomainError("Psi needs u >= 0; argument is certifiably negative")

    def approx(n: int) -> Fraction:
        q = u.approx(n + 4)
        iv = psi_enclosure(q, n + 3)
        return dyadic_round(iv.mid, n + 3)

    return CReal(approx, name="Psi")


def _bracket_exponent(z_upper: Fraction) -> int:
    j = 1
    while psi_enclosure(pow2(j), 16).lo < z_upper:
        j *= 2
        if j > 1 << 12:
            raise OverflowError("Phi argument too large")
    return j


def phi_rational(q: Fraction, bits: int, j: int | None = None) -> Fraction:
    """Dyadic u with |u - Phi(q)| <= 2**-bits, for q >= Psi(0).

    Certified bisection; arguments at or below Psi(0) map to 0.
    """
    q = Q(q)
    if j is None:
        j = _bracket_exponent(q + 1)
    L = (1 << j) + 4  # Phi' = 1/Psi' <= (u + 4) ln 2 on [0, 2^j]
    lb = L.bit_length()
    eb = bits + lb + 4
    if q <= psi_enclosure(0, eb).hi:
        return Fraction(0)
    lo, hi = Fraction(0), pow2(j)
    step = pow2(-(bits + 1))
    while hi - lo > step:
        mid = (lo + hi) / 2
        enc = psi_enclosure(mid, eb)
        if enc.hi < q:
            lo = mid
        elif enc.lo > q:
            hi = mid
        else:
            return mid
    return (lo + hi) / 2


def phi(z: CReal) -> CReal:
    """Inverse of Psi on [0, inf) as a CReal map.

    Raises DomainError when z is certifiably below Psi(0).
    """
    psi0 = psi_enclosure(0, 40)
    if z.approx(34) + pow2(-34) < psi0.lo:
        raise DomainError("Phi argument below Psi(0)")
    state: dict = {}

    def approx(n: int) -> Fraction:
        j = state.get("j")
        if j is None:
            j = state["j"] = _bracket_exponent(z.approx(8) + 1)
        L = (1 << j) + 4
        lb = L.bit_length()
        # |Phi(z) - Phi(q)| <= L |z - q| <= 2^-(n+3)
        q = z.approx(n + lb + 3)
        return phi_rational(q, n + 3, j)

    return CReal(approx, name="Phi")
