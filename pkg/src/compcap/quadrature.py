"""Adaptive certified quadrature.

Each segment ``[a, b]`` with midpoint ``m`` and half-width ``h`` is enclosed by
the Taylor polynomial at ``m`` integrated exactly plus the Lagrange remainder,
whose coefficient is an interval Taylor coefficient over the whole segment:

    int_a^b f = sum_{k even < d} f_k(m) 2 h^(k+1)/(k+1) + f_d(xi) 2 h^(d+1)/(d+1)

with ``d`` even, so ``t^d >= 0`` and the mean-value form applies. The result
is intersected with the plain range bound ``(b - a) * f([a, b])``. The widest
segment is bisected until the total width meets the tolerance or the segment
budget runs out.

Integrands are callables ``fn(ctx, X) -> Series``; the caller supplies knots so
that every segment lies inside one smooth piece.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .exact import floor_log2, pow2
from .interval import Interval
from .taylor import Ctx, Series

SeriesFn = Callable[[Ctx, Interval], Series]

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class QuadratureResult:
    enclosure: Interval
    subdivisions: int
    radius: Optional[Fraction] = None
    converged: bool = True

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.enclosure + other.enclosure,
            self.subdivisions + other.subdivisions,
            self.radius,
            self.converged and other.converged,
        )

    def scaled(self, c) -> "QuadratureResult":
        return QuadratureResult(self.enclosure * c, self.subdivisions, self.radius, self.converged)

    def to_json(self) -> dict:
        return {
            "enclosure": self.enclosure.to_json(),
            "subdivisions": self.subdivisions,
            "radius": None if self.radius is None else str(self.radius),
            "converged": self.converged,
        }


def segment_enclosure(fn: SeriesFn, a: Fraction, b: Fraction, order: int, bits: int) -> Interval:
    if a == b:
        return Interval.point(0)
    h = (b - a) / 2
    m = a + h
    d = order
    ctx_x = Ctx(d, bits)
    TX = fn(ctx_x, Interval(a, b))
    coarse = TX[0] * (b - a)
    ctx_m = Ctx(d - 1, bits)
    Tm = fn(ctx_m, Interval.point(m))
    acc = Interval.point(0)
    hp = h  # h^(k+1)
    for k in range(0, d):
        if k % 2 == 0:
            acc = acc + Tm[k] * (2 * hp / (k + 1))
        hp = hp * h
    # hp == h^(d+1)
    acc = acc + TX[d] * (2 * hp / (d + 1))
    acc = acc.round_out(bits)
    tight = acc.intersect(coarse)
    return tight if tight is not None else acc


def integrate(
    fn: SeriesFn,
    lo,
    hi,
    *,
    knots: Iterable[Fraction] = (),
    tol: Fraction = pow2(-30),
    budget: int = 4000,
    order: int = DEFAULT_ORDER,
    bits: Optional[int] = None,
    max_len: Optional[Fraction] = None,
) -> QuadratureResult:
    """Certified enclosure of ``int_lo^hi f``.

    ``knots`` strictly inside (lo, hi) split the domain into smooth pieces.
    ``budget`` caps the number of segments; when it is hit the (still valid)
    enclosure is returned with ``converged=False``.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if order % 2:
        raise ValueError("order must be even")
    if hi < lo:
        r = integrate(fn, hi, lo, knots=knots, tol=tol, budget=budget, order=order, bits=bits, max_len=max_len)
        return QuadratureResult(-r.enclosure, r.subdivisions, None, r.converged)
    if bits is None:
        bits = max(40, -floor_log2(tol) + 24)
    pts = sorted({lo, hi, *(Fraction(k) for k in knots if lo < k < hi)})
    segs: list[tuple[Fraction, Fraction]] = []
    for a, b in zip(pts, pts[1:]):
        if max_len is not None and b - a > max_len:
            n = int((b - a) / max_len) + 1
            step = (b - a) / n
            segs.extend((a + i * step, a + (i + 1) * step) for i in range(n))
        else:
            segs.append((a, b))

    heap: list = []
    tlo = thi = Fraction(0)
    counter = 0
    for a, b in segs:
        enc = segment_enclosure(fn, a, b, order, bits)
        tlo += enc.lo
        thi += enc.hi
        heapq.heappush(heap, (-enc.width, counter, a, b, enc))
        counter += 1

    n_seg = len(segs)
    while heap and thi - tlo > tol and n_seg < budget:
        negw, _, a, b, enc = heapq.heappop(heap)
        m = (a + b) / 2
        left = segment_enclosure(fn, a, m, order, bits)
        right = segment_enclosure(fn, m, b, order, bits)
        tlo += left.lo + right.lo - enc.lo
        thi += left.hi + right.hi - enc.hi
        heapq.heappush(heap, (-left.width, counter, a, m, left))
        heapq.heappush(heap, (-right.width, counter + 1, m, b, right))
        counter += 2
        n_seg += 1
    total = Interval(tlo, thi)
    return QuadratureResult(total, n_seg, None, total.width <= tol)

