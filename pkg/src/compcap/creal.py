"""Computable reals as precision-indexed rational approximators.

A :class:`CReal` wraps a deterministic map ``n -> r_n`` with
``|x - r_n| <= 2**-n``. Arithmetic follows the usual guard-bit bookkeeping;
operations whose well-definedness is only semi-decidable (division, log) look
for a witness up to ``N_MAX`` and raise :class:`IndeterminateSignError` when
none is found.
"""

from __future__ import annotations

import threading
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from .elementary import exp2_enclosure, log2_enclosure
from .exact import Q, ceil_log2, dyadic_round, pow2
from .interval import Interval

N_MAX = 64


class IndeterminateSignError(ArithmeticError):
    """No sign witness found within the search budget."""


class PrecisionCapError(ArithmeticError):
    """Requested precision is out of reach of the available convergence bound."""

    def __init__(self, message: str, achievable: int):
        super().__init__(message)
        self.achievable = achievable


class CReal:
    """A real number given by ``approx(n)`` with ``|x - approx(n)| <= 2**-n``.

    Approximations are memoized; the cache is guarded by a lock so sharing a
    CReal across threads is safe.
    """

    __slots__ = ("_fn", "_cache", "_lock", "name", "exact")

    def __init__(self, fn: Callable[[int], Fraction], name: str = "", exact: Optional[Fraction] = None):
        self._fn = fn
        self._cache: dict[int, Fraction] = {}
        self._lock = threading.Lock()
        self.name = name
        self.exact = exact

    @classmethod
    def from_rational(cls, q) -> "CReal":
        q = Q(q)
        return cls(lambda n: q, name=str(q), exact=q)

    @classmethod
    def from_enclosure(cls, fn: Callable[[int], Interval], name: str = "") -> "CReal":
        """Build from ``fn(p)``: an interval of width <= 2**-p containing x."""

        def approx(n: int) -> Fraction:
            iv = fn(n + 2)
            # |x - mid| <= 2^-(n+3); rounding adds at most 2^-(n+3)
            return dyadic_round(iv.mid, n + 2)

        return cls(approx, name=name)

    def approx(self, n: int) -> Fraction:
        if self.exact is not None:
            return self.exact
        r = self._cache.get(n)
        if r is None:
            r = self._fn(n)
            with self._lock:
                self._cache[n] = r
        return r

    def enclosure(self, n: int) -> Interval:
        if self.exact is not None:
            return Interval.point(self.exact)
        return Interval.around(self.approx(n), pow2(-n))

    def magnitude_bits(self) -> int:
        """k with |x| <= 2**k (coarse, from precision 4)."""
        b = abs(self.approx(4)) + Fraction(1, 16)
        return max(ceil_log2(b), 0)

    def __float__(self) -> float:
        return float(self.approx(60))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"CReal({float(self):.15g}{label})"

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _lift(v) -> "CReal":
        return v if isinstance(v, CReal) else CReal.from_rational(v)

    def __add__(self, other) -> "CReal":
        y = self._lift(other)
        x = self
        if x.exact is not None and y.exact is not None:
            return CReal.from_rational(x.exact + y.exact)
        return CReal(lambda n: x.approx(n + 1) + y.approx(n + 1))

    __radd__ = __add__

    def __neg__(self) -> "CReal":
        x = self
        if x.exact is not None:
            return CReal.from_rational(-x.exact)
        return CReal(lambda n: -x.approx(n))

    def __sub__(self, other) -> "CReal":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "CReal":
        return self._lift(other) - self

    def __mul__(self, other) -> "CReal":
        y = self._lift(other)
        x = self
        if x.exact is not None and y.exact is not None:
            return CReal.from_rational(x.exact * y.exact)

        def approx(n: int) -> Fraction:
            gx, gy = x.magnitude_bits(), y.magnitude_bits()
            # |xy - x'y'| <= |x'||y - y'| + |y||x - x'|, each <= 2^-(n+2)
            a = x.approx(n + gy + 3)
            b = y.approx(n + gx + 3)
            return dyadic_round(a * b, n + 2)

        return CReal(approx)

    __rmul__ = __mul__

    def nonzero_witness(self, n_max: int = N_MAX) -> int:
        """Smallest N with |approx(N)| > 2 * 2**-N, so |x| > 2**-N."""
        for N in range(n_max + 1):
            if abs(self.approx(N)) > 2 * pow2(-N):
                return N
        raise IndeterminateSignError(f"no nonzero witness up to precision {n_max}")

    def positivity_witness(self, n_max: int = N_MAX) -> int:
        """Smallest N with approx(N) > 2 * 2**-N, so x > 2**-N."""
        for N in range(n_max + 1):
            a = self.approx(N)
            if a > 2 * pow2(-N):
                return N
            if a < -2 * pow2(-N):
                raise ValueError("value is certifiably negative")
        raise IndeterminateSignError(f"no positivity witness up to precision {n_max}")

    def reciprocal(self, n_max: int = N_MAX) -> "CReal":
        x = self
        if x.exact is not None:
            if x.exact == 0:
                raise ZeroDivisionError("reciprocal of exact zero")
            return CReal.from_rational(1 / x.exact)
        N0 = x.nonzero_witness(n_max)

        def approx(n: int) -> Fraction:
            # |x|, |x'| > 2^-(N0+1) so |1/x - 1/x'| <= |x - x'| 2^(2 N0 + 2)
            a = x.approx(n + 2 * N0 + 4)
            return dyadic_round(1 / a, n + 2)

        return CReal(approx)

    def __truediv__(self, other) -> "CReal":
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other) -> "CReal":
        return self._lift(other) * self.reciprocal()

    def log2(self, n_max: int = N_MAX) -> "CReal":
        x = self
        if x.exact is not None:
            q = x.exact
            if q <= 0:
                raise ValueError("log2 of non-positive value")
            return CReal.from_enclosure(lambda p: log2_enclosure(q, p))
        N0 = x.positivity_witness(n_max)

        def approx(n: int) -> Fraction:
            # x >= 2^-N0 and q >= 2^-(N0+1); log2 is 2^(N0+2)-Lipschitz there
            q = x.approx(n + N0 + 4)
            iv = log2_enclosure(q, n + 3)
            return dyadic_round(iv.mid, n + 3)

        return CReal(approx)

    def exp2(self) -> "CReal":
        x = self
        if x.exact is not None:
            q = x.exact
            return CReal.from_enclosure(lambda p: exp2_enclosure(q, p))

        def approx(n: int) -> Fraction:
            B = x.magnitude_bits()
            # 2^t is (2^(2^B + 2))-Lipschitz on |t| <= 2^B + 1
            guard = (1 << B) + 2 if B < 16 else None
            if guard is None:
                raise OverflowError("exp2 argument too large")
            q = x.approx(n + guard + 2)
            iv = exp2_enclosure(q, n + 3)
            return dyadic_round(iv.mid, n + 3)

        return CReal(approx)


def creal_from_rational(q) -> CReal:
    return CReal.from_rational(q)


def creal_arith(x: CReal, y: Optional[CReal], op: str) -> CReal:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "exp2":
        return x.exp2()
    if op == "log2":
        return x.log2()
    raise ValueError(f"unknown op {op!r}")


class Ordering(str, Enum):
    LESS = "less"
    GREATER = "greater"
    INDISTINGUISHABLE = "indistinguishable_at_N"


def creal_cmp(x: CReal, y: CReal, N: int) -> Ordering:
    """Certified comparison at precision N.

    LESS/GREATER are proven; INDISTINGUISHABLE means |x - y| <= 2**-N.
    """
    if x is y:
        return Ordering.INDISTINGUISHABLE
    a, b = x.approx(N + 2), y.approx(N + 2)
    gap = pow2(-(N + 1))  # |x-a| + |y-b| <= 2^-(N+1)
    if a - b > gap:
        return Ordering.GREATER
    if b - a > gap:
        return Ordering.LESS
    return Ordering.INDISTINGUISHABLE


class CSeq:
    """Computable sequence of reals via a double sequence ``approx2(m, n)``.

    ``|approx2(m, n) - x_n| <= 2**-m``.
    """

    def __init__(self, approx2: Callable[[int, int], Fraction], name: str = ""):
        self._fn = approx2
        self.name = name
        self._cache: dict[tuple[int, int], Fraction] = {}
        self._lock = threading.Lock()

    def approx2(self, m: int, n: int) -> Fraction:
        key = (m, n)
        r = self._cache.get(key)
        if r is None:
            r = self._fn(m, n)
            with self._lock:
                self._cache[key] = r
        return r

    def element(self, n: int) -> CReal:
        return CReal(lambda m: self.approx2(m, n))

    @classmethod
    def from_rationals(cls, fn: Callable[[int], Fraction], name: str = "") -> "CSeq":
        return cls(lambda m, n: fn(n), name=name)


class ModulusFn:
    """Effective-convergence modulus: k >= e(N) implies |x_k - x| <= 2**-N."""

    def __init__(self, fn: Callable[[int], int], name: str = ""):
        self._fn = fn
        self.name = name
        self._cache: dict[int, int] = {}

    def __call__(self, N: int) -> int:
        r = self._cache.get(N)
        if r is None:
            r = self._fn(N)
            self._cache[N] = r
        return r


def effective_limit(s: CSeq, e: ModulusFn, name: str = "") -> CReal:
    """Limit of an effectively convergent computable sequence.

    The caller vouches for the modulus; a wrong modulus gives a wrong real.
    """

    def approx(N: int) -> Fraction:
        return s.approx2(N + 2, e(N + 2))

    return CReal(approx, name=name)
