"""Independent high-precision reference values (mpmath).

Nothing here uses the certified machinery: bump positions come from mpmath
root finding on a numerically integrated Psi, and capacity integrals of a
single bump come from the closed-form antiderivatives

    int ln(1 + c t^2) dt   = t ln(1 + c t^2) - 2t + (2/sqrt c) atan(sqrt c t)
    int t ln(1 + c t^2) dt = (1 + c t^2) ln(1 + c t^2) / (2c) - t^2/2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import mpmath as mp

_PIECES = ((1, 2, Fraction(-1, 4), Fraction(1, 4)), (2, 3, Fraction(1, 4), Fraction(0)), (3, 4, Fraction(1), Fraction(-1, 4)))


def _mpf(q) -> mp.mpf:
    if isinstance(q, Fraction):
        return mp.mpf(q.numerator) / q.denominator
    return mp.mpf(q)


def g(a):
    a = _mpf(a)
    if a <= 1 or a >= 4:
        return mp.mpf(0)
    if a <= 2:
        return (a - 1) / 4
    if a < 3:
        return mp.mpf(1) / 4
    return (4 - a) / 4


def psi(u, dps: int = 30):
    with mp.workdps(dps):
        u = _mpf(u)
        return 2 * mp.quad(lambda a: mp.log(u + a, 2) * g(a), [1, 2, 3, 4])


def moment(n: int, dps: int = 30):
    return psi(n, dps)


def phi(z, dps: int = 30):
    """Inverse of psi on [0, inf) by bracketing bisection (mpmath's anderson solver)."""
    with mp.workdps(dps):
        z = _mpf(z)
        hi = mp.mpf(1)
        while psi(hi, dps) < z:
            hi *= 2
        return mp.findroot(lambda u: psi(u, dps) - z, (mp.mpf(0), hi), solver="anderson")


def _F0(t, c):
    sc = mp.sqrt(c)
    return t * mp.log(1 + c * t * t) - 2 * t + 2 / sc * mp.atan(sc * t)


def _F1(t, c):
    return (1 + c * t * t) * mp.log(1 + c * t * t) / (2 * c) - t * t / 2


def single_bump_capacity(shift, c, dps: int = 30):
    """int_R log2(1 + c a^2) g(|a| - shift) da in closed form."""
    with mp.workdps(dps):
        s, c = _mpf(shift), _mpf(c)
        tot = mp.mpf(0)
        for lo, hi, c0, c1 in _PIECES:
            # g(a - s) = (c0 - c1 s) + c1 a on [s + lo, s + hi]
            A = _mpf(c0) - _mpf(c1) * s
            B = _mpf(c1)
            a, b = s + lo, s + hi
            tot += A * (_F0(b, c) - _F0(a, c)) + B * (_F1(b, c) - _F1(a, c))
        return 2 * tot / mp.log(2)


def single_bump_capacity_quad(shift, c, dps: int = 30):
    """Same integral by mpmath's own quadrature (a second, numeric route)."""
    with mp.workdps(dps):
        s, c = _mpf(shift), _mpf(c)
        return 2 * mp.quad(lambda a: mp.log(1 + c * a * a, 2) * g(a - s), [s + 1, s + 2, s + 3, s + 4])


def single_bump_log_moment(shift, dps: int = 30):
    with mp.workdps(dps):
        s = _mpf(shift)
        return 2 * mp.quad(lambda a: mp.log(a * a, 2) * g(a - s), [s + 1, s + 2, s + 3, s + 4])


class TrainOracle:
    """Reference bump train for increments d(n) and a shift on the first weight."""

    def __init__(self, d: Callable[[int], Fraction], shift, terms: int = 64, dps: int = 30):
        self.dps = dps
        with mp.workdps(dps):
            self.w = [_mpf(d(n)) + (_mpf(shift) if n == 1 else 0) for n in range(1, terms + 1)]
            self.M = [moment(n, dps) for n in range(1, terms + 1)]
            self.zstar = mp.fsum(w / m for w, m in zip(self.w, self.M))
            self.coef = [w / (self.zstar * m) for w, m in zip(self.w, self.M)]
            self.alpha = [phi(self.zstar * m / 2, dps) if w else None for w, m in zip(self.w, self.M)]

    def capacity_term(self, c) -> mp.mpf:
        with mp.workdps(self.dps):
            return mp.fsum(k * single_bump_capacity(a, c, self.dps) for k, a in zip(self.coef, self.alpha) if a is not None)

    def mass(self) -> mp.mpf:
        return mp.fsum(self.coef)


def channel_capacity(o1: TrainOracle, o2: TrainOracle, P, s1, s2) -> mp.mpf:
    return o1.capacity_term(_mpf(P) / _mpf(s1)) - o2.capacity_term(_mpf(P) / _mpf(s2))
