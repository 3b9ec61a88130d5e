"""Structured results shared by the command line, the verify suite and the golden files.

Every number is emitted as an exact rational plus a decimal rendering with
``DECIMAL_DIGITS`` places.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Optional

from . import fixtures
from .capacity.channel import (
    Channel,
    capacity_certificate,
    capacity_enclosure,
    capacity_integrand,
    gap_integrand,
)
from .capacity.montecarlo import mc_estimate
from .capacity.theorem1 import theorem1_check
from .config import RunConfig
from .constructions.mixture import TrapezoidMixture
from .constructions.star import build_star_pdf
from .exact import format_decimal, format_rational, pow2
from .hierarchy import SpeckerNumber
from .interval import Interval

DECIMAL_DIGITS = 12


class UnderCoverageWarning(UserWarning):
    """A requested integration radius does not reach the density's support."""


def num(q: Fraction) -> dict:
    return {"exact": format_rational(q), "decimal": format_decimal(q, DECIMAL_DIGITS)}


def ival(iv: Interval) -> dict:
    return {"lo": num(iv.lo), "hi": num(iv.hi), "width": format_decimal(iv.width, DECIMAL_DIGITS)}


# -- gen-pdf -----------------------------------------------------------------


def gen_pdf(cfg: RunConfig) -> dict:
    if cfg.kind == "star":
        star = build_star_pdf(fixtures.enumerator(cfg.enumerator), cfg.truncation, bits=max(40, cfg.precision_bits))
        lo, hi = star.support()
        mass = star.mass_enclosure()
        return {
            "pdf": star.to_json(),
            "report": {
                "mass_enclosure": ival(mass),
                "mass_brackets_one": mass.contains(1),
                "tail_bound": num(star.tau),
                "support": [format_rational(lo), format_rational(hi)],
                "support_check": f"|alpha| <= {hi}",
            },
        }
    pdf = fixtures.bump_train(cfg.cert, cfg.terms, shift=cfg.shift)
    bits = max(40, cfg.precision_bits)
    mass = pdf.mass_enclosure(pdf.terms, max(bits, pdf.terms + 24))
    last = pdf.alpha_star(pdf.terms).enclosure(bits)
    return {
        "pdf": pdf.to_json(bits),
        "report": {
            "mass_enclosure": ival(mass),
            "mass_brackets_one": mass.contains(1),
            "tail_bound": num(pdf.mass_tail(pdf.terms, bits)),
            "support": [format_rational(pdf.alpha_star(1).enclosure(bits).lo + 1), format_rational(last.hi + 4)],
            "shift": num(pdf.shift),
        },
    }


# -- capacity ------------------------------------------------------------------


def _first_support(ch: Channel) -> Fraction:
    return min(ch.f1.support_lo(), ch.f2.support_lo())


def min_radius(ch: Channel) -> int:
    """Smallest integer radius that covers the first bump of both densities."""
    return math.ceil(_first_support(ch)) + 4


def capacity(cfg: RunConfig, ch: Optional[Channel] = None) -> dict:
    ch = ch or fixtures.channel(cfg.channel, cfg.terms, cfg.P, cfg.sigma1_sq, cfg.sigma2_sq)
    cert = capacity_certificate(ch)
    rows = cert.trace(cfg.k)
    need = min_radius(ch)
    radius = cfg.k if cfg.radius is None else cfg.radius
    adjusted = False
    if radius < need:
        warnings.warn(
            f"radius {radius} does not cover the density support (first bump ends near {need}); using {need}",
            UnderCoverageWarning,
            stacklevel=2,
        )
        radius, adjusted = need, True
    enc = capacity_enclosure(ch, radius)
    est = cert.anytime(cfg.k)
    return {
        "channel": ch.describe(),
        "symmetric": ch.is_symmetric(),
        "k": cfg.k,
        "trace": [{"k": k, "a_k": num(a), "b_k": num(b), "a_k-b_k": num(d)} for k, a, b, d in rows],
        "certificate": {
            "anytime_estimate": num(est),
            "bound_attached": False,
            "a_bound_K": cert.a_seq.bound,
            "b_bound_K": cert.b_seq.bound,
            "enclosure_radius": radius,
            "radius_requested": cfg.radius,
            "radius_adjusted": adjusted,
            "capacity_enclosure": ival(enc),
        },
    }


def theorem1(cfg: RunConfig) -> dict:
    name = cfg.channel if cfg.channel in fixtures.TRAIN_CHANNELS else "oracle-1"
    c1, c2, P, s1, s2 = fixtures.TRAIN_CHANNELS[name]
    P, s1, s2 = cfg.P or P, cfg.sigma1_sq or s1, cfg.sigma2_sq or s2
    ch = fixtures.channel(name, cfg.k, P, s1, s2)
    rep = theorem1_check(None, None, P, s1, s2, cfg.k, channel=ch)
    return rep.to_json()


# -- specker -------------------------------------------------------------------


def specker(cfg: RunConfig) -> dict:
    en = fixtures.enumerator(cfg.enumerator)
    s = SpeckerNumber(en)
    rows = []
    acc = Fraction(0)
    for l in range(1, cfg.k + 1):
        p = en.enumerate(l)
        acc += pow2(-p)
        rows.append({"l": l, "phi": p, "partial_sum": num(acc)})
    assert acc == s.partial(cfg.k)
    return {"enumerator": en.describe(), "k": cfg.k, "rows": rows}


# -- quad ----------------------------------------------------------------------


def _integrand(name: str, c: Fraction):
    if name == "capacity":
        return capacity_integrand(c)
    if name == "gap":
        return gap_integrand(1 / c)

    def one(ctx, X):
        return ctx.const(1)

    return one


def quad(cfg: RunConfig) -> dict:
    """Certified int_lo^hi h(a) g(a - shift) da for one bump, with optional cross-checks."""
    from . import oracle

    shift = cfg.shift or Fraction(0)
    P, s = cfg.P or Fraction(1), cfg.sigma1_sq or Fraction(1)
    c = P / s
    mix = TrapezoidMixture.single(shift)
    tol = pow2(-cfg.precision_bits)
    r = mix.integrate(_integrand(cfg.integrand, c), cfg.lo, cfg.hi, tol=tol)
    out = {
        "shift": num(shift),
        "integrand": cfg.integrand,
        "c": num(c),
        "interval": [format_rational(cfg.lo), format_rational(cfg.hi)],
        "one_sided": True,
        "enclosure": ival(r.enclosure),
        "subdivisions": r.subdivisions,
        "converged": r.converged,
    }
    lo_s, hi_s = mix.support()
    covers = cfg.lo <= lo_s and cfg.hi >= hi_s
    if cfg.integrand == "capacity" and covers:
        ref = oracle.single_bump_capacity(shift, c) / 2
        out["closed_form"] = {"value": mp_str(ref), "contained": _contains_mp(r.enclosure, ref)}
        if cfg.samples > 0:
            mc = mc_estimate(mix, P, s, cfg.samples, cfg.seed, cfg.threads)
            # MC estimates the whole-line integral; halve for one side
            out["monte_carlo"] = {
                "mean": repr(mc.mean / 2),
                "stderr": repr(mc.stderr / 2),
                "samples": mc.samples,
                "seed": mc.seed,
                "agrees_3se": abs(mc.mean / 2 - float(ref)) <= 3 * mc.stderr / 2,
            }
    return out


def mp_str(x, digits: int = 20) -> str:
    import mpmath as mp

    return mp.nstr(x, digits)


def _contains_mp(iv: Interval, x) -> bool:
    import mpmath as mp

    with mp.workdps(40):
        return mp.mpf(iv.lo.numerator) / iv.lo.denominator <= x <= mp.mpf(iv.hi.numerator) / iv.hi.denominator
