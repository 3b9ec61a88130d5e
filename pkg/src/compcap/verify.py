"""Invariant suites for every module, runnable from ``compcap verify``.

Each check returns the number of cases it exercised; any exception or failed
assertion marks it as failed. Golden files are read from the package data
unless another directory is given.
"""

from __future__ import annotations

import json
import math
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

GOLDEN_FILES = (
    "specker_dovetail_k10.json",
    "theorem1_oracle1_k32.json",
    "capacity_oracle1.json",
    "gen_pdf_geo1.json",
)


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    cases: int
    seconds: float
    detail: str = ""


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = []
        for r in self.results:
            tag = "PASS" if r.ok else "FAIL"
            extra = f"  {r.detail}" if r.detail and not r.ok else ""
            lines.append(f"{tag} {r.suite}/{r.name} ({r.cases} cases){extra}")
        n_bad = sum(not r.ok for r in self.results)
        lines.append(f"{len(self.results) - n_bad} passed, {n_bad} failed")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"suite": r.suite, "name": r.name, "ok": r.ok, "cases": r.cases, "detail": r.detail} for r in self.results],
        }


def _golden_dir(path: Optional[str]) -> Path:
    if path:
        return Path(path)
    return Path(str(resources.files("compcap").joinpath("data/golden")))


def load_golden(name: str, golden_dir: Optional[str] = None) -> dict:
    with open(_golden_dir(golden_dir) / name, encoding="utf-8") as fh:
        return json.load(fh)


# -- golden payloads (also written by scripts/regen_golden.py) -------------------


def golden_specker() -> dict:
    from .config import RunConfig
    from .reports import specker

    return specker(RunConfig(enumerator="dovetail", k=10))


def golden_theorem1() -> dict:
    from .config import RunConfig
    from .reports import theorem1

    return theorem1(RunConfig(channel="oracle-1", k=32))


def golden_gen_pdf() -> dict:
    from .config import RunConfig
    from .reports import gen_pdf

    return gen_pdf(RunConfig(kind="bump_train", cert="geo-1", terms=32))["report"]


def capacity_estimates(k_max: int = 32) -> list:
    from . import fixtures
    from .capacity.channel import capacity_certificate

    cert = capacity_certificate(fixtures.channel("oracle-1", 32))
    return [cert.anytime(k) for k in range(1, k_max + 1)]


def golden_capacity(oracle_value: Optional[str] = None) -> dict:
    """Anytime estimates for oracle-1 next to the independent oracle value.

    ``k0`` is the first index from which every estimate up to 32 is within
    1e-3 of the oracle.
    """
    import mpmath as mp

    from .exact import format_rational

    if oracle_value is None:
        from . import fixtures, oracle

        c1, c2, P, s1, s2 = fixtures.TRAIN_CHANNELS["oracle-1"]
        shift = fixtures.channel("oracle-1", 32).f1.pdf.shift
        d1 = fixtures.cert(c1)
        d2 = fixtures.cert(c2)
        o1 = oracle.TrainOracle(lambda n: d1.term(n) - d1.term(n - 1), shift, terms=64)
        o2 = oracle.TrainOracle(lambda n: d2.term(n) - d2.term(n - 1), shift, terms=64)
        oracle_value = mp.nstr(oracle.channel_capacity(o1, o2, P, s1, s2), 20)
    ref = float(oracle_value)
    est = capacity_estimates(32)
    k0 = None
    for k in range(len(est), 0, -1):
        if abs(float(est[k - 1]) - ref) < 1e-3:
            k0 = k
        else:
            break
    return {
        "channel": "oracle-1",
        "oracle_value": oracle_value,
        "anytime_k32": format_rational(est[-1]),
        "k0": k0,
        "tolerance": "1e-3",
    }


# -- suites ------------------------------------------------------------------------


def _exact_core(g):
    from .elementary import ln2_enclosure, log2_enclosure
    from .exact import dyadic_round, format_decimal, rat_arith
    from .interval import Interval

    def arith():
        assert rat_arith("1/3", "1/6", "add") == Fraction(1, 2)
        assert rat_arith(-2, "3/4", "mul") == Fraction(-3, 2)
        try:
            rat_arith(1, 0, "div")
            raise AssertionError("division by zero accepted")
        except ZeroDivisionError:
            pass
        assert dyadic_round(Fraction(1, 3), 4) == Fraction(5, 16)
        assert format_decimal(Fraction(1, 3), 5) == "0.33333"
        return 5

    def enclosures():
        n = 0
        for x in (Fraction(1, 7), Fraction(3, 2), 10, Fraction(10**6, 3)):
            e = log2_enclosure(x, 60)
            assert e.width <= Fraction(1, 2**60) and e.lo <= Fraction(math.log2(x)) + Fraction(1, 2**40)
            assert e.hi >= Fraction(math.log2(x)) - Fraction(1, 2**40)
            n += 1
        assert abs(ln2_enclosure(80).mid - Fraction(math.log(2))) < Fraction(1, 10**15)
        iv = Interval(Fraction(-1), Fraction(2)) * Interval(Fraction(3), Fraction(4))
        assert iv.lo == -4 and iv.hi == 8
        return n + 2

    return [("rational arithmetic", arith), ("log enclosures", enclosures)]


def _creal(g):
    from .constructions.bump import moment_enclosure, phi_rational, psi_enclosure
    from .creal import CReal, creal_arith
    from .exact import pow2

    def contract():
        x = CReal.from_rational(Fraction(1, 3))
        y = creal_arith(x, CReal.from_rational(2), "mul")
        for n in (4, 16, 64):
            assert abs(y.approx(n) - Fraction(2, 3)) <= pow2(-n)
        l2 = CReal.from_rational(8).log2()
        assert abs(l2.approx(40) - 3) <= pow2(-40)
        return 4

    def cross_path():
        for n in range(1, 9):
            a, b = moment_enclosure(n, 40), psi_enclosure(n, 40)
            assert abs(a.mid - b.mid) <= pow2(-30)
        return 8

    def roundtrip():
        import random

        rng = random.Random(7)
        for _ in range(20):
            u = Fraction(rng.randrange(0, 16 << 10), 1 << 10)
            z = psi_enclosure(u, 48).mid
            assert abs(phi_rational(z, 30) - u) <= pow2(-20)
        return 20

    return [("approximation contract", contract), ("Psi(n) = M(n)", cross_path), ("Phi(Psi(u)) = u", roundtrip)]


def _hierarchy(g):
    from . import fixtures
    from .hierarchy import SpeckerNumber, check_monotone, delta2_anytime, Delta2Cert, sigma1_shift

    def monotone():
        certs = [fixtures.cert(n) for n in fixtures.CERTS]
        certs += [SpeckerNumber(fixtures.enumerator(e)).as_sigma1() for e in ("injected-id", "injected-even", "dovetail")]
        for c in certs:
            assert check_monotone(c.term, 2048) is None, c.name
            assert all(c.term(k) <= c.bound for k in (0, 1, 64, 2048)), c.name
        return len(certs)

    def injective():
        n = 0
        for name in ("injected-id", "injected-even", "dovetail"):
            p = fixtures.enumerator(name).prefix(100)
            assert len(set(p)) == 100, name
            n += 1
        return n

    def specker_sums():
        for name in ("injected-id", "injected-even", "dovetail"):
            term = SpeckerNumber(fixtures.enumerator(name)).as_sigma1().term
            prev = Fraction(0)
            for k in range(1, 101):
                v = term(k)
                assert prev < v < 1, (name, k)
                prev = v
        return 300

    def shift_invariance():
        a, b = fixtures.cert("geo-1"), fixtures.cert("geo-1/2")
        d = Delta2Cert(a, b)
        n = 0
        for u in (Fraction(0), Fraction(3, 2), Fraction(7)):
            ds = Delta2Cert(sigma1_shift(a, u), sigma1_shift(b, u))
            for k in range(0, 257):
                assert delta2_anytime(ds, k) == delta2_anytime(d, k)
                n += 1
        return n

    def golden():
        want = load_golden("specker_dovetail_k10.json", g)
        got = golden_specker()
        assert got == want, "dovetail prefix differs from the golden file"
        return len(got["rows"])

    return [
        ("Sigma1 monotone and bounded (k <= 2048)", monotone),
        ("enumerator injectivity (100)", injective),
        ("Specker partial sums increasing and < 1", specker_sums),
        ("delta2 shift invariance (k <= 256)", shift_invariance),
        ("golden dovetail prefix", golden),
    ]


def _constructions(g):
    from . import fixtures
    from .constructions.bump import G_KNOTS, integral_g, moment_enclosure
    from .constructions.bumptrain import log_moment
    from .constructions.star import build_star_pdf
    from .elementary import log2_enclosure
    from .exact import pow2
    from .quadrature import integrate

    def bump_mass():
        assert integral_g() == Fraction(1, 2)
        r = integrate(_g_series, 0, 5, knots=G_KNOTS, tol=pow2(-24))
        assert r.enclosure.contains(Fraction(1, 2)) and r.enclosure.width <= pow2(-20)
        return 2

    def moment_bound():
        for n in range(1, 101):
            assert moment_enclosure(n, 32).lo >= log2_enclosure(n + 2, 32).hi / 2
        return 100

    def normalization():
        pdf = fixtures.bump_train("geo-1", 32)
        widths = []
        for M in (8, 16, 32):
            m = pdf.mass_enclosure(M)
            assert m.contains(1)
            widths.append(m.width)
        assert widths[0] > widths[1] > widths[2]
        return 3

    def log_moment_identity():
        pdf = fixtures.bump_train("geo-1", 32)
        M = 32
        lm = log_moment(pdf, M) - pdf.shift
        target = fixtures.cert("geo-1").term(M)
        assert lm.lo - pdf.tail_w(M) <= target <= lm.hi + pdf.tail_w(M)
        assert abs(lm.mid - target) < Fraction(1, 1000)
        return 1

    def star_support():
        star = build_star_pdf(fixtures.enumerator("injected-id"), 16)
        assert star.support() == (2, 17)
        assert star.eval(Fraction(18)).hi <= star.gstar_sup_tail() / (2 * star.c2.lo)
        assert star.mass_enclosure().contains(1)
        return 3

    def golden():
        want = load_golden("gen_pdf_geo1.json", g)
        got = golden_gen_pdf()
        assert got == want, "gen-pdf report differs from the golden file"
        return 1

    return [
        ("bump mass 1/2", bump_mass),
        ("M(n) >= log2(n+2)/2, n <= 100", moment_bound),
        ("bump-train normalization", normalization),
        ("log-moment identity", log_moment_identity),
        ("star pdf support", star_support),
        ("golden gen-pdf report", golden),
    ]


def _g_series(ctx, X):
    from .constructions.bump import g_piece

    pc = g_piece(X.mid)
    if pc is None:
        return ctx.const(0)
    c0, c1 = pc
    return ctx.add_const(ctx.scale(ctx.var(X), c1), c0)


def _capacity(g):
    from . import fixtures, oracle
    from .capacity.channel import capacity_certificate, quad_capacity_term
    from .hierarchy import check_monotone

    def monotone():
        n = 0
        for name in ("oracle-1", "bumps-1"):
            cert = capacity_certificate(fixtures.channel(name, 32))
            for seq in (cert.a_seq, cert.b_seq):
                assert check_monotone(seq.term, 32) is None, name
                n += 1
        return n

    def symmetric():
        cert = capacity_certificate(fixtures.channel("sym-1", 32))
        assert all(cert.anytime(k) == 0 for k in range(1, 33))
        return 32

    def single_bumps():
        for shift, P, s in fixtures.SINGLE_BUMPS:
            r = quad_capacity_term(fixtures.single_bump(shift), P, s, int(shift) + 5)
            ref = oracle.single_bump_capacity(shift, P / s)
            lo, hi = (float(r.enclosure.lo), float(r.enclosure.hi))
            assert lo - 1e-12 <= float(ref) <= hi + 1e-12
        return len(fixtures.SINGLE_BUMPS)

    def golden_estimate():
        want = load_golden("capacity_oracle1.json", g)
        est = capacity_estimates(32)
        from .exact import format_rational

        assert format_rational(est[-1]) == want["anytime_k32"], "anytime estimate differs from the golden file"
        assert abs(float(est[-1]) - float(want["oracle_value"])) < 1e-3
        return 1

    def theorem1_residual():
        want = load_golden("theorem1_oracle1_k32.json", g)
        got = golden_theorem1()
        assert got["passed"], "decomposition residual exceeds its certified bound"
        assert got["residual"] == want["residual"], "residual differs from the golden file"
        return 1

    return [
        ("a_n, b_n nondecreasing (n <= 32)", monotone),
        ("symmetric channel estimate is 0", symmetric),
        ("single bumps vs closed form", single_bumps),
        ("oracle-1 estimate vs golden", golden_estimate),
        ("decomposition residual vs golden", theorem1_residual),
    ]


def _cli(g):
    from .config import RunConfig, parse_config_text

    def config_roundtrip():
        cfg = parse_config_text("[run]\nschema_version = 1\nP = 3/2\nk = 4\n")
        assert cfg.P == Fraction(3, 2) and cfg.k == 4
        assert cfg.digest == RunConfig(P=Fraction(3, 2), k=4).digest
        return 2

    def deterministic():
        import contextlib
        import io

        from .cli import main

        outs = []
        for _ in range(2):
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                assert main(["specker", "--enumerator", "dovetail", "--k", "12", "--no-timestamp"]) == 0
            outs.append(buf.getvalue())
        assert outs[0] == outs[1]
        return 2

    return [("config parse and digest", config_roundtrip), ("byte-identical output", deterministic)]


SUITES: dict[str, Callable] = {
    "exact-core": _exact_core,
    "creal": _creal,
    "hierarchy": _hierarchy,
    "constructions": _constructions,
    "capacity": _capacity,
    "cli": _cli,
}


def run_suites(only: Optional[list] = None, golden_dir: Optional[str] = None) -> SuiteReport:
    names = list(SUITES) if not only else only
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; have {list(SUITES)}")
    rep = SuiteReport()
    for name in names:
        for check, fn in SUITES[name](golden_dir):
            t0 = time.perf_counter()
            try:
                cases = fn()
                ok, detail = True, ""
            except Exception as exc:  # a failing check must not stop the others
                cases, ok = 0, False
                detail = f"{type(exc).__name__}: {exc}" if str(exc) else traceback.format_exc(limit=1).strip().splitlines()[-1]
            rep.results.append(CheckResult(name, check, ok, cases, time.perf_counter() - t0, detail))
    return rep
