"""Level-one arithmetical-hierarchy certificates and r.e. enumerations.

A Sigma1 real is carried by a computable nondecreasing rational sequence with
a declared natural upper bound; Pi1 is the mirror image; a Delta2 real is the
difference of two Sigma1 certificates and, by design, exposes no error bound.

Enumerators produce injective streams ``phi(1), phi(2), ...``. The dovetail
backend runs a committed table of two-counter machines and emits the
(1-based) index of each machine in the order its halting is observed.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterator, Optional, Sequence

from .exact import Q, pow2


@dataclass(frozen=True)
class Sigma1Cert:
    """Nondecreasing computable rational sequence ``term(k)``, k >= 0, below ``bound``.

    ``tail_decay(k)``, when declared, bounds ``lim - term(k)`` from above; it is
    a promise of the certificate's author, not something checked here.
    """

    term_fn: Callable[[int], Fraction]
    bound: int
    name: str = ""
    tail_decay: Optional[Callable[[int], Fraction]] = None

    def term(self, k: int) -> Fraction:
        return self.term_fn(k)


@dataclass(frozen=True)
class Pi1Cert:
    """Nonincreasing computable rational sequence bounded below by ``lower``."""

    term_fn: Callable[[int], Fraction]
    lower: int
    name: str = ""

    def term(self, k: int) -> Fraction:
        return self.term_fn(k)


@dataclass(frozen=True)
class Delta2Cert:
    a: Sigma1Cert
    b: Sigma1Cert
    name: str = ""


def sigma1_partial(c: Sigma1Cert, k: int) -> Fraction:
    return c.term(k)


def sigma1_shift(c: Sigma1Cert, u) -> Sigma1Cert:
    """Add a rational constant to every term (bound grows by ceil(u))."""
    u = Q(u)
    extra = -((-u.numerator) // u.denominator)  # ceil
    return Sigma1Cert(lambda k, f=c.term_fn: f(k) + u, c.bound + max(extra, 0), f"{c.name}+{u}", c.tail_decay)


def delta2_anytime(d: Delta2Cert, k: int) -> Fraction:
    """``a.term(k) - b.term(k)``. Carries no error bound."""
    return d.a.term(k) - d.b.term(k)


def geometric_cert(scale=1, name: str = "") -> Sigma1Cert:
    """term(k) = scale * (1 - 2**-k); limit ``scale``."""
    s = Q(scale)
    bound = int(s) + 1
    return Sigma1Cert(lambda k: s * (1 - pow2(-k)), bound, name or f"geo({s})", lambda k: s * pow2(-k))


def constant_cert(value, name: str = "") -> Sigma1Cert:
    """term(0) = 0, term(k) = value for k >= 1 (a single positive increment)."""
    v = Q(value)
    bound = int(v) + 1
    return Sigma1Cert(
        lambda k: v if k >= 1 else Fraction(0), bound, name or f"const({v})", lambda k: v if k < 1 else Fraction(0)
    )


# -- enumerators ----------------------------------------------------------


class EnumerationExhausted(RuntimeError):
    """The enumerator could not produce the requested element within its budget."""


class REEnumerator:
    """Injective enumeration phi: {1, 2, ...} -> {1, 2, ...}."""

    backend: str = ""

    def enumerate(self, i: int) -> int:
        raise NotImplementedError

    def prefix(self, k: int) -> list[int]:
        return [self.enumerate(i) for i in range(1, k + 1)]

    def cursor(self) -> Iterator[int]:
        """Independent iterator over phi(1), phi(2), ..."""
        i = 1
        while True:
            yield self.enumerate(i)
            i += 1

    @property
    def content_hash(self) -> str:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"backend": self.backend, "content_hash": self.content_hash}


def re_enumerate(r: REEnumerator, i: int) -> int:
    return r.enumerate(i)


class InjectedEnumerator(REEnumerator):
    """Test backend: phi given by a table or a function (membership known by construction)."""

    backend = "injected_test"

    def __init__(self, source: Sequence[int] | Callable[[int], int], label: str = ""):
        if callable(source):
            self._fn = source
            self._table = None
            self.label = label or getattr(source, "__name__", "fn")
        else:
            table = [int(v) for v in source]
            if len(set(table)) != len(table):
                raise ValueError("injected table is not injective")
            self._table = table
            self._fn = None
            self.label = label or ",".join(map(str, table))

    def enumerate(self, i: int) -> int:
        if i < 1:
            raise ValueError("enumerations are indexed from 1")
        if self._table is not None:
            if i > len(self._table):
                raise EnumerationExhausted(f"injected table has only {len(self._table)} entries")
            return self._table[i - 1]
        return int(self._fn(i))

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(f"injected:{self.label}".encode()).hexdigest()


def load_machine_table(path=None) -> tuple[list, str]:
    if path is None:
        raw = resources.files("compcap").joinpath("data/machines.json").read_bytes()
    else:
        with open(path, "rb") as fh:
            raw = fh.read()
    table = json.loads(raw)
    return table["machines"], hashlib.sha256(raw).hexdigest()


@dataclass
class _Machine:
    program: list
    pc: int = 0
    regs: list = field(default_factory=lambda: [0, 0])
    steps: int = 0
    halted: bool = False

    def step(self) -> bool:
        """Advance one instruction; return True if the machine is (now) halted."""
        if self.halted:
            return True
        prog = self.program
        if self.pc >= len(prog) or prog[self.pc][0] == "HALT":
            self.halted = True
            return True
        ins = prog[self.pc]
        if ins[0] == "INC":
            self.regs[ins[1]] += 1
            self.pc = ins[2]
        else:
            r = ins[1]
            if self.regs[r] > 0:
                self.regs[r] -= 1
                self.pc = ins[2]
            else:
                self.pc = ins[3]
        self.steps += 1
        return False


class DovetailEnumerator(REEnumerator):
    """Halting set of a committed two-counter machine table, enumerated by dovetailing.

    Stage t runs machines 0..t (those that exist) until each has taken t steps;
    within a stage, halts are reported in machine-index order. phi(l) is
    1 + the index of the l-th machine seen to halt.
    """

    backend = "dovetail_tm"

    def __init__(self, path=None, max_stage: int = 10_000):
        self.machines_src, self._hash = load_machine_table(path)
        self.max_stage = max_stage
        self._machines = [_Machine(list(p)) for p in self.machines_src]
        self._out: list[int] = []
        self._stage = -1
        self._lock = threading.Lock()

    @property
    def content_hash(self) -> str:
        return self._hash

    def _advance_stage(self) -> None:
        t = self._stage + 1
        if t > self.max_stage:
            raise EnumerationExhausted(f"dovetail budget of {self.max_stage} stages exhausted")
        for idx in range(min(t + 1, len(self._machines))):
            m = self._machines[idx]
            if m.halted:
                continue
            while m.steps < t:
                if m.step():
                    break
            # a machine sitting on HALT is observed in this stage
            if not m.halted and (m.pc >= len(m.program) or m.program[m.pc][0] == "HALT"):
                m.halted = True
            if m.halted:
                self._out.append(idx + 1)
        self._stage = t

    def enumerate(self, i: int) -> int:
        if i < 1:
            raise ValueError("enumerations are indexed from 1")
        with self._lock:
            while len(self._out) < i:
                self._advance_stage()
            return self._out[i - 1]


# -- Specker numbers -------------------------------------------------------


class SpeckerNumber:
    """x_A = sum_l 2**-phi(l): partial sums are computable, increasing and below 1."""

    def __init__(self, enumerator: REEnumerator):
        self.enumerator = enumerator

    def partial(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("k must be >= 0")
        return sum((pow2(-self.enumerator.enumerate(l)) for l in range(1, k + 1)), Fraction(0))

    def as_sigma1(self) -> Sigma1Cert:
        cache: dict[int, Fraction] = {0: Fraction(0)}
        exhausted: list[int] = []
        lock = threading.Lock()

        def term(k: int) -> Fraction:
            with lock:
                top = max(j for j in cache if j <= k)
                s = cache[top]
                for l in range(top + 1, k + 1):
                    if exhausted:
                        break
                    try:
                        s += pow2(-self.enumerator.enumerate(l))
                    except EnumerationExhausted:
                        # budget spent: the certificate stays at its last value
                        exhausted.append(l)
                        break
                    cache[l] = s
                return s

        return Sigma1Cert(term, 1, name=f"specker[{self.enumerator.backend}]")


def specker_partial(s: SpeckerNumber, k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be >= 1")
    return s.partial(k)


def check_monotone(term: Callable[[int], Fraction], k_max: int, increasing: bool = True) -> Optional[int]:
    """First k violating monotonicity on 0..k_max, or None."""
    prev = term(0)
    for k in range(1, k_max + 1):
        cur = term(k)
        if (cur < prev) if increasing else (cur > prev):
            return k
        prev = cur
    return None
