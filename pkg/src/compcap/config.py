"""Run configuration: a flat key = value file with a versioned schema.

    [run]
    schema_version = 1
    channel = oracle-1
    P = 4
    k = 32

Flags given on the command line override file values. The config digest is
the sha256 of the canonical JSON of every field that can change an output.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
import re
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Optional

from .exact import format_rational, parse_rational

SCHEMA_VERSION = 1
SECTION = "run"

# fields that never influence the content of an output
_NOT_DIGESTED = {"out", "format", "threads", "timestamp", "config_path"}


class ConfigError(ValueError):
    """Validation failure, with the offending field and (when known) line."""

    def __init__(self, field_name: str, message: str, line: Optional[int] = None):
        self.field = field_name
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{field_name}: {message}")


@dataclass
class RunConfig:
    """Every knob a subcommand may read; defaults are part of schema version 1."""

    # pdf / channel
    kind: str = "bump_train"
    cert: str = "geo-1"
    shift: Optional[Fraction] = None
    terms: int = 32
    enumerator: str = "injected-id"
    truncation: int = 16
    channel: str = "oracle-1"
    P: Optional[Fraction] = None
    sigma1_sq: Optional[Fraction] = None
    sigma2_sq: Optional[Fraction] = None
    k: int = 32
    radius: Optional[int] = None
    # quad
    integrand: str = "capacity"
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(5)
    samples: int = 0
    # verify
    only: Optional[str] = None
    golden_dir: Optional[str] = None
    # common
    precision_bits: int = 32
    seed: int = 12345
    threads: int = 1
    out: Optional[str] = None
    format: str = "json"
    timestamp: bool = True
    config_path: Optional[str] = field(default=None, repr=False)

    def validate(self) -> "RunConfig":
        for name in ("terms", "truncation", "k", "precision_bits", "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be >= 1")
        if self.samples < 0:
            raise ConfigError("samples", "must be >= 0")
        for name in ("P", "sigma1_sq", "sigma2_sq"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConfigError(name, f"must be > 0, got {format_rational(v)}")
        if self.radius is not None and self.radius < 1:
            raise ConfigError("radius", "must be >= 1")
        if self.shift is not None and self.shift < 0:
            raise ConfigError("shift", "must be >= 0")
        if self.kind not in ("bump_train", "star"):
            raise ConfigError("kind", "must be bump_train or star")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be csv or json")
        if self.integrand not in ("capacity", "gap", "mass"):
            raise ConfigError("integrand", "must be capacity, gap or mass")
        if self.hi <= self.lo:
            raise ConfigError("hi", "must exceed lo")
        return self

    def canonical(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name in _NOT_DIGESTED:
                continue
            v = getattr(self, f.name)
            out[f.name] = format_rational(v) if isinstance(v, Fraction) else v
        out["schema_version"] = SCHEMA_VERSION
        return out

    @property
    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def merged(self, overrides: dict[str, Any]) -> "RunConfig":
        kept = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **kept)


def _parse_bool(s: str) -> bool:
    t = s.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _converter(f: dataclasses.Field):
    t = str(f.type)
    if "Fraction" in t:
        return parse_rational
    if "bool" in t:
        return _parse_bool
    if "int" in t:
        return lambda s: int(s.strip())
    return lambda s: s.strip()


_FIELDS = {f.name: f for f in fields(RunConfig) if f.name != "config_path"}


def parse_value(name: str, raw: str, line: Optional[int] = None):
    if name not in _FIELDS:
        raise ConfigError(name, "unknown key", line)
    try:
        return _converter(_FIELDS[name])(raw)
    except ValueError as exc:
        raise ConfigError(name, str(exc), line) from None


def _line_numbers(text: str) -> dict[str, int]:
    pos = {}
    for i, ln in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*[=:]", ln)
        if m:
            pos.setdefault(m.group(1), i)
    return pos


def parse_config_text(text: str, path: Optional[str] = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (P)
    try:
        cp.read_string(text, source=path or "<config>")
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError("<syntax>", str(exc).splitlines()[0], line) from None
    if not cp.has_section(SECTION):
        raise ConfigError("<section>", f"missing [{SECTION}] section")
    lines = _line_numbers(text)
    sec = cp[SECTION]
    if "schema_version" not in sec:
        raise ConfigError("schema_version", "required")
    try:
        ver = int(sec["schema_version"])
    except ValueError:
        raise ConfigError("schema_version", "not an integer", lines.get("schema_version")) from None
    if ver != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {ver}", lines.get("schema_version"))
    values = {}
    for key, raw in sec.items():
        if key == "schema_version":
            continue
        values[key] = parse_value(key, raw, lines.get(key))
    cfg = RunConfig(**values, config_path=path)
    try:
        return cfg.validate()
    except ConfigError as exc:
        raise ConfigError(exc.field, str(exc).split(": ", 1)[-1], lines.get(exc.field)) from None


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), path)
