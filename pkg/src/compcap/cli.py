"""compcap command line.

Exit codes: 0 ok, 2 validation error, 3 precision cap, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, fixtures, reports
from .config import SCHEMA_VERSION, ConfigError, RunConfig, load_config, parse_value
from .creal import PrecisionCapError
from .exact import DomainError

EXIT_OK, EXIT_VALIDATION, EXIT_PRECISION, EXIT_VERIFY = 0, 2, 3, 4

# flag -> config field, for flags whose value is parsed like a config entry
_VALUE_FLAGS = (
    "kind", "cert", "shift", "terms", "enumerator", "truncation", "channel", "P",
    "sigma1_sq", "sigma2_sq", "k", "radius", "integrand", "lo", "hi", "samples",
    "only", "golden_dir", "precision_bits", "seed", "threads", "out", "format",
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value run file ([run] section)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--precision-bits", dest="precision_bits")
    p.add_argument("--seed")
    p.add_argument("--threads")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generated_at field")


def _add_channel(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", help=f"fixture channel: {', '.join(fixtures.CHANNEL_NAMES)}")
    p.add_argument("--P")
    p.add_argument("--sigma1-sq", dest="sigma1_sq")
    p.add_argument("--sigma2-sq", dest="sigma2_sq")
    p.add_argument("--terms", help="bump-train truncation (number of bumps)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="compcap", description="certified capacity experiments")
    ap.add_argument("--version", action="version", version=f"compcap {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-pdf", help="build a fading pdf and its normalization report")
    _add_common(p)
    p.add_argument("--kind", choices=("bump_train", "star"))
    p.add_argument("--cert", help=f"fixture certificate: {', '.join(fixtures.CERTS)}")
    p.add_argument("--shift")
    p.add_argument("--terms")
    p.add_argument("--enumerator", help=f"{', '.join(fixtures.ENUMERATORS)}")
    p.add_argument("--truncation")
    p.add_argument("--sigma1-sq", dest="sigma1_sq")
    p.add_argument("--sigma2-sq", dest="sigma2_sq")
    p.add_argument("--P")

    p = sub.add_parser("capacity", help="capacity certificate and (k, a_k, b_k, a_k-b_k) trace")
    _add_common(p)
    _add_channel(p)
    p.add_argument("--k", help="last truncation index of the trace")
    p.add_argument("--radius", help="integration radius for the enclosure")
    p.add_argument("--enumerator")

    p = sub.add_parser("specker", help="prefix of a Specker sum")
    _add_common(p)
    p.add_argument("--enumerator")
    p.add_argument("--k")

    p = sub.add_parser("quad", help="certified single-bump quadrature with cross-checks")
    _add_common(p)
    p.add_argument("--integrand", choices=("capacity", "gap", "mass"))
    p.add_argument("--shift")
    p.add_argument("--P")
    p.add_argument("--sigma1-sq", dest="sigma1_sq")
    p.add_argument("--lo")
    p.add_argument("--hi")
    p.add_argument("--samples", help="Monte-Carlo samples (0 disables)")
    p.add_argument("--enumerator")

    p = sub.add_parser("verify", help="run the invariant suites")
    _add_common(p)
    p.add_argument("--only", help="comma-separated suite names")
    p.add_argument("--golden-dir", dest="golden_dir")
    p.add_argument("--enumerator")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    over = {}
    for name in _VALUE_FLAGS:
        raw = getattr(args, name, None)
        if raw is None:
            continue
        over[name] = parse_value(name, raw) if isinstance(raw, str) else raw
    if getattr(args, "no_timestamp", False):
        over["timestamp"] = False
    return base.merged(over).validate()


def _meta(cfg: RunConfig, command: str) -> dict:
    en = fixtures.enumerator(cfg.enumerator)
    m = {
        "tool": f"compcap {__version__}",
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "config_digest": cfg.digest,
        "config": cfg.canonical(),
        "enumerator": en.describe(),
        "decimal_digits": reports.DECIMAL_DIGITS,
    }
    if cfg.timestamp:
        m["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return m


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(meta: dict, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    for key in ("tool", "command", "config_digest", "generated_at"):
        if key in meta:
            buf.write(f"# {key}={meta[key]}\n")
    buf.write(f"# enumerator={meta['enumerator']['backend']}:{meta['enumerator']['content_hash']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _companion(out: Optional[str], suffix: str) -> Optional[str]:
    return None if out is None else str(Path(out).with_suffix(suffix))


def cmd_gen_pdf(cfg: RunConfig) -> int:
    res = reports.gen_pdf(cfg)
    meta = _meta(cfg, "gen-pdf")
    if cfg.format == "csv":
        r = res["report"]
        rows = [(k, json.dumps(v, sort_keys=True)) for k, v in sorted(r.items())]
        _emit(_csv(meta, ("field", "value"), rows), cfg.out)
        if cfg.out:
            _emit(_dump_json({"meta": meta, **res}), _companion(cfg.out, ".pdf.json"))
    else:
        _emit(_dump_json({"meta": meta, **res}), cfg.out)
    return EXIT_OK


def cmd_capacity(cfg: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", reports.UnderCoverageWarning)
        res = reports.capacity(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    meta = _meta(cfg, "capacity")
    if cfg.format == "csv":
        header = ("k", "a_k", "b_k", "a_k-b_k", "a_k_decimal", "b_k_decimal", "a_k-b_k_decimal")
        rows = [
            (r["k"], r["a_k"]["exact"], r["b_k"]["exact"], r["a_k-b_k"]["exact"],
             r["a_k"]["decimal"], r["b_k"]["decimal"], r["a_k-b_k"]["decimal"])
            for r in res["trace"]
        ]
        _emit(_csv(meta, header, rows), cfg.out)
        cert = {"meta": meta, "channel": res["channel"], "certificate": res["certificate"]}
        if cfg.out:
            _emit(_dump_json(cert), _companion(cfg.out, ".cert.json"))
        else:
            sys.stdout.write(_dump_json(cert))
    else:
        _emit(_dump_json({"meta": meta, **res}), cfg.out)
    return EXIT_OK


def cmd_specker(cfg: RunConfig) -> int:
    res = reports.specker(cfg)
    meta = _meta(cfg, "specker")
    if cfg.format == "csv":
        rows = [(r["l"], r["phi"], r["partial_sum"]["exact"], r["partial_sum"]["decimal"]) for r in res["rows"]]
        _emit(_csv(meta, ("l", "phi", "partial_sum", "partial_sum_decimal"), rows), cfg.out)
    else:
        _emit(_dump_json({"meta": meta, **res}), cfg.out)
    return EXIT_OK


def cmd_quad(cfg: RunConfig) -> int:
    res = reports.quad(cfg)
    _emit(_dump_json({"meta": _meta(cfg, "quad"), **res}), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_suites

    only = [s.strip() for s in cfg.only.split(",")] if cfg.only else None
    report = run_suites(only=only, golden_dir=cfg.golden_dir)
    if cfg.format == "json" and cfg.out:
        _emit(_dump_json({"meta": _meta(cfg, "verify"), **report.to_json()}), cfg.out)
    sys.stdout.write(report.render())
    return EXIT_OK if report.ok else EXIT_VERIFY


COMMANDS = {
    "gen-pdf": cmd_gen_pdf,
    "capacity": cmd_capacity,
    "specker": cmd_specker,
    "quad": cmd_quad,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except PrecisionCapError as exc:
        print(f"error: precision cap: {exc} (achievable ~{exc.achievable} bits)", file=sys.stderr)
        return EXIT_PRECISION
    except (ConfigError, DomainError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
