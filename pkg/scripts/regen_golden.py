"""Regenerate the golden files under src/compcap/data/golden.

The oracle-1 reference value comes from the mpmath oracle (about 20 s). Pass
--keep-oracle to reuse the value already on disk.

    python3 scripts/regen_golden.py [--keep-oracle]
"""

import argparse
import json
from pathlib import Path

from compcap import verify

OUT = Path(__file__).resolve().parents[1] / "src" / "compcap" / "data" / "golden"


def write(name: str, payload: dict) -> None:
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print("wrote", OUT / name)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--keep-oracle", action="store_true")
    args = ap.parse_args()
    OUT.mkdir(parents=True, exist_ok=True)
    write("specker_dovetail_k10.json", verify.golden_specker())
    write("gen_pdf_geo1.json", verify.golden_gen_pdf())
    write("theorem1_oracle1_k32.json", verify.golden_theorem1())
    oracle = None
    if args.keep_oracle and (OUT / "capacity_oracle1.json").exists():
        oracle = json.loads((OUT / "capacity_oracle1.json").read_text())["oracle_value"]
    write("capacity_oracle1.json", verify.golden_capacity(oracle))


if __name__ == "__main__":
    main()
