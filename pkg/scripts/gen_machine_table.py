"""Regenerate the committed two-counter machine table.

The table is a reproducibility artifact: the dovetail enumerator's output is
fixed by it, and its sha256 is embedded in every output that depends on it.
Only rerun this when deliberately changing the table (golden files change too).

    python scripts/gen_machine_table.py src/compcap/data/machines.json
"""

import argparse
import json
import random

SEED = 20250101
N_MACHINES = 512


def random_program(rng: random.Random) -> list:
    length = rng.randint(2, 6)
    prog = []
    for _ in range(length):
        kind = rng.random()
        if kind < 0.1:
            prog.append(["HALT"])
        elif kind < 0.5:
            prog.append(["INC", rng.randint(0, 1), rng.randint(0, length)])
        else:
            prog.append(["DEC", rng.randint(0, 1), rng.randint(0, length), rng.randint(0, length)])
    return prog


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    args = ap.parse_args()
    rng = random.Random(SEED)
    table = {
        "format": "two-counter-machines/v1",
        "semantics": (
            "counters r0=r1=0, pc=0; INC r j: r+=1, pc=j; DEC r j k: if r>0 then r-=1, pc=j "
            "else pc=k; HALT or pc==len(program) halts"
        ),
        "machines": [random_program(rng) for _ in range(N_MACHINES)],
    }
    with open(args.out, "w") as fh:
        json.dump(table, fh, separators=(",", ":"))
        fh.write("\n")


if __name__ == "__main__":
    main()
