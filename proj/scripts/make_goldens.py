#!/usr/bin/env python3
"""Regenerate the golden symbol corpus in tests/golden/.

Usage: make_goldens.py <path-to-gatecode-binary>

Writes one PBM per entry plus manifest.json. Run verify_golden.py afterwards
to re-check the corpus against an independent reader and stamp the manifest.
"""

import json
import pathlib
import random
import re
import subprocess
import sys

# Numeric capacity (digits) per version 1..10, by EC level.
CAPACITY = {
    "L": [41, 77, 127, 187, 255, 322, 370, 461, 552, 652],
    "M": [34, 63, 101, 149, 202, 255, 293, 365, 432, 513],
    "Q": [27, 48, 77, 111, 144, 178, 207, 259, 312, 364],
    "H": [17, 34, 58, 82, 106, 139, 154, 202, 235, 288],
}

BY_LIGHT = ("3344226426262426"
            "3544226426262426"
            "3744262666422626"
            "5544266426262426"
            "7744266426262426")
BY_PROTEINOID = "104422642626242611442264262624260144226426262426"
BY_GATE = "10370137"


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    binary = sys.argv[1]
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(20240815)
    entries = []

    def make(name: str, payload: str, version: int = 0, ec: str = "M") -> None:
        cmd = [binary, "encode", payload, "--ec", ec, "--out", str(out_dir / name)]
        if version:
            cmd += ["--version", str(version)]
        proc = subprocess.run(cmd, capture_output=True, text=True, check=True)
        m = re.match(r"version (\d+) ec (\w) mask (\d+)", proc.stdout)
        if not m:
            raise RuntimeError(f"unexpected encoder output: {proc.stdout!r}")
        entries.append({
            "file": name,
            "payload": payload,
            "version": int(m[1]),
            "ec": m[2],
            "mask": int(m[3]),
        })

    def digits(n: int) -> str:
        return "".join(rng.choice("0123456789") for _ in range(n))

    # The three reference message strings, at their natural versions.
    make("light_groups_v3M.pbm", BY_LIGHT)
    make("proteinoid_groups_v2M.pbm", BY_PROTEINOID)
    make("gate_pairs_v1M.pbm", BY_GATE)

    # The classic numeric-mode walkthrough payload.
    make("walkthrough_v1M.pbm", "01234567", version=1, ec="M")

    # Every version 1..10 at a rotating EC level, filled to capacity.
    rotation = ["L", "M", "Q", "H", "L", "M", "Q", "H", "L", "M"]
    for v in range(1, 11):
        ec = rotation[v - 1]
        make(f"full_v{v}{ec}.pbm", digits(CAPACITY[ec][v - 1]), version=v, ec=ec)

    # Every EC level at version 1 with a short payload.
    for ec in "LMQH":
        make(f"short_v1{ec}.pbm", "3141592653", version=1, ec=ec)

    make("tall_v7H.pbm", digits(100), version=7, ec="H")
    make("dense_v10H.pbm", digits(CAPACITY["H"][9]), version=10, ec="H")
    make("zeros_v5Q.pbm", "0" * 16, version=5, ec="Q")
    make("lone_v6L.pbm", "7", version=6, ec="L")

    manifest = {"verifier": None, "symbols": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(entries)} symbols and manifest.json to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
