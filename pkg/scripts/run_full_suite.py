#!/usr/bin/env python3
"""Run every CLI suite over the shipped configs and summarize exit codes.

Usage: python scripts/run_full_suite.py [--out DIR] [--seed N]
"""

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from angen.cli import SUBCOMMANDS, main  # noqa: E402

CONFIGS = ["diagonal_small.json", "hermitian4.json", "identity.json"]


def run() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(ROOT / "out" / "full_suite"))
    ap.add_argument("--seed", default="0")
    args = ap.parse_args()

    failures = 0
    rows = []
    for cfg in CONFIGS:
        for sub in SUBCOMMANDS:
            outdir = Path(args.out) / Path(cfg).stem / sub
            t0 = time.monotonic()
            code = main(
                [
                    sub,
                    "--config",
                    str(ROOT / "configs" / cfg),
                    "--out",
                    str(outdir),
                    "--seed",
                    args.seed,
                ]
            )
            dt = time.monotonic() - t0
            rows.append((cfg, sub, code, dt))
            if code != 0:
                failures += 1

    print()
    print(f"{'config':<22}{'subcommand':<18}{'exit':<6}{'seconds':>8}")
    for cfg, sub, code, dt in rows:
        print(f"{cfg:<22}{sub:<18}{code:<6}{dt:>8.2f}")
    print(f"\n{len(rows)} runs, {failures} failing")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(run())
