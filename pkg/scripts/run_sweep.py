#!/usr/bin/env python3
"""Classify all 256 rules and write certificates, manifest and report.

    python3 scripts/run_sweep.py --out certificates --jobs 4
    python3 scripts/run_sweep.py --verify   # re-check every certificate afterwards
"""

import argparse
import sys
import time
from pathlib import Path

from collatz2d import cli
from collatz2d.certificate import verify


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="certificates")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=float, default=60.0)
    p.add_argument("--verify", action="store_true", help="run the independent verifier on every output")
    args = p.parse_args()

    t = time.monotonic()
    certs, times = cli.sweep({"budget": args.budget}, jobs=args.jobs)
    man = cli.write_outputs(Path(args.out), certs, times)
    print(cli.report(man), end="")
    slow = sorted(times.items(), key=lambda kv: -kv[1])[:5]
    print(f"wall {time.monotonic() - t:.1f} s; slowest " + ", ".join(f"{r} {s:.1f}s" for r, s in slow))

    if args.verify:
        bad = [rid for rid, c in certs.items() if not verify(c).ok]
        print(f"verified {len(certs) - len(bad)}/{len(certs)}" + (f"; failing {bad}" if bad else ""))
        return 1 if bad else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
