#!/usr/bin/env python3
"""Generate the bundled table of Riemann zeta critical-line zeros.

Writes one positive imaginary part per line, ascending, 12 decimal places.
Values are computed with mpmath.zetazero, which locates and separates the
n-th zero rigorously. The script resumes: existing lines are kept and only
missing indices are computed, so it can be interrupted and re-run.

Usage:
    python scripts/generate_zero_table.py --count 5000 \
        --out src/zetalab/data/riemann_zeros.txt
"""

import argparse
import os
import sys
import time

from mpmath import mp, zetazero


def existing_line_count(path: str) -> int:
    if not os.path.exists(path):
        return 0
    with open(path, "r", encoding="ascii") as fh:
        return sum(1 for line in fh if line.strip())


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=5000, help="zeros to tabulate")
    ap.add_argument("--out", default="src/zetalab/data/riemann_zeros.txt")
    ap.add_argument("--dps", type=int, default=25, help="mpmath working precision")
    ap.add_argument("--progress-every", type=int, default=100)
    args = ap.parse_args()

    mp.dps = args.dps
    done = existing_line_count(args.out)
    if done >= args.count:
        print(f"{args.out}: already has {done} zeros, nothing to do")
        return 0

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    t0 = time.time()
    with open(args.out, "a", encoding="ascii") as fh:
        for n in range(done + 1, args.count + 1):
            beta = zetazero(n).imag
            fh.write(f"{float(beta):.9f}\n")
            fh.flush()
            if n % args.progress_every == 0:
                rate = (n - done) / (time.time() - t0)
                print(f"  zero {n}/{args.count}  ({rate:.1f}/s)", file=sys.stderr)
    print(f"wrote zeros {done + 1}..{args.count} to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
