#!/usr/bin/env python3
"""Largest-prime-factor scan: for n in (x, 2x], what share of P(n) have a
prime factor >= x^(1+c)?

Usage: python scripts/run_lpf_scan.py --x 100000 [--poly 2,0,0,0]
       [--c-grid 0,1/4,1/2,3/4,1] [--threads 4] [--csv out.csv]
"""

import argparse
import sys
from fractions import Fraction

from quarticlab.experiments import emit_report, lpf_scan
from quarticlab.quartic import QuarticPoly


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--poly", default="2,0,0,0")
    ap.add_argument("--x", type=int, default=10**5)
    ap.add_argument("--c-grid", dest="c_grid", default="0,1/4,1/2,3/4,1,5/4,3/2")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    cs = tuple(int(t) for t in args.poly.split(","))
    P = QuarticPoly.analyze(*cs)
    grid = [Fraction(t) for t in args.c_grid.split(",")]
    rep = lpf_scan(P, args.x, grid, threads=args.threads)
    for row in rep["rows"]:
        prop = Fraction(row["proportion"])
        print(f"c = {row['c']:>6}: {row['count']:>8} / {rep['n_scanned']}"
              f"  ({float(prop):.4f})")
    if rep["undecided"]:
        print(f"undecided rows: {rep['undecided']}")
    if args.csv:
        emit_report(rep, "csv", args.csv)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
