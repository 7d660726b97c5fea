#!/usr/bin/env python3
"""Run the full exact identity battery over the six reference quartics plus
seeded random ones, and write a JSON ledger.

Usage: python scripts/run_identity_battery.py [--random 20] [--seed 20250809]
"""

import argparse
import json
import random
import sys
import time

from quarticlab.cofactors import build_suite, identity_report
from quarticlab.normform import delta14_link, split_q, verify_normform
from quarticlab.quartic import QuarticPoly, is_irreducible_quartic

SIX = [(1, 1, 1, 1), (5, 0, -5, 0), (39, 13, 0, 0), (2, 0, 0, 0), (3, 3, 0, 0), (3, 0, -5, 0)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--random", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20250809)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    quartics = list(SIX)
    while len(quartics) < len(SIX) + args.random:
        cs = tuple(rng.randint(-20, 20) for _ in range(4))
        if is_irreducible_quartic(*cs):
            quartics.append(cs)

    ledger = []
    t0 = time.time()
    for cs in quartics:
        P = QuarticPoly.analyze(*cs)
        entry = {"poly": list(cs), "galois": P.galois}
        entry["identities"] = [
            {"name": n, "pass": ok} for n, ok in identity_report(P)
        ]
        if P.galois in ("C4", "D4"):
            s = build_suite(P)
            nf = verify_normform(P, s)
            entry["identities"].append(
                {"name": "normform sign*q1 = Res", "pass": True}
            )
            entry["identities"].append(
                {"name": "Delta14 = -q3*h", "pass": delta14_link(P, s, nf.q2)}
            )
        ledger.append(entry)
        print(f"{cs}: {P.galois} "
              f"{'ok' if all(i['pass'] for i in entry['identities']) else 'FAIL'}")
    report = {
        "elapsed_s": round(time.time() - t0, 2),
        "quartics": len(quartics),
        "ledger": ledger,
        "pass": all(i["pass"] for e in ledger for i in e["identities"]),
    }
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text[:400], "...")
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
