#!/usr/bin/env python3
"""Run the index axiom suite and print a per-axiom summary.

Usage: python scripts/run_axiom_suite.py --seed 7 --count 100
"""

import argparse
import sys
import time

from symidx.axioms import AXIOMS, run_axiom_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--axioms", nargs="*", default=None,
                    help="subset of: %s" % ", ".join(AXIOMS))
    args = ap.parse_args()

    t0 = time.monotonic()
    report = run_axiom_suite(args.seed, args.count, axioms=args.axioms)
    dt = time.monotonic() - t0

    width = max(len(name) for name in report["axioms"])
    for name, r in report["axioms"].items():
        status = "ok" if r["passed"] else "FAIL (%d)" % len(r["failures"])
        print("%-*s  %4d trials  %s" % (width, name, r["trials"], status))
        for f in r["failures"][:5]:
            print("    trial %d: %s" % (f["trial"], f["detail"]))
    print("total: %.1f s, all_passed=%s" % (dt, report["all_passed"]))
    return 0 if report["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
