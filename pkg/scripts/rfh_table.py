#!/usr/bin/env python3
"""Print the graded GF(2) table of the cascade complex for S*S^n.

Usage: python scripts/rfh_table.py --n 4 --window 2
"""

import argparse
import sys
from fractions import Fraction

from symidx.chain import rfh_unit_sphere


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4, help="sphere dimension (>= 4)")
    ap.add_argument("--window", type=int, default=2,
                    help="tower window: components k = -K .. K")
    args = ap.parse_args()

    table = rfh_unit_sphere(args.n, args.window)
    print("S*S^%d, window K=%d, lacunary=%s" % (args.n, args.window,
                                                table["lacunary"]))
    print("degree     dim")
    for d in sorted(table["betti"]):
        b = table["betti"][d]
        if b:
            print("%8s  %4d" % (Fraction(d, 2), b))
    print("period of the degree pattern: %d" % (2 * args.n - 2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
