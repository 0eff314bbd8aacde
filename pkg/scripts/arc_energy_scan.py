#!/usr/bin/env python3
"""Minor-arc energy share across scales for a family of test functions.

Bounded-distance functions concentrate their square mass on the arcs around
low rationals, so the minor share drops as the scale grows; functions far
from every character twist keep an order-one share.

Usage: python3 scripts/arc_energy_scan.py [k_min k_max]   (scales x = 2^k)
"""

import sys

from pretsums.expsum import minor_arc_energy
from pretsums.funcspec import parse_multfunc
from pretsums.pretentious import brudern_check

FUNCS = ["one", "legendre:3", "legendre:5", "minus-all", "randpm:1"]


def main() -> int:
    k_min = int(sys.argv[1]) if len(sys.argv) > 1 else 12
    k_max = int(sys.argv[2]) if len(sys.argv) > 2 else 16
    scales = [2**k for k in range(k_min, k_max + 1, 2)]
    header = "function".ljust(14) + "".join(f"2^{k}".rjust(12) for k in range(k_min, k_max + 1, 2))
    print(header + "   distance growth")
    for spec in FUNCS:
        f = parse_multfunc(spec)
        ratios = [minor_arc_energy(f, x).minor_ratio for x in scales]
        rb = brudern_check(f, 1000)
        row = spec.ljust(14) + "".join(f"{r:12.5f}" for r in ratios)
        print(row + f"   {rb.growth:8.4f} ({rb.verdict})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
