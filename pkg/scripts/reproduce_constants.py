#!/usr/bin/env python3
"""Reproduce every headline constant with timings.

Usage: python3 scripts/reproduce_constants.py [pmax]
"""

import sys
import time

from pretsums.circle import archimedean_E, c2_product, cor2_constants, delta0, extremal_table


def main() -> int:
    pmax = int(sys.argv[1]) if len(sys.argv) > 1 else 10**6
    t0 = time.time()
    d0 = delta0()
    k, kp = cor2_constants()
    c2 = c2_product(pmax)
    tab = extremal_table(pmax)
    einf = archimedean_E(1, 1, -1).real
    print(f"delta0              = {d0:.9f}   (expected 0.656999...)")
    print(f"kappa               = {k:.9f}   (expected 0.56869...)")
    print(f"kappa'              = {kp:.9f}   (expected 0.005044...)")
    print(f"C2 product (p<={pmax:.0e}) = {c2:.6f}   (expected 1.322...)")
    print(f"two-(+1)-one-(-1)   = {tab['eight_forty_fifths']:.9f} = 8/45 at "
          f"P={tab['eight_forty_fifths_argmax']['P']}, t={tab['eight_forty_fifths_argmax']['t']:.3f}")
    print(f"two-(-1)-one-(+1)   = {tab['two_minus_one_max']:.6f}   (expected 0.15611...) at "
          f"P={tab['two_minus_one_argmax']['P']}, t={tab['two_minus_one_argmax']['t']:.6f}")
    print(f"mixed maxima        = {tab['mixed_max']}")
    print(f"E(inf) at (1,1,-1)  = {einf:.9f}   (expected 0.5)")
    print(f"[{time.time() - t0:.1f}s]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
