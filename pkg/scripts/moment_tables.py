#!/usr/bin/env python3
"""First-moment landscape tables.

Three quick computations on the exact log-space formulas, no sampling:
the below/above-threshold dichotomy of log E(Y) as n grows, the shrinking
gap between exact and Stirling-approximated log E(Y), and the extremal
color-ratio prefactor with its exhaustive-scan confirmation.
"""

import math
import sys
from fractions import Fraction

from rainbowhc import (
    MomentParams,
    asymptotic_expected_Y,
    claim_max,
    log_expected_Y,
    threshold_general,
    tight_prefactor,
)


def dichotomy_table() -> None:
    print("log E(Y) at 0.9x / 1.1x the first-moment threshold")
    ns = (50, 100, 200, 400, 800)
    header = f"{'k':>2} {'ell':>3} {'c':>5} {'side':>5} " + " ".join(f"{('n=' + str(n)):>10}" for n in ns)
    print(header)
    for k, ell, c in ((4, 3, Fraction(1)), (4, 3, Fraction(2)), (3, 2, Fraction(1)), (5, 3, Fraction(1, 2))):
        for factor in (0.9, 1.1):
            vals = []
            for n in ns:
                p = factor * threshold_general(k, ell, c, n)
                vals.append(log_expected_Y(MomentParams.from_color_density(n, k, ell, p, c)))
            cells = " ".join(f"{v:>10.2f}" for v in vals)
            print(f"{k:>2} {ell:>3} {str(c):>5} {factor:>5} {cells}")
    print()


def stirling_table() -> None:
    print("relative error of the Stirling form of log E(Y), tight k=4")
    for c in (Fraction(1), Fraction(2)):
        errs = []
        for n in (30, 60, 120, 240, 480):
            p = tight_prefactor(c) * math.e**2 / n
            params = MomentParams.from_color_density(n, 4, 3, p, c)
            le = log_expected_Y(params)
            la = asymptotic_expected_Y(params)
            errs.append(abs(le - la) / abs(le))
        print(f"  c={c}: " + "  ".join(f"{e:.2e}" for e in errs))
    print()


def prefactor_table() -> None:
    print("tight-cycle threshold prefactor ((c-1)/c)^(c-1)")
    for c in (Fraction(101, 100), Fraction(11, 10), Fraction(3, 2), Fraction(2), Fraction(10), Fraction(100)):
        b, val = claim_max(c, 500)
        print(f"  c={str(c):>8}: prefactor={tight_prefactor(c):.6f}  scan argmax b={b} value={val:.6f}")
    print(f"  limit as c grows: 1/e = {1 / math.e:.6f}")


def main() -> int:
    dichotomy_table()
    stirling_table()
    prefactor_table()
    return 0


if __name__ == "__main__":
    sys.exit(main())
