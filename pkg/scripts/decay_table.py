"""Exact measures of the level-k events, with the step ratios.

    python scripts/decay_table.py --primes 2 3 5 7 --k-max 6
"""

import argparse

from psfield import haar_sim


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5, 7])
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--event", default="power-fixes", choices=haar_sim.EVENTS)
    args = ap.parse_args()

    for p in args.primes:
        k_max = args.k_max
        while p**k_max > haar_sim.ENUM_LIMIT:
            k_max -= 1
        t = haar_sim.decay_table(p, k_max, args.event)
        print(f"p = {p}  ({args.event}, decay {'ok' if t.decay_holds() else 'BROKEN'})")
        print(f"  {'k':>3} {'measure':>12} {'ratio':>8}")
        for k, (m, r) in enumerate(zip(t.measures, [None] + t.ratios), start=1):
            print(f"  {k:>3} {str(m):>12} {'' if r is None else str(r):>8}")


if __name__ == "__main__":
    main()
