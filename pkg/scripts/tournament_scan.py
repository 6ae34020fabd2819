"""Exhaustive p-tournament scans over a range of prime fields.

    python scripts/tournament_scan.py --p 3 --q-max 40
"""

import argparse
import time

from psfield import ff_core, tournament


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--q-max", type=int, default=40)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    for q in range(2, args.q_max + 1):
        try:
            p0, n = ff_core.prime_power(q)
        except ValueError:
            continue
        if (q - 1) % args.p:
            continue
        params = tournament.make_params(ff_core.make_field(p0, n), args.p)
        t0 = time.perf_counter()
        rep = tournament.verify_p_tournament(params, args.threads)
        dt = time.perf_counter() - t0
        print(f"F_{q:<4} tuples {rep.tuples_checked:>10}  violations {len(rep.violations):>3}  {dt:6.2f}s")


if __name__ == "__main__":
    main()
