"""Run the acceptance matrix and print one line per criterion.

    python scripts/run_acceptance.py --seed 7 --threads 2 [--out report.json]
"""

import argparse
import json
import sys
import time

from psfield import acceptance
from psfield.report import RunReport


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", help="also write the JSON report here")
    args = ap.parse_args()

    rep = RunReport(["run_acceptance.py"] + sys.argv[1:], {"seed": args.seed}, seed=args.seed)
    t0 = time.perf_counter()
    for check in acceptance.run_all(args.seed, args.threads):
        rep.add(check)
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}", flush=True)
    rep.wall_time = time.perf_counter() - t0
    print(f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} passed in {rep.wall_time:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2, sort_keys=True)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
