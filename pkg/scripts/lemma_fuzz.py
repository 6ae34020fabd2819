"""Fuzz the commuting-operator lemma and dump the necessity witnesses.

    python scripts/lemma_fuzz.py --seed 1 --trials 10000 --show 5
"""

import argparse
import json

from psfield import kummer_as


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--max-group", type=int, default=256)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--show", type=int, default=3)
    args = ap.parse_args()

    rep = kummer_as.operator_lemma_fuzz(args.seed, args.trials, args.max_group, args.threads)
    print(json.dumps(rep.to_dict(max_witnesses=args.show), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
