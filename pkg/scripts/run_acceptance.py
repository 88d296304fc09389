"""Run the acceptance battery and print one line per criterion.

    python3 scripts/run_acceptance.py [--seed N] [--skip 6 --skip 3] [--json out.json]
"""
import argparse
import json
import sys

from cohpow.acceptance import run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip", type=int, action="append", default=[])
    ap.add_argument("--json")
    a = ap.parse_args()
    results = run_all(seed=a.seed, skip=set(a.skip))
    for r in results:
        print(r.line())
    if a.json:
        with open(a.json, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=1)
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
