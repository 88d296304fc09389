"""Build the witness family for each curated structure and report its claims.

    python3 scripts/witness_demo.py [--bound 3] [--only tto_one_loop]
"""
import argparse

from cohpow.realize import Presentation
from cohpow.suite import curated_suite
from cohpow.witness import verify_family, witnesses


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=3, help="largest m and n or |z|")
    ap.add_argument("--only")
    a = ap.parse_args()
    for e in curated_suite():
        if a.only and e.name != a.only:
            continue
        P = Presentation(e.spec)
        for kind in e.families:
            res = verify_family(witnesses(P, kind, a.bound, a.bound))
            failed = [r for r in res if not r.passed]
            lo, hi = res[0].window
            print(f"{e.name:30} {kind:30} claims={len(res):4} window=[{lo},{hi}] "
                  f"max-threshold={max(r.threshold for r in res):3} failed={len(failed)}")
            for r in failed[:3]:
                print("   ", r.claim, r.counterexamples[:2])


if __name__ == "__main__":
    main()
