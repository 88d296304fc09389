"""Tabulate the spacing window |{f^z(g(n)) : -n <= z <= n, 0 <= n <= m}| against (m+1)^2.

Runs on the single-loop 2:1 structure and on a (2,0):1 structure with a Z-chain.
"""
import argparse

from cohpow.core import Character, TwoToOneSpec, TwoZeroToOneSpec
from cohpow.realize import Presentation
from cohpow.witness import spacing_g, spacing_window_size


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m-max", type=int, default=10)
    a = ap.parse_args()
    structures = {
        "2:1, one loop": TwoToOneSpec(cycle_character=Character.of({1: 1})),
        "(2,0):1, one Z-chain": TwoZeroToOneSpec(z_chains=1),
    }
    for name, spec in structures.items():
        P = Presentation(spec)
        print(f"{name}")
        print(f"{'m':>3} {'g(m)':>22} {'window':>7} {'(m+1)^2':>8}")
        for m in range(a.m_max + 1):
            size = spacing_window_size(P, m)
            mark = "" if size == (m + 1) ** 2 else "  <-- mismatch"
            print(f"{m:>3} {spacing_g(P, m):>22} {size:>7} {(m + 1) ** 2:>8}{mark}")
        print()


if __name__ == "__main__":
    main()
