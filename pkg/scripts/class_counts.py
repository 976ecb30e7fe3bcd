#!/usr/bin/env python3
"""Tabulate isomorphism-class counts by size, with structural breakdowns.

    python3 scripts/class_counts.py --max-n 9
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from effalg.core import derive_order
from effalg.enumeration import EnumerationConfig, enumerate_algebras
from effalg.states import StateVector, find_state
from effalg.structure import is_modular, sharp_mask


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=8)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    print(f"{'n':>3} {'classes':>8} {'lattices':>9} {'modular':>8} "
          f"{'unsharp':>8} {'stateless':>10} {'secs':>7}")
    for n in range(2, args.max_n + 1):
        t0 = time.monotonic()
        total = lattices = modular = unsharp = stateless = 0
        for E in enumerate_algebras(EnumerationConfig(size=n, jobs=args.jobs)):
            total += 1
            order = derive_order(E)
            if order.is_lattice:
                lattices += 1
                if is_modular(E):
                    modular += 1
            if sharp_mask(E) != (1 << E.size) - 1:
                unsharp += 1
            if not isinstance(find_state(E), StateVector):
                stateless += 1
        print(f"{n:>3} {total:>8} {lattices:>9} {modular:>8} "
              f"{unsharp:>8} {stateless:>10} {time.monotonic() - t0:>7.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
