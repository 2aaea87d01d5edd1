"""List the invariant lattices between the root lattice and its S-dual.

Usage: ``python3 demos/invariant_lattices.py [group number]`` (default 4).
"""
import sys

from abquot import catalog


def main(st_number: int = 4):
    enum = catalog.enumerate_sporadic_lattices(catalog.load_sporadic(st_number, verify_order=False))
    print(f"group {st_number}: det_norm = {enum.det_norm}, {len(enum.lattices)} lattices")
    for L in enum.lattices:
        print(f"  {L.label}\tindex {L.index}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
