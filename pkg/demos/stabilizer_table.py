"""Recompute stabilizer orders for the small sporadic table rows.

Each row names a lattice and a torsion point. The script prints the
computed |Stab| and |reflection subgroup| next to the published values.
"""
from abquot import catalog, smooth


def main():
    cache = {}
    print("group\tlattice\tcomputed\tpublished")
    for row in catalog.table_rows("paper1", ("small",)):
        if row.st_number not in cache:
            cache[row.st_number] = catalog.load_sporadic(row.st_number)
        rep = smooth.point_stabilizer_report(cache[row.st_number].scenario(row.lattice), row.v0)
        print(f"{row.st_number}\t{row.lattice}\t{rep.order}/{rep.reflection_order}\t{row.S0}/{row.P0}")


if __name__ == "__main__":
    main()
