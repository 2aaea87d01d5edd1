"""Audit a few builtin quotients and print the verdicts.

Run with ``python3 demos/audit_quickstart.py``.
"""
from abquot import catalog, smooth


def main():
    for label in ("example-a-2-3", "example-b-3", "gmpn-3-3-3", "diagonal-sym-3"):
        sc = catalog.builtin(label)
        verdict = smooth.smoothness_audit(sc, depth=3, torsion=(4,))
        line = f"{label:18s} |G| = {sc.group.order:5d}  {verdict.kind}"
        if verdict.kind == "NotSmooth":
            rep = verdict.report
            line += f"  (stabilizer {rep.order}, reflection part {rep.reflection_order})"
        print(line)


if __name__ == "__main__":
    main()
