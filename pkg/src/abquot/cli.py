"""Command-line interface.

Subcommands::

    abquot audit --scenario LABEL [--depth D] [--torsion N ...] [--jobs W]
    abquot report --scenario LABEL --point "1/2,0,1/3,..."
    abquot tables paper1|paper2|prop33|prop36 [--large]
    abquot lattices --scenario stK | --data FILE
    abquot remark-search --scenario LABEL
    abquot info

Exit status: 0 success, 1 a table differs from its golden baseline or an
audit finds a singular point where smoothness is expected, 2 usage error,
3 a closure or orbit cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import catalog, smooth
from .catalog import Scenario
from .groups import CapExceeded

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
GOLDEN_DIR = catalog.PACKAGE_DATA / "golden"

# scenarios with a proof of smoothness; an audit finding a singular point on
# one of these is a failure
EXPECTED_SMOOTH = {"example-a-2-3", "example-a-3-3", "example-a-4-3", "example-a-6-3",
                   "example-b-2", "example-b-3", "hyperplanar-2-2-3"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers

def parse_point(text: str) -> tuple[Fraction, ...]:
    body = text.strip().strip("()[]")
    try:
        return tuple(Fraction(x.strip()) for x in body.split(",") if x.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse point {text!r}: {exc}") from None


def _resolve_scenario(args) -> Scenario:
    if getattr(args, "data", None):
        try:
            data = catalog.load_sporadic(args.data, verify_order=False)
            sc = data.scenario(args.scenario)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    else:
        if not args.scenario:
            raise UsageError("--scenario is required")
        try:
            sc = catalog.builtin(args.scenario)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "cap", None):
        sc.group.cap = args.cap
    return sc


def _fmt_point(x) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


def _emit(args, header: list[str], rows: list[list], payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=True, default=str))
        return
    print("\t".join(header))
    for r in rows:
        print("\t".join(str(v) for v in r))


# ---------------------------------------------------------------------------
# subcommands

def cmd_audit(args) -> int:
    sc = _resolve_scenario(args)
    torsion = args.torsion or [4]
    verdict = smooth.smoothness_audit(sc, depth=args.depth, torsion=torsion, jobs=args.jobs)
    d = verdict.to_dict()
    if args.format == "json":
        print(json.dumps(d, indent=1, sort_keys=True, default=str))
    else:
        cov = verdict.coverage
        print("\t".join(["scenario", "verdict", "strata", "strata_closed", "singular_strata"]))
        print("\t".join(str(v) for v in [sc.label, verdict.kind, cov["strata"], cov["strata_closed"],
                                         cov["singular_strata"]]))
        if verdict.witness is not None:
            w = verdict.witness
            if isinstance(w, smooth.Stratum):
                print(f"witness\tstratum\tbase={_fmt_point(w.base)}\tdim={w.dim}"
                      f"\tS0={w.stabilizer.order}\tP0={w.reflection_order}")
            else:
                print(f"witness\tpoint\t{_fmt_point(w.point)}\tS0={w.order}\tP0={w.reflection_order}")
    expect = args.expect or ("smooth" if sc.label in EXPECTED_SMOOTH else None)
    if expect == "smooth" and verdict.kind != "SmoothAudited":
        return EXIT_DIFF
    if expect == "singular" and verdict.kind != "NotSmooth":
        return EXIT_DIFF
    return EXIT_OK


def cmd_report(args) -> int:
    sc = _resolve_scenario(args)
    if not args.point:
        raise UsageError("--point is required")
    x = parse_point(args.point)
    if len(x) != sc.dim:
        raise UsageError(f"point has {len(x)} coordinates; {sc.label} needs {sc.dim}")
    rep = smooth.point_stabilizer_report(sc, x)
    payload = dict(rep.to_dict(), scenario=sc.label)
    _emit(args, ["scenario", "point", "S0", "P0", "smooth"],
          [[sc.label, _fmt_point(rep.point), rep.order, rep.reflection_order, rep.smooth]], payload)
    return EXIT_OK


def _sporadic_table(name: str, large: bool, log) -> tuple[list[str], list[list], list[dict]]:
    tiers = ("small", "large", "optional") if large else ("small",)
    header = ["group", "lattice", "v0", "S0", "P0"]
    rows, records = [], []
    cache: dict[int, catalog.SporadicData] = {}
    for r in catalog.table_rows(name, tiers):
        path = catalog.sporadic_path(r.st_number)
        if not path.exists():
            log(f"ST{r.st_number} {r.lattice}: skipped, no data file {path.name}")
            records.append({"group": r.st_number, "lattice": r.lattice, "status": "no data"})
            continue
        t0 = time.time()
        if r.st_number not in cache:
            cache[r.st_number] = catalog.load_sporadic(path)
        sc = cache[r.st_number].scenario(r.lattice)
        rep = smooth.point_stabilizer_report(sc, r.v0)
        rows.append([r.st_number, r.lattice, r.point_text, rep.order, rep.reflection_order])
        records.append({"group": r.st_number, "lattice": r.lattice, "v0": r.point_text,
                        "S0": rep.order, "P0": rep.reflection_order,
                        "published": [r.S0, r.P0], "seconds": round(time.time() - t0, 2)})
        log(f"ST{r.st_number} {r.lattice}: {rep.order} {rep.reflection_order} ({time.time() - t0:.1f}s)")
    return header, rows, records


def _witness_table(name: str, log) -> tuple[list[str], list[list], list[dict]]:
    if name == "prop33":
        specs = [catalog.witness_points(m, p, 3, "prop33") for m, p in catalog.PROP33_ROWS]
    else:
        specs = [catalog.witness_points(m, p, n, "prop36") for m, p, n in catalog.PROP36_ROWS]
    header = ["row", "S0", "P0", "generated_by_listed", "translations_ok", "rank_first", "listed", "conditional"]
    rows, records = [], []
    for spec in specs:
        w = smooth.verify_witness(spec)
        rows.append([w.row, w.order, w.reflection_order, w.generated_by_expected, w.translations_ok,
                     w.first_rank, len(spec.expected), "|".join(w.conditional) or "-"])
        records.append({"row": w.row, "S0": w.order, "P0": w.reflection_order,
                        "generated_by_listed": w.generated_by_expected,
                        "translations_ok": w.translations_ok, "rank_first": w.first_rank,
                        "base": [str(v) for v in w.stratum.base], "conditional": w.conditional})
        log(f"{w.row}: {w.order} {w.reflection_order}")
    return header, rows, records


def golden_path(name: str) -> Path:
    return GOLDEN_DIR / f"{name}.tsv"


def diff_against_golden(name: str, header: list[str], rows: list[list]) -> list[str]:
    """Lines that differ between computed rows and the bundled baseline.

    Only rows whose key (first two columns for sporadic tables, first
    column otherwise) was computed are compared.
    """
    lines = golden_path(name).read_text().splitlines()
    gold_header, gold = lines[0].split("\t"), [ln.split("\t") for ln in lines[1:] if ln.strip()]
    if gold_header != header:
        return [f"header: expected {gold_header}, got {header}"]
    width = 2 if name.startswith("paper") else 1
    expected = {tuple(r[:width]): r for r in gold}
    problems = []
    for r in rows:
        r = [str(v) for v in r]
        g = expected.get(tuple(r[:width]))
        if g is None:
            problems.append(f"unexpected row {r}")
        elif g != r:
            problems.append(f"expected {g}, got {r}")
    return problems


def cmd_tables(args) -> int:
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else (lambda msg: None)
    if args.which in ("paper1", "paper2"):
        header, rows, records = _sporadic_table(args.which, args.large, log)
    elif args.which in ("prop33", "prop36"):
        header, rows, records = _witness_table(args.which, log)
    else:
        raise UsageError(f"unknown table {args.which!r}")
    problems = diff_against_golden(args.which, header, rows)
    _emit(args, header, rows, {"table": args.which, "rows": records, "diff": problems})
    for p in problems:
        print(f"DIFF {p}", file=sys.stderr)
    return EXIT_DIFF if problems else EXIT_OK


def cmd_lattices(args) -> int:
    if args.data:
        data = catalog.load_sporadic(args.data)
    else:
        label = args.scenario or ""
        if not label.startswith("st"):
            raise UsageError("lattices needs a sporadic scenario (stK) or --data FILE")
        try:
            data = catalog.load_sporadic(int(label[2:].split("/")[0]))
        except (ValueError, OSError) as exc:
            raise UsageError(str(exc)) from None
    enum = catalog.enumerate_sporadic_lattices(data)
    rows = [[f"st{data.st_number}", L.label, L.index] for L in enum.lattices]
    payload = {"group": data.st_number, "det_S_squared": enum.det_norm,
               "quotient": enum.quotient_factors, "action_trivial": enum.action_trivial,
               "lattices": [{"label": L.label, "index": L.index,
                             "basis": [[str(x) for x in col] for col in np.asarray(L.basis).T]}
                            for L in enum.lattices]}
    if args.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(f"# |det S|^2 = {enum.det_norm}; quotient {enum.quotient_factors}; "
              f"action trivial: {enum.action_trivial}")
        print("group\tlattice\tindex")
        for r in rows:
            print("\t".join(str(v) for v in r))
    return EXIT_OK


def cmd_remark_search(args) -> int:
    from .torus import invariant_form

    sc = _resolve_scenario(args)
    Q = invariant_form(sc.group.generators, sc.torus)
    reps = smooth.conjugacy_class_representatives(sc.group)
    seen = {}
    for g in reps:
        for x in smooth.remark_candidates(sc, g, Q):
            if x not in seen:
                seen[x] = smooth.point_stabilizer_report(sc, x)
    ordered = sorted(seen.values(), key=lambda r: (smooth.point_level(r.point), r.point))
    rows = [[_fmt_point(r.point), r.order, r.reflection_order, r.smooth] for r in ordered]
    payload = {"scenario": sc.label, "classes": len(reps),
               "candidates": [r.to_dict() for r in ordered]}
    _emit(args, ["point", "S0", "P0", "smooth"], rows, payload)
    return EXIT_OK


def cmd_info(args) -> int:
    from . import __version__

    files = []
    for p in sorted(catalog.data_directory().glob("st*.json")):
        try:
            d = catalog.load_sporadic(p, verify_order=False)
            files.append({"file": p.name, "group": d.st_number, "n": d.n, "order": d.order,
                          "lattices": list(d.lattices), "status": "ok"})
        except ValueError as exc:
            files.append({"file": p.name, "status": f"invalid: {exc}"})
    payload = {"version": __version__, "data_directory": str(catalog.data_directory()),
               "data_env": catalog.DATA_ENV, "builtins": catalog.SMALL_BUILTINS, "data_files": files}
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(f"abquot {__version__}")
        print(f"data directory\t{payload['data_directory']} (override with ${catalog.DATA_ENV})")
        print("builtins\t" + " ".join(catalog.SMALL_BUILTINS))
        for f in files:
            print(f"{f['file']}\t{f['status']}\t" + " ".join(f.get("lattices", [])))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="builtin label (e.g. example-b-3, st26/K26_1) or lattice label with --data")
    common.add_argument("--data", help="sporadic data file (JSON)")
    common.add_argument("--format", choices=["tsv", "json"], default="tsv")
    common.add_argument("--cap", type=int, help="closure cap for the scenario group")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--verbose", "-v", action="store_true", help="progress on stderr")

    p = argparse.ArgumentParser(prog="abquot", description="Smoothness of quotients of complex tori.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("audit", parents=[common], help="smoothness audit of a scenario")
    a.add_argument("--depth", type=int, default=3)
    a.add_argument("--torsion", type=int, action="append", help="torsion level to scan exhaustively (repeatable)")
    a.add_argument("--expect", choices=["smooth", "singular"], help="exit 1 when the verdict differs")
    r = sub.add_parser("report", parents=[common], help="stabilizer of one torsion point")
    r.add_argument("--point", help='coordinates, e.g. "1/2,1/2,1/2,0,1/2,1/2"')
    t = sub.add_parser("tables", parents=[common], help="regenerate a published table and diff it")
    t.add_argument("which", choices=["paper1", "paper2", "prop33", "prop36"])
    t.add_argument("--large", action="store_true", help="include the long-running rows")
    sub.add_parser("lattices", parents=[common], help="invariant lattices between the root lattice and its S-dual")
    sub.add_parser("remark-search", parents=[common], help="fixed points through (g - I)^-1 on the complement of Fix(g)")
    sub.add_parser("info", parents=[common], help="version, data files and builtins")
    return p


COMMANDS = {"audit": cmd_audit, "report": cmd_report, "tables": cmd_tables, "lattices": cmd_lattices,
            "remark-search": cmd_remark_search, "info": cmd_info}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"abquot: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"abquot: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
