"""Command line entry point: ``multbound sweep | multiplier | bounds | check``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cohomology import DEFAULT_ORACLE_CAP, OracleCapError, multiplier_type
from .families import FAMILIES, FamilyError, parse_entry
from .pc import DEFAULT_TABLE_CAP, PresentationError, parse_presentation
from .sweep import (
    CorpusEntry,
    InputError,
    SweepOptions,
    analyze,
    builtin_entries,
    exit_code,
    file_entries,
    load_group,
    run_sweep,
    to_csv,
    to_json,
)

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INPUT = 3


def _entry(spec: str) -> CorpusEntry:
    """A builtin expression such as ``dihedral(8)``, or a presentation file path."""
    if Path(spec).is_file():
        return file_entries([spec])[0]
    try:
        b = parse_entry(spec)
    except FamilyError as exc:
        raise InputError(f"{spec}: {exc}") from None
    return CorpusEntry(b.id, "builtin", builtin=b)


def _families(value: str):
    if value == "all":
        return "all"
    return [s.strip() for s in value.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multbound", description="Schur multiplier bounds for finite p-groups.")
    ap.add_argument("--version", action="version", version=f"multbound {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run every bound and property check over a corpus")
    sw.add_argument(
        "--families",
        type=_families,
        default=None,
        help="'all' or a comma list of " + ", ".join(FAMILIES) + " (default: all, unless --input is given)",
    )
    sw.add_argument("--input", nargs="+", default=[], metavar="FILE", help="presentation files to include")
    sw.add_argument("--max-order", type=int, default=128)
    sw.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    sw.add_argument("--table-cap", type=int, default=DEFAULT_TABLE_CAP)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--format", choices=("json", "csv"), default="json")
    sw.add_argument("--out", type=Path, default=None)
    sw.add_argument("--reproducible", action="store_true", help="omit the timestamp")

    mu = sub.add_parser("multiplier", help="print the Schur multiplier from the cohomology oracle")
    mu.add_argument("entry")
    mu.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)

    bo = sub.add_parser("bounds", help="print every bound with its verdict")
    bo.add_argument("entry")
    bo.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    bo.add_argument("--format", choices=("text", "json"), default="text")

    ch = sub.add_parser("check", help="parse a presentation file and run the consistency checks")
    ch.add_argument("file", type=Path)
    return ap


def cmd_sweep(args) -> int:
    families = args.families if args.families is not None else ("all" if not args.input else [])
    try:
        entries = builtin_entries(families, args.max_order) if families else []
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    entries += file_entries(args.input)
    config = {
        "families": families,
        "inputs": list(args.input),
        "max_order": args.max_order,
        "format": args.format,
    }
    opts = SweepOptions(args.oracle_cap, args.table_cap, max(1, args.jobs), args.reproducible, config)
    report = run_sweep(entries, opts)
    text = to_json(report) if args.format == "json" else to_csv(report)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    s = report["summary"]
    print(
        f"{s['groups']} groups: {s['pass']} pass, {s['fail']} fail, {s['vacuous']} vacuous, "
        f"{s['oracle_skipped']} oracle-skipped, {s['rejected']} rejected",
        file=sys.stderr,
    )
    for f in s["failures"]:
        print(f"FAIL {f}", file=sys.stderr)
    return exit_code(report)


def cmd_multiplier(args) -> int:
    try:
        entry = _entry(args.entry)
        g = load_group(entry)
        res = multiplier_type(g, cap=args.oracle_cap, group_id=entry.id)
    except (InputError, OracleCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"M({entry.id}) = {res.type}  (order {res.order})")
    return EXIT_OK


def _fmt_exp(num: int, den: int) -> str:
    return str(num) if den == 1 else f"{num}/{den}"


def cmd_bounds(args) -> int:
    try:
        entry = _entry(args.entry)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rec = analyze(entry, oracle_cap=args.oracle_cap)
    if rec["status"] != "ok":
        print(f"error: {rec['status']}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(rec, indent=2))
    else:
        pr = rec["profile"]
        print(rec["id"])
        print("  " + " ".join(f"{k}={pr[k]}" for k in ("p", "n", "k", "d", "c", "delta", "gamma", "t")))
        flags = [k for k, v in pr["flags"].items() if v]
        print("  flags: " + (", ".join(flags) or "none"))
        m = rec["multiplier"]
        if m is None:
            mult = "beyond oracle cap"
        else:
            mult = " x ".join(f"C{o}" for o in m["type"]) or "1"
        print(f"  multiplier: {mult}")
        print("  bounds (exponent of p):")
        for b in rec["bounds"]:
            tag = b["verdict"] if b["applicable"] else f"vacuous ({b['reason']})"
            sign = "<=" if b["kind"] == "upper" else ">="
            print(f"    {b['name']:<28} m {sign} {_fmt_exp(b['exponent_num'], b['exponent_den']):<6} {tag}")
        print("  dominance:")
        for k, v in rec["dominance"].items():
            print(f"    {k:<28} {v}")
        print("  properties:")
        for p in rec["properties"]:
            extra = f" ({p['lhs']} vs {p['rhs']})" if p["lhs"] is not None else ""
            print(f"    {p['name']:<28} {p['verdict']}{extra}")
    failed = any(b["verdict"] == "fail" for b in rec["bounds"])
    failed |= any(v == "fail" for v in rec["dominance"].values())
    failed |= any(p["verdict"] == "fail" for p in rec["properties"])
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_check(args) -> int:
    try:
        pres = parse_presentation(args.file.read_text())
    except OSError as exc:
        print(f"error: {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except PresentationError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    ok, failing = pres.consistency_check()
    if not ok:
        print(f"{args.file}: inconsistent, failing test {failing}")
        return EXIT_INPUT
    print(f"{args.file}: consistent, order {pres.prime}^{pres.ngens}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "sweep": cmd_sweep,
        "multiplier": cmd_multiplier,
        "bounds": cmd_bounds,
        "check": cmd_check,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
