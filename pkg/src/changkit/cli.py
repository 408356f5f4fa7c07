"""Command-line entry point.

Reports are written as JSON lines, tables as CSV. Exit status is 0 when every
requested inequality holds, 1 when one is violated, and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from ._accel import backend_name
from .chang import (
    check_basis,
    check_biased,
    check_dimension,
    check_level1,
    check_subadditivity,
    check_weight_k,
    large_spectrum,
)
from .cube import PointSet, make_family, make_set
from .entropy import curves
from .fourier import wht
from .search import Objective, TheoremViolation, exhaustive_extremal, local_search, sweep_families

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

DEFAULT_RHO = "1/2"
DEFAULT_K = 1
DEFAULT_FAMILIES = ["weight1", "subcube:1", "ball:1"]


class UsageError(ValueError):
    pass


def parse_set(text: str) -> PointSet:
    """``hex:<n>:<digits>``, ``idx:<n>:<i,j,...>`` or a family spec like ``dictator:3,1``."""
    text = text.strip()
    m = re.fullmatch(r"(hex|idx):(\d+):(.*)", text)
    if m:
        kind, n, body = m.group(1), int(m.group(2)), m.group(3).strip()
        if kind == "hex":
            return PointSet.from_hex(n, body)
        if not body:
            return make_set(n, [])
        try:
            indices = [int(v) for v in body.split(",")]
        except ValueError:
            raise UsageError(f"malformed index list {body!r}") from None
        return make_set(n, indices)
    return make_family(text)


def format_set(A: PointSet) -> str:
    return f"hex:{A.n}:{A.to_hex()}"


def _parse_masks(text: str) -> list[int]:
    try:
        return [int(v, 0) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed mask list {text!r}") from None


def _emit_json(obj, out):
    out.write(json.dumps(obj) + "\n")


def _emit_csv(header, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_transform(args, out) -> int:
    A = parse_set(args.set)
    sp = wht(A)
    masks = np.arange(sp.universe)
    if args.top is not None:
        if args.top < 0:
            raise UsageError("--top must be non-negative")
        order = np.lexsort((masks, -np.abs(sp.coeffs)))
        masks = order[: args.top]
    rows = []
    for mask in masks.tolist():
        F = int(sp.coeffs[mask])
        rows.append((mask, mask.bit_count(), F, str(Fraction(F, sp.universe))))
    if args.format == "json":
        for mask, weight, F, fhat in rows:
            _emit_json({"mask": mask, "weight": weight, "coeff": F, "fhat": fhat}, out)
    else:
        _emit_csv(("mask", "weight", "coeff", "fhat"), rows, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    A = parse_set(args.set)
    wanted = []
    if args.all or args.level1:
        wanted.append(lambda: check_level1(A))
    if args.all or args.subadd:
        wanted.append(lambda: check_subadditivity(A))
    if args.all or args.biased:
        wanted.append(lambda: check_biased(A))
    if args.dimension is not None:
        wanted.append(lambda: check_dimension(A, args.dimension))
    if args.basis is not None:
        masks = _parse_masks(args.basis)
        wanted.append(lambda: check_basis(A, masks))
    if args.weightk is not None:
        wanted.append(lambda: check_weight_k(A, args.weightk))
    if not wanted:
        wanted = [lambda: check_level1(A), lambda: check_subadditivity(A), lambda: check_biased(A)]
    ok = True
    for make in wanted:
        rep = make()
        out.write(rep.to_json() + "\n")
        ok &= rep.satisfied
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_spectrum(args, out) -> int:
    A = parse_set(args.set)
    ls = large_spectrum(A, args.rho)
    rep = check_dimension(A, ls.rho)
    _emit_json(ls.to_dict() | {"satisfied": rep.satisfied}, out)
    return EXIT_OK if rep.satisfied else EXIT_VIOLATION


def cmd_weightk(args, out) -> int:
    A = parse_set(args.set)
    rep = check_weight_k(A, args.weightk)
    out.write(rep.to_json() + "\n")
    return EXIT_OK if rep.satisfied else EXIT_VIOLATION


def cmd_extremal(args, out) -> int:
    obj = Objective.parse(args.objective)
    try:
        if args.m is None:
            res = exhaustive_extremal(args.n, obj)
            mode = "exhaustive"
        else:
            res = local_search(args.n, args.m, obj, seed=args.seed, iters=args.iters, verify=True)
            mode = "local"
    except TheoremViolation as exc:
        print(f"changkit extremal: violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    record = {"objective": str(obj), "mode": mode} | res.to_dict()
    if mode == "local":
        record |= {"seed": args.seed, "iters": args.iters}
    _emit_json(record, out)
    return EXIT_OK


def _parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise UsageError(f"malformed range {text!r}; expected a or a..b")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return range(lo, hi + 1)


def cmd_sweep(args, out) -> int:
    families = args.family or DEFAULT_FAMILIES
    rows = sweep_families(_parse_range(args.n_range), families, rho=args.rho)
    records = [rec for row in rows for rec in row.records()]
    if args.format == "json":
        for rec in records:
            _emit_json(rec, out)
    else:
        header = list(records[0]) if records else ["family", "n", "size", "check"]
        _emit_csv(header, [list(r.values()) for r in records], out)
    return EXIT_OK if all(r["satisfied"] for r in records) else EXIT_VIOLATION


def cmd_plot_data(args, out) -> int:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    x, hv, taylor, biased = curves(args.points)
    _emit_csv(
        ("x", "h", "taylor", "biased"),
        ([repr(float(v)) for v in row] for row in zip(x, hv, taylor, biased)),
        out,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="changkit",
        description="Exact Fourier analysis of Boolean-cube subsets and level-1 inequality checks.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({backend_name()})")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, default):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", dest="format", action="store_const", const="json")
        g.add_argument("--csv", dest="format", action="store_const", const="csv")
        sp.set_defaults(format=default)

    sp = sub.add_parser("transform", help="print the integer spectrum F(S)")
    sp.add_argument("--set", required=True)
    sp.add_argument("--top", type=int, help="only the m largest |F(S)|")
    fmt(sp, "csv")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("check", help="run inequality checks, one JSON report per line")
    sp.add_argument("--set", required=True)
    sp.add_argument("--all", action="store_true", help="level1, subadd and biased")
    sp.add_argument("--level1", action="store_true")
    sp.add_argument("--subadd", action="store_true")
    sp.add_argument("--biased", action="store_true")
    sp.add_argument("--dimension", nargs="?", const=DEFAULT_RHO, metavar="P/Q")
    sp.add_argument("--basis", metavar="MASKS")
    sp.add_argument("--weightk", nargs="?", type=int, const=DEFAULT_K, metavar="K")
    fmt(sp, "json")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("spectrum", help="large spectrum and its span dimension")
    sp.add_argument("--set", required=True)
    sp.add_argument("--dimension", "--rho", dest="rho", default=DEFAULT_RHO, metavar="P/Q")
    fmt(sp, "json")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("weightk", help="level-k weight against the averaged basis bound")
    sp.add_argument("--set", required=True)
    sp.add_argument("--weightk", "-k", type=int, default=DEFAULT_K, metavar="K")
    fmt(sp, "json")
    sp.set_defaults(func=cmd_weightk)

    sp = sub.add_parser("extremal", help="exhaustive (n <= 4) or local search for extremal sets")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--objective", default="level1_ratio")
    sp.add_argument("--m", type=int, help="set size; switches to local search")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--iters", type=int, default=100)
    fmt(sp, "json")
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("sweep", help="run all checks over structured families")
    sp.add_argument("--family", action="append", metavar="TEMPLATE",
                    help="family without n, e.g. weight1, subcube:2; repeatable")
    sp.add_argument("--n-range", default="2..8", metavar="A..B")
    sp.add_argument("--dimension", "--rho", dest="rho", default=DEFAULT_RHO, metavar="P/Q")
    fmt(sp, "csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("plot-data", help="CSV of h and its two upper bounds on [-1, 1]")
    sp.add_argument("--points", type=int, default=2001)
    fmt(sp, "csv")
    sp.set_defaults(func=cmd_plot_data)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args, out)
    except (ValueError, TypeError) as exc:
        print(f"changkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
