"""Command line front end.

Verbs: list-families, construct, verify, compose, relation.  Exit status is
0 on success, 1 when a verification check fails, 2 on usage or geometry
errors (unknown family, point outside a chart, degenerate frame).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .jets import JetError
from .hypersurface import DegenerateMetricError, FrameError, NotBlaschkeError
from .paracomplex import NotSwapTangentError, StructureError
from .families import UnknownFamilyError, family_names, named_family
from .verify import cross_relation_check, grid_points, run_suite

GEOMETRY_ERRORS = (UnknownFamilyError, JetError, FrameError,
                   DegenerateMetricError, NotBlaschkeError,
                   NotSwapTangentError, StructureError, ValueError)


def _coord_names(m):
    if m <= 3:
        return ["x", "y", "z"][:m]
    return [f"x{i + 1}" for i in range(m)]


def _fmt(value):
    """Decimal-point float text with 17 significant digits."""
    return format(float(value), ".17g")


def _write_csv(path, fmap, points):
    m, k = fmap.domain_dim, fmap.codomain_dim
    header = _coord_names(m) + [f"f{i + 1}" for i in range(k)]
    out = open(path, "w", newline="") if path != "-" else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\r\n")
        writer.writerow(header)
        for p in points:
            writer.writerow([_fmt(x) for x in p] + [_fmt(v) for v in fmap(p)])
    finally:
        if path != "-":
            out.close()


def _emit_report(report, json_path):
    doc = report.to_dict()
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for check in doc["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status}  {check['name']:32s} max residual "
              f"{check['max_residual']:.3e}  (tol {check['tolerance']:.1e})")
    if doc["constants"]:
        pretty = ", ".join(f"{k}={_fmt(v)}" for k, v in doc["constants"].items())
        print(f"constants: {pretty}")
    print(f"{'PASS' if doc['passed'] else 'FAIL'}  {doc['family']} "
          f"({doc['wall_time_s']:.2f}s)")
    return 0 if doc["passed"] else 1


def _cmd_list(args):
    for name in family_names():
        print(name)
    return 0


def _cmd_construct(args):
    fam = named_family(args.family)
    fmap = fam.map if fam.map is not None else fam.surface.f
    points = grid_points(fam.box, args.grid, seed=args.seed, cap=args.cap)
    _write_csv(args.output, fmap, points)
    return 0


def _cmd_verify(args):
    report = run_suite(args.family, grid=args.grid, seed=args.seed)
    return _emit_report(report, args.json)


def _cmd_compose(args):
    from .families import _COMPONENTS, cp, pair, suspend

    if args.c1 not in _COMPONENTS or args.c2 not in _COMPONENTS:
        raise UnknownFamilyError(f"{args.c1}, {args.c2}")
    f1, f2 = _COMPONENTS[args.c1](), _COMPONENTS[args.c2]()
    if args.kind == "suspension":
        fmap = suspend(pair(f1, f2))
    elif args.kind == "calabi":
        fmap = cp(f1, f2)
    else:
        fmap = pair(f1, f2)
    points = grid_points(fmap.domain_box, args.grid, seed=args.seed,
                         cap=args.cap)
    _write_csv(args.output, fmap, points)
    return 0


def _cmd_relation(args):
    report = cross_relation_check(args.c1, args.c2, grid=args.grid,
                                  seed=args.seed)
    return _emit_report(report, args.json)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="parasphere",
        description="Construct and verify affine hypersphere families.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-families", help="print registry names")

    p = sub.add_parser("construct", help="sample a family to CSV")
    p.add_argument("family")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=200)
    p.add_argument("--output", default="-")

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("family")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None, help="write the JSON report here")

    p = sub.add_parser("compose", help="build a composite immersion to CSV")
    p.add_argument("c1")
    p.add_argument("c2")
    p.add_argument("--kind", choices=["pair", "suspension", "calabi"],
                   default="suspension")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=200)
    p.add_argument("--output", default="-")

    p = sub.add_parser("relation", help="cross-check the three constructions")
    p.add_argument("c1")
    p.add_argument("c2")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None)

    return parser


_DISPATCH = {
    "list-families": _cmd_list,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "compose": _cmd_compose,
    "relation": _cmd_relation,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except GEOMETRY_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
