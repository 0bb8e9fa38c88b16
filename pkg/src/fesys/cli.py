"""Command-line driver: ``fesys verify | element | cohomology``.

Each verb writes a JSON report (stdout, or ``--out FILE``) and exits with 0
exactly when every check in the report passed.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from .bundle import trivial_bundle
from .elasticity2d.checks import REFERENCE, element_report, mesh_report
from .elasticity2d.families import FAMILIES
from .fes import cochain_system, de_rham_report, validate_system
from .meshes import BUILTIN, MeshError, load_mesh, parse_point, parse_triangle, random_triangle
from .report import Report
from .suites import SUITES, run_suite


def _emit(rep: Report, out: str | None) -> int:
    text = rep.to_json()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


def _cmd_verify(args) -> int:
    return _emit(run_suite(args.suite, args.seed), args.out)


def _cmd_element(args) -> int:
    if args.triangle:
        pts = parse_triangle(args.triangle)
    elif args.seed is not None:
        pts = random_triangle(random.Random(args.seed))
    else:
        pts = REFERENCE
    center = parse_point(args.center) if args.center else None
    seed = args.seed if args.seed is not None else 0
    rep = element_report(args.family, pts, center=center, seed=seed, probes=args.probes)
    rep.meta["seed"] = seed
    return _emit(rep, args.out)


def _parse_fiber(spec: str) -> int:
    kind, _, dim = spec.partition(":")
    if kind != "trivial" or not dim.isdigit() or int(dim) < 1:
        raise argparse.ArgumentTypeError("fiber must look like trivial:D with D >= 1")
    return int(dim)


def _cmd_cohomology(args) -> int:
    mesh = load_mesh(args.mesh)
    if args.family:
        rep = mesh_report(args.family, mesh)
    else:
        dim = _parse_fiber(args.fiber)
        s = cochain_system(trivial_bundle(mesh.complex(), dim), label=f"trivial:{dim}")
        rep = Report("cohomology", meta={"fiber": f"trivial:{dim}", "mesh": mesh.name})
        rep.merge(validate_system(s), prefix="system/")
        dr, res = de_rham_report(s)
        rep.merge(dr, prefix="de-rham/")
        rep.meta["fe_cohomology"] = res.fe_dims
        rep.meta["cochain_cohomology"] = res.cochain_dims
    rep.meta["seed"] = args.seed
    return _emit(rep, args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fesys", description="Exact verification of finite element systems.")
    sub = p.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="seeded suites: bianchi, gauge, flat-cochain, exp-fitting, poincare")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=_cmd_verify)

    e = sub.add_parser("element", help="build one element family on one triangle and run every suite")
    e.add_argument("--family", required=True, choices=sorted(FAMILIES))
    e.add_argument("--triangle", help="x0,y0;x1,y1;x2,y2 with rational entries such as 1/3")
    e.add_argument("--seed", type=int, help="random triangle and probe seed (default: reference triangle, 0)")
    e.add_argument("--center", help="interior split point x,y (default: barycenter)")
    e.add_argument("--probes", type=int, default=20, help="number of interpolation probes")
    e.add_argument("--out")
    e.set_defaults(func=_cmd_element)

    c = sub.add_parser("cohomology", help="global de Rham comparison on a mesh")
    c.add_argument("--mesh", required=True, help=f"mesh file or one of: {', '.join(BUILTIN)}")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", choices=sorted(FAMILIES))
    g.add_argument("--fiber", help="trivial:D, cochains of a trivial rank-D bundle")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_cohomology)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MeshError, argparse.ArgumentTypeError, ValueError, OSError) as exc:
        parser.exit(2, f"fesys: error: {exc}\n")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
