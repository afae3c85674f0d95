"""Command-line interface.

Subcommands: ``solid`` (write a canonical solid as OFF), ``field``
(evaluate the solid-angle field at a point), ``isoptic`` (extract an
isoptic surface mesh), ``verify`` (run the oracle battery).

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 singular query.  All reports are line-oriented ``key = value`` /
``check name: PASS|FAIL`` text and are deterministic for fixed flags,
independent of the worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

import numpy as np

from .errors import IsopticError, SingularRay
from .field import FieldMode, face_solid_angle, field_values, isoptic_field
from .geometry import Polyhedron, build_polyhedron, contains_point
from .isosurface import bounding_radius, extract_isoptic, mesh_residual
from .meshio import parse_off, write_obj, write_off, write_stl
from .oracles import (
    fan_face_solid_angle,
    mc_field,
    seeded_exterior_points,
    seeded_interior_points,
)
from .solids import SOLID_NAMES, canonical_solid

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3

_PI_EXPR = re.compile(r"^\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_alpha(text: str) -> float:
    """Parse an angle expression: 'pi/8', '2pi/3', '0.5pi', or a decimal."""
    m = _PI_EXPR.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ValueError(
            f"cannot parse angle {text!r}; use forms like 'pi/8', '2pi/3' or a decimal"
        ) from None


def parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected X,Y,Z with two commas, got {text!r}")
    return np.array([float(p) for p in parts])


def _default_workers(value) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get("ISOPTIC_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _load_polyhedron(args) -> Polyhedron:
    if getattr(args, "solid", None):
        return canonical_solid(args.solid)
    with open(args.input, encoding="utf-8") as fh:
        vertices, cycles = parse_off(fh.read())
    return build_polyhedron(
        vertices, cycles, name=os.path.basename(args.input)
    )


def _add_shape_args(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument(
        "--solid", choices=SOLID_NAMES, help="canonical solid by name"
    )
    group.add_argument("--input", help="path to an OFF file")


def cmd_solid(args) -> int:
    poly = canonical_solid(args.name)
    text = write_off(poly.vertices, poly.cycles())
    report = [
        f"solid = {poly.name}",
        f"vertices = {len(poly.vertices)}",
        f"faces = {len(poly.faces)}",
        f"circumradius = {poly.circumradius:.12f}",
    ]
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        report.append(f"wrote = {args.out}")
        print("\n".join(report))
    else:
        sys.stdout.write(text)
        print("\n".join(report), file=sys.stderr)
    return EXIT_OK


def cmd_field(args) -> int:
    poly = _load_polyhedron(args)
    mode = FieldMode.HALF_SUM if args.mode == "half" else FieldMode.VISIBLE_SUM
    value = isoptic_field(poly, args.at, mode)
    location = contains_point(poly, args.at)
    print(f"classification = {location.value}")
    print(f"omega = {value.omega:.12f}")
    print(
        "visible_faces = "
        + (" ".join(str(i) for i in value.visible_faces) or "none")
    )
    return EXIT_OK


def cmd_isoptic(args) -> int:
    poly = _load_polyhedron(args)
    alpha = parse_alpha(args.alpha)
    workers = _default_workers(args.workers)
    mesh = extract_isoptic(poly, alpha, res=args.res, workers=workers)
    ext = os.path.splitext(args.out)[1].lower()
    if ext == ".obj":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(write_obj(mesh))
    elif ext == ".stl":
        with open(args.out, "wb") as fh:
            fh.write(write_stl(mesh))
    else:
        raise ValueError(f"unsupported mesh extension {ext!r}; use .obj or .stl")
    max_abs, rms = mesh_residual(poly, alpha, mesh)
    print(f"alpha = {alpha:.12f}")
    print(f"bounding_radius = {bounding_radius(poly, alpha):.12f}")
    print(f"vertices = {len(mesh.vertices)}")
    print(f"triangles = {len(mesh.triangles)}")
    print(f"max_residual = {max_abs:.6f}")
    print(f"rms_residual = {rms:.6f}")
    print(f"wrote = {args.out}")
    if args.figure:
        from .viz import save_mesh_figure

        save_mesh_figure(
            mesh, args.figure, title=f"{poly.name or 'polyhedron'} alpha={args.alpha}"
        )
        print(f"figure = {args.figure}")
    return EXIT_OK


def _verify_checks(poly, samples, seed):
    """Oracle battery; yields (name, deviation, limit, unit)."""
    exterior = seeded_exterior_points(poly, 200, seed)
    vis, _ = field_values(poly, exterior, FieldMode.VISIBLE_SUM)
    half, _ = field_values(poly, exterior, FieldMode.HALF_SUM)
    yield "mode_equivalence", float(np.abs(vis - half).max()), 1e-9, ""

    viewpoints = seeded_exterior_points(poly, 25, seed + 1)
    worst = 0.0
    for i in range(len(poly.faces)):
        for x in viewpoints:
            worst = max(
                worst, abs(face_solid_angle(poly, i, x) - fan_face_solid_angle(poly, i, x))
            )
    yield "oracle_face_equivalence", worst, 1e-10, ""

    probes = seeded_exterior_points(poly, 3, seed + 2)
    worst = 0.0
    for x in probes:
        est = mc_field(poly, x, samples, seed)
        exact = isoptic_field(poly, x).omega
        worst = max(worst, abs(exact - est.estimate) / est.stderr)
    yield "monte_carlo_agreement", worst, 4.0, " stderr"

    interior = seeded_interior_points(poly, 100, seed + 3)
    worst = 0.0
    for x in interior:
        total = sum(face_solid_angle(poly, i, x) for i in range(len(poly.faces)))
        worst = max(worst, abs(total - 4.0 * math.pi))
    yield "interior_closure", worst, 1e-8, ""


def cmd_verify(args) -> int:
    if args.samples < 1000:
        raise ValueError(f"need --samples >= 1000, got {args.samples}")
    poly = _load_polyhedron(args)
    print(f"solid = {poly.name or args.input}")
    print(f"samples = {args.samples}")
    print(f"seed = {args.seed}")
    all_ok = True
    for name, deviation, limit, unit in _verify_checks(poly, args.samples, args.seed):
        ok = deviation <= limit
        all_ok &= ok
        status = "PASS" if ok else "FAIL"
        print(
            f"check {name}: {status} "
            f"(max deviation {deviation:.3e}{unit}, limit {limit:.1e}{unit})"
        )
    print(f"result = {'PASS' if all_ok else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoptic",
        description=(
            "Solid-angle fields of convex polyhedra and their isoptic "
            "surfaces (points seeing the body under a fixed solid angle)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solid", help="write a canonical solid as OFF")
    p.add_argument("name", help=f"one of: {', '.join(SOLID_NAMES)}")
    p.add_argument("-o", "--out", help="output OFF path (default: stdout)")
    p.set_defaults(func=cmd_solid)

    p = sub.add_parser("field", help="evaluate the field at a point")
    _add_shape_args(p)
    p.add_argument("--at", type=parse_point, required=True, metavar="X,Y,Z")
    p.add_argument("--mode", choices=("visible", "half"), default="visible")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("isoptic", help="extract an isoptic surface mesh")
    _add_shape_args(p)
    p.add_argument("--alpha", required=True, help="solid angle, e.g. 'pi/2'")
    p.add_argument("--res", type=int, default=96, help="grid nodes per axis")
    p.add_argument("-o", "--out", required=True, help="output .obj or .stl path")
    p.add_argument("--figure", help="also render the mesh to this image file")
    p.add_argument(
        "--workers",
        type=int,
        default=None,
        help="parallel sampling processes (default: all cores, or "
        "ISOPTIC_WORKERS); results are identical for any value",
    )
    p.set_defaults(func=cmd_isoptic)

    p = sub.add_parser("verify", help="run the oracle battery on a solid")
    _add_shape_args(p)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SingularRay as exc:
        print(f"error: singular query: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (IsopticError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
