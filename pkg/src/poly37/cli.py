"""Command-line front end.

Subcommands: generate (grow and export a mesh), verify (solid and
surface checks plus the full JSON report), quotient (build and close
the 56-triangle piece), petrie (walk periods), intersect (first
self-intersecting depth), cover (covering-map check).

Exit status: 0 success, 1 verification failure, 2 usage error.  The
environment variable POLY37_EPS overrides the default 1e-9 length and
angle tolerances.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .assembly import Chirality, grow, mirror
from .exports import export_obj, export_ply, export_surface_json, write_report_json
from .geom import DEFAULT_TOL, Tolerance
from .intersect import first_self_intersecting_iteration
from .petrie import (BoundaryExitError, PetrieState, Turn, all_states,
                     orbit_partition, petrie_period)
from .quotient import (CoveringError, IdentificationError,
                       build_fundamental_piece, covering_label, genus, identify)
from .reporting import build_report
from .solids import (EDGE_LENGTH, canonical_antiprism, canonical_prism,
                     check_regular, solve_back_apex_x, BACK_APEX_X)
from .surface import (euler_characteristic, is_oriented, vertex_degrees)

__all__ = ["main"]


def tolerance_from_env() -> Tolerance:
    raw = os.environ.get("POLY37_EPS")
    if raw is None:
        return DEFAULT_TOL
    eps = float(raw)
    return Tolerance(eps_length=eps, eps_angle_parallel=eps)


def _chirality(name: str) -> Chirality:
    return Chirality.LEFT if name == "left" else Chirality.RIGHT


def _meta(args) -> dict[str, str]:
    return {
        "tool": f"poly37 {__version__}",
        "chirality": args.chirality,
        "iterations": str(args.iterations),
    }


def _cmd_generate(args, tol: Tolerance) -> int:
    _, surface = grow(args.iterations, _chirality(args.chirality), tol)
    if args.mirror:
        surface = mirror(surface)
    if args.format == "obj":
        export_obj(surface, args.out, comments=_meta(args))
    elif args.format == "ply":
        export_ply(surface, args.out, comments=_meta(args))
    else:
        export_surface_json(surface, args.out, meta=_meta(args))
    print(f"wrote {args.out}: {surface.n_vertices} vertices, "
          f"{surface.n_triangles} triangles")
    return 0


def _check(name: str, ok: bool, detail: str = "") -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    return ok


def _cmd_verify(args, tol: Tolerance) -> int:
    ok = True
    for solid in (canonical_prism(), canonical_antiprism()):
        rep = check_regular(solid, tol)
        ok &= _check(f"{solid.kind.value} regularity", rep.passed,
                     f"worst deviation {rep.worst:.2e}")
    x = solve_back_apex_x(tol)
    ok &= _check("back apex solves sphere system", abs(x - BACK_APEX_X) < 1e-12,
                 f"x = {x:.10f}")

    tree, surface = grow(args.iterations, _chirality(args.chirality), tol)
    pts = surface.triangle_points()
    lengths = np.concatenate([
        np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1),
        np.linalg.norm(pts[:, 2] - pts[:, 1], axis=1),
        np.linalg.norm(pts[:, 0] - pts[:, 2], axis=1),
    ])
    dev = float(np.abs(lengths - EDGE_LENGTH).max())
    ok &= _check(f"grow({args.iterations}) edge lengths", dev <= tol.eps_length,
                 f"max deviation {dev:.2e}")
    degrees, on_boundary = vertex_degrees(surface)
    interior = degrees[~on_boundary]
    ok &= _check("interior vertex degrees are 7",
                 bool((interior == 7).all()) if len(interior) else True,
                 f"{len(interior)} interior vertices")
    ok &= _check("orientation consistent", is_oriented(surface))
    edges = tree.adjacency_edges()
    nodes = {p.path for p in tree.placed}
    ok &= _check("solid adjacency is a tree",
                 len(edges) == len(nodes) - 1 and _connected(nodes, edges))
    if args.report:
        doc = build_report(_chirality(args.chirality), k_max_counts=args.iterations,
                           k_max_intersect=args.k_max, tol=tol)
        write_report_json(doc, args.report)
        print(f"report written to {args.report}")
    return 0 if ok else 1


def _connected(nodes: set[str], edges: list[tuple[str, str]]) -> bool:
    if not nodes:
        return True
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    stack = [next(iter(nodes))]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(adj[n])
    return seen == nodes


def _cmd_quotient(args, tol: Tolerance) -> int:
    piece = build_fundamental_piece(_chirality(args.chirality), tol)
    print(f"fundamental piece: {piece.surface.n_triangles} triangles, "
          f"{piece.tree.n_prisms} prisms, {piece.tree.n_antiprisms} antiprisms")
    try:
        q = identify(piece)
    except IdentificationError as exc:
        print(f"FAIL  identification: {exc}")
        return 1
    s = q.surface
    degrees, _ = vertex_degrees(s)
    print(f"closed quotient: V={s.n_vertices} E={len(s.undirected_edge_faces())} "
          f"F={s.n_triangles} chi={euler_characteristic(s)} genus={genus(q)} "
          f"degrees={{{', '.join(str(d) for d in sorted(set(degrees.tolist())))}}}")
    ident = q.identification
    print(f"identification: branch offset {ident.branch_offset}, "
          f"rotation {ident.rotation}, flipped {ident.flipped}")
    if args.report:
        doc = build_report(_chirality(args.chirality), k_max_counts=2,
                           k_max_intersect=None, tol=tol)
        write_report_json(doc, args.report)
        print(f"report written to {args.report}")
    return 0


def _cmd_petrie(args, tol: Tolerance) -> int:
    if args.quotient:
        q = identify(build_fundamental_piece(_chirality(args.chirality), tol))
        target = q
    else:
        _, target = grow(args.iterations, _chirality(args.chirality), tol)
    if args.start:
        face, slot, turn = args.start.split(",")
        surf = target.surface if hasattr(target, "surface") else target
        edge = surf.directed_edges(int(face))[int(slot)]
        state = PetrieState(int(face), edge,
                            Turn.LEFT if turn.strip().lower().startswith("l") else Turn.RIGHT)
        try:
            period = petrie_period(target, state, args.max_steps)
        except BoundaryExitError as exc:
            print(f"boundary exit: {exc}")
            return 1
        print(f"period={'exceeded' if period is None else period}")
        return 0
    try:
        periods = [petrie_period(target, st, args.max_steps) for st in all_states(target)]
    except BoundaryExitError as exc:
        print(f"boundary exit: {exc}")
        return 1
    total = len(periods)
    count8 = sum(1 for p in periods if p == 8)
    print(f"period=8 for {count8}/{total} states")
    if count8 == total:
        orbits = orbit_partition(target)
        print(f"orbits: {len(orbits)}")
        return 0
    return 1


def _cmd_intersect(args, tol: Tolerance) -> int:
    found = first_self_intersecting_iteration(args.k_max, _chirality(args.chirality), tol)
    if found is None:
        print(f"no self-intersection up to iteration {args.k_max}")
        return 1
    k, w = found
    print(f"first self-intersection at iteration {k}: triangles "
          f"{w.tri_a} ({w.path_a}) and {w.tri_b} ({w.path_b}) near "
          f"({w.point[0]:.6f}, {w.point[1]:.6f}, {w.point[2]:.6f}); "
          f"branches diverge: {w.paths_diverge()}")
    return 0


def _cmd_cover(args, tol: Tolerance) -> int:
    chir = _chirality(args.chirality)
    q = identify(build_fundamental_piece(chir, tol))
    _, surface = grow(args.iterations, chir, tol)
    try:
        label = covering_label(surface, q)
    except CoveringError as exc:
        print(f"FAIL  covering: {exc}")
        return 1
    counts = label.label_multiset()
    print(f"covering of the quotient by grow({args.iterations}): consistent; "
          f"{surface.n_triangles} triangles over 56, multiplicities "
          f"{int(counts.min())}..{int(counts.max())}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poly37",
        description="Immersed {3,7} polyhedral surface: growth, quotient, "
                    "Petrie walks, self-intersection, covering checks.")
    parser.add_argument("--version", action="version", version=f"poly37 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, iterations_default=2):
        p.add_argument("--chirality", choices=["left", "right"], default="right")
        p.add_argument("--iterations", type=int, default=iterations_default)

    p = sub.add_parser("generate", help="grow the surface and export a mesh")
    common(p)
    p.add_argument("--format", choices=["obj", "ply", "json"], default="obj")
    p.add_argument("--out", required=True)
    p.add_argument("--mirror", action="store_true",
                   help="export the reflected surface")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("verify", help="solid regularity, edge lengths, degrees")
    common(p)
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--k-max", type=int, default=6,
                   help="self-intersection search bound for the report")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("quotient", help="build and close the 56-triangle piece")
    common(p)
    p.add_argument("--report", help="write a JSON report (without the "
                                    "intersection block) here")
    p.set_defaults(func=_cmd_quotient)

    p = sub.add_parser("petrie", help="Petrie walk periods")
    common(p, iterations_default=3)
    p.add_argument("--quotient", action="store_true",
                   help="walk on the closed quotient instead of a grown surface")
    p.add_argument("--start", help="single start state FACE,EDGESLOT,TURN")
    p.add_argument("--max-steps", type=int, default=64)
    p.set_defaults(func=_cmd_petrie)

    p = sub.add_parser("intersect", help="first self-intersecting iteration")
    p.add_argument("--chirality", choices=["left", "right"], default="right")
    p.add_argument("--k-max", type=int, default=6)
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("cover", help="covering-map consistency check")
    common(p, iterations_default=3)
    p.set_defaults(func=_cmd_cover)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    tol = tolerance_from_env()
    return args.func(args, tol)


if __name__ == "__main__":
    sys.exit(main())
