"""Assemble the verification report: every number a reader needs to
check the construction at desk scale, in one JSON document."""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .assembly import (Chirality, PRISM_AXIS_DIRECTION, PRISM_AXIS_POINT, grow)
from .geom import DEFAULT_TOL, Tolerance, rotation_about_axis, triangle_normal
from .intersect import first_self_intersecting_iteration
from .petrie import orbit_partition
from .quotient import (QuotientSurface, build_fundamental_piece, genus,
                       identify, square_normal, verify_nonembeddability)
from .solids import ANTIPRISM_HALF_WIDTH, EDGE_LENGTH, solve_back_apex_x
from .surface import (boundary_loops, euler_characteristic, vertex_degrees)

__all__ = ["build_report"]


def _vec(v) -> list[float]:
    return [float(x) for x in v]


def _counts_block(k_max: int, chirality: Chirality) -> list[dict]:
    rows = []
    for k in range(k_max + 1):
        tree, surface = grow(k, chirality)
        rows.append({
            "iterations": k,
            "prisms": tree.n_prisms,
            "antiprisms": tree.n_antiprisms,
            "triangles": surface.n_triangles,
            "vertices": surface.n_vertices,
            "edges": len(surface.undirected_edge_faces()),
            "boundary_loops": len(boundary_loops(surface)),
            "euler_characteristic": euler_characteristic(surface),
            "frontier_squares": len(tree.frontier_squares()),
        })
    return rows


def _normals_block(q: QuotientSurface) -> dict:
    piece = q.piece
    surf = piece.surface
    tree = piece.tree

    def face_normal(path: str, face_idx: int):
        placed = tree.by_path[path]
        tri = placed.solid.triangles[face_idx]
        pts = placed.solid.vertices[list(tri)]
        return triangle_normal(pts[0], pts[1], pts[2])

    # Side triangles of the root antiprism: face 4 shares an edge with
    # the root prism's top triangle, face 1 hangs below it off the far
    # square (see the canonical face order in solids.canonical_antiprism).
    upper = face_normal("P/a0", 4)
    lower = face_normal("P/a0", 1)
    offset = q.identification.branch_offset
    paired = square_normal(piece.antiprism_open[offset % 3].points(surf))
    nxt = square_normal(piece.antiprism_open[(1 + offset) % 3].points(surf))

    # Actual rigid relation between consecutive far-square normals: the
    # order-3 rotation about the root prism's axis.
    rot240 = rotation_about_axis(np.zeros(3), np.array([0.0, 0.0, 1.0]), 240.0)
    residual = float(np.abs(rot240.rotation @ nxt - paired).max())

    rep = verify_nonembeddability(piece, q)
    return {
        "root_prism_top": _vec(face_normal("P", 0)),
        "antiprism_side_upper": _vec(upper),
        "antiprism_side_lower": _vec(lower),
        "outer_prism_top": _vec(face_normal("P/a0/p", 0)),
        "outer_prism_open_square": _vec(square_normal(piece.prism_open[0].points(surf))),
        "paired_far_square": _vec(paired),
        "next_branch_far_square": _vec(nxt),
        "pair_angles_deg": [float(a) for a in rep.pair_angles_deg],
        "far_square_rotation": {
            "axis_point": _vec(PRISM_AXIS_POINT),
            "axis_direction": _vec(PRISM_AXIS_DIRECTION),
            "angle_deg": 240.0,
            "max_residual": residual,
        },
    }


def build_report(chirality: Chirality = Chirality.RIGHT, k_max_counts: int = 3,
                 k_max_intersect: int | None = 6,
                 tol: Tolerance = DEFAULT_TOL) -> dict:
    """Compute the full verification report.

    ``k_max_intersect`` of None skips the self-intersection search (the
    quotient-only code path).
    """
    piece = build_fundamental_piece(chirality, tol)
    q = identify(piece)
    qsurf = q.surface
    degrees, _ = vertex_degrees(qsurf)
    orbits = orbit_partition(q)

    _, deepest = grow(k_max_counts, chirality, tol)
    deg_hist_arr, _ = vertex_degrees(deepest)
    hist: dict[str, int] = {}
    for d in sorted(set(int(x) for x in deg_hist_arr)):
        hist[str(d)] = int((deg_hist_arr == d).sum())

    doc = {
        "tool": "poly37",
        "version": __version__,
        "chirality": chirality.value,
        "constants": {
            "antiprism_half_width": float(ANTIPRISM_HALF_WIDTH),
            "back_apex_x": float(solve_back_apex_x(tol)),
            "edge_length": float(EDGE_LENGTH),
        },
        "counts": _counts_block(k_max_counts, chirality),
        "vertex_degree_histogram": hist,
        "quotient": {
            "faces": qsurf.n_triangles,
            "edges": len(qsurf.undirected_edge_faces()),
            "vertices": qsurf.n_vertices,
            "euler_characteristic": euler_characteristic(qsurf),
            "genus": genus(q),
            "oriented": True,
            "all_degrees_seven": bool((degrees == 7).all()),
            "identification": {
                "branch_offset": q.identification.branch_offset,
                "rotation": q.identification.rotation,
                "flipped": q.identification.flipped,
            },
        },
        "petrie": {
            "period": len(orbits[0]),
            "orbits": len(orbits),
            "states": sum(len(o) for o in orbits),
        },
        "normals": _normals_block(q),
    }
    if k_max_intersect is not None:
        found = first_self_intersecting_iteration(k_max_intersect, chirality, tol)
        if found is None:
            doc["intersection"] = {"first_iteration": None, "witness": None}
        else:
            k_star, w = found
            doc["intersection"] = {
                "first_iteration": k_star,
                "witness": {
                    "triangle_a": w.tri_a,
                    "triangle_b": w.tri_b,
                    "path_a": w.path_a,
                    "path_b": w.path_b,
                    "point": _vec(w.point),
                },
            }
    return doc
