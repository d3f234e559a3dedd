"""The two canonical Archimedean building blocks, in the fixed
coordinates the whole construction is phrased in.

Canonical square antiprism: squares at x = +/-ANTIPRISM_HALF_WIDTH, the
far square (x < 0) rotated 45 degrees against the near square, eight
equilateral side triangles, every surface edge of length sqrt(2).

Canonical triangular prism: glued onto the antiprism's near square
(x = +ANTIPRISM_HALF_WIDTH), apex edge at x = PRISM_APEX_X, triangle
faces in the planes z = +/- sqrt(2)/2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .geom import DEFAULT_TOL, GeometryError, RigidMotion, Tolerance

__all__ = [
    "ANTIPRISM_HALF_WIDTH",
    "EDGE_LENGTH",
    "PRISM_APEX_X",
    "BACK_APEX_X",
    "SolidKind",
    "Solid",
    "FaceCheck",
    "RegularityReport",
    "canonical_antiprism",
    "canonical_prism",
    "check_regular",
    "back_apex_residuals",
    "solve_back_apex_x",
    "ANTIPRISM_FAR_SQUARE",
    "ANTIPRISM_NEAR_SQUARE",
    "PRISM_BASE_SQUARE",
]

# x-offset of both antiprism squares; the unique value for which the
# eight side triangles are equilateral: 8**(-1/4) ~ 0.59460356.
ANTIPRISM_HALF_WIDTH = 8.0 ** -0.25

# Every edge that appears on the assembled surface.
EDGE_LENGTH = math.sqrt(2.0)

# x of the canonical prism's apex ("height") edge.
PRISM_APEX_X = ANTIPRISM_HALF_WIDTH + math.sqrt(1.5)

# x of the apex edge of a prism glued onto the antiprism's far square;
# closed form of the root of the sphere system solved by
# solve_back_apex_x().
BACK_APEX_X = -ANTIPRISM_HALF_WIDTH - math.sqrt(1.5)

# Indices into Solid.squares.
ANTIPRISM_FAR_SQUARE = 0
ANTIPRISM_NEAR_SQUARE = 1
PRISM_BASE_SQUARE = 0


class SolidKind(enum.Enum):
    PRISM = "prism"
    ANTIPRISM = "antiprism"


@dataclass(frozen=True, eq=False)
class Solid:
    """A convex polyhedron instance.

    Face index tuples wind counter-clockwise seen from outside the
    solid.  ``path`` records where the instance sits in the decoration
    tree ("" for a free-standing canonical solid).
    """

    vertices: np.ndarray                       # (n, 3)
    triangles: tuple[tuple[int, int, int], ...]
    squares: tuple[tuple[int, int, int, int], ...]
    kind: SolidKind
    path: str = ""

    def transformed(self, motion: RigidMotion, path: str | None = None) -> "Solid":
        return replace(self, vertices=motion.apply(self.vertices),
                       path=self.path if path is None else path)

    def face_cycles(self):
        """All faces as vertex-index cycles, triangles first."""
        return list(self.triangles) + list(self.squares)

    def surface_edges(self) -> set[tuple[int, int]]:
        """Undirected edges of all faces (square diagonals are not edges)."""
        edges: set[tuple[int, int]] = set()
        for cycle in self.face_cycles():
            for i, u in enumerate(cycle):
                v = cycle[(i + 1) % len(cycle)]
                edges.add((min(u, v), max(u, v)))
        return edges

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


def canonical_antiprism(half_width: float = ANTIPRISM_HALF_WIDTH) -> Solid:
    """The square antiprism in canonical position.

    Vertices: (-w, +/-1, 0), (-w, 0, +/-1) on the far square and
    (w, +/-s, +/-s) with s = sqrt(2)/2 on the near square.  With the
    default ``half_width`` all side triangles are equilateral; a
    perturbed value breaks regularity (used by sensitivity tests).
    """
    w = half_width
    s = math.sqrt(2.0) / 2.0
    vertices = np.array([
        (-w, 1.0, 0.0),    # 0  far square
        (-w, 0.0, 1.0),    # 1
        (-w, -1.0, 0.0),   # 2
        (-w, 0.0, -1.0),   # 3
        (w, s, s),         # 4  near square
        (w, -s, s),        # 5
        (w, -s, -s),       # 6
        (w, s, -s),        # 7
    ])
    # Side triangles: one per far-square edge (pointing at a near
    # vertex) and one per near-square edge (pointing at a far vertex),
    # wound outward.
    triangles = (
        (0, 1, 4), (1, 2, 5), (2, 3, 6), (3, 0, 7),
        (5, 4, 1), (6, 5, 2), (7, 6, 3), (4, 7, 0),
    )
    squares = (
        (0, 3, 2, 1),   # far square, outward normal -x
        (4, 5, 6, 7),   # near square, outward normal +x
    )
    return Solid(vertices, triangles, squares, SolidKind.ANTIPRISM)


def canonical_prism(half_width: float = ANTIPRISM_HALF_WIDTH) -> Solid:
    """The triangular prism sharing the antiprism's near square.

    Vertices 0..3 coincide with the canonical antiprism's near square;
    4 and 5 are the apex edge.  Triangle face 0 lies in z = +sqrt(2)/2.
    """
    w = half_width
    s = math.sqrt(2.0) / 2.0
    apex = w + math.sqrt(1.5)
    vertices = np.array([
        (w, s, s),      # 0
        (w, -s, s),     # 1
        (w, -s, -s),    # 2
        (w, s, -s),     # 3
        (apex, 0.0, s),   # 4
        (apex, 0.0, -s),  # 5
    ])
    triangles = (
        (0, 1, 4),   # top, outward normal +z
        (2, 3, 5),   # bottom, outward normal -z
    )
    squares = (
        (0, 3, 2, 1),   # base (glued to the antiprism), outward -x
        (2, 5, 4, 1),   # side square on the y < 0 side
        (0, 4, 5, 3),   # side square on the y > 0 side
    )
    return Solid(vertices, triangles, squares, SolidKind.PRISM)


@dataclass(frozen=True)
class FaceCheck:
    face_kind: str                # "triangle" | "square"
    face_index: int
    max_edge_deviation: float     # |edge length - sqrt(2)|
    planarity_deviation: float    # distance of 4th vertex from the plane (squares)
    max_angle_deviation: float    # |cos| of adjacent edges (squares)


@dataclass(frozen=True)
class RegularityReport:
    path: str
    kind: SolidKind
    checks: tuple[FaceCheck, ...]
    eps: float

    @property
    def passed(self) -> bool:
        return all(c.max_edge_deviation <= self.eps
                   and c.planarity_deviation <= self.eps
                   and c.max_angle_deviation <= self.eps
                   for c in self.checks)

    @property
    def worst(self) -> float:
        return max(max(c.max_edge_deviation, c.planarity_deviation,
                       c.max_angle_deviation) for c in self.checks)


def check_regular(solid: Solid, tol: Tolerance = DEFAULT_TOL) -> RegularityReport:
    """Per-face regularity report: edge lengths against sqrt(2),
    planarity and right angles for squares."""
    checks = []
    for kind_name, faces in (("triangle", solid.triangles), ("square", solid.squares)):
        for idx, cycle in enumerate(faces):
            pts = solid.vertices[list(cycle)]
            n = len(cycle)
            edge_dev = max(abs(np.linalg.norm(pts[(i + 1) % n] - pts[i]) - EDGE_LENGTH)
                           for i in range(n))
            plan_dev = 0.0
            angle_dev = 0.0
            if n == 4:
                normal = np.cross(pts[1] - pts[0], pts[2] - pts[0])
                nn = np.linalg.norm(normal)
                if nn <= tol.eps_length:
                    raise GeometryError(f"degenerate square face {idx} in {solid.path!r}")
                plan_dev = abs(float(np.dot(pts[3] - pts[0], normal / nn)))
                for i in range(4):
                    e1 = pts[(i + 1) % 4] - pts[i]
                    e2 = pts[(i + 2) % 4] - pts[(i + 1) % 4]
                    cosv = abs(float(np.dot(e1, e2))) / (np.linalg.norm(e1) * np.linalg.norm(e2))
                    angle_dev = max(angle_dev, cosv)
            checks.append(FaceCheck(kind_name, idx, float(edge_dev),
                                    float(plan_dev), float(angle_dev)))
    return RegularityReport(solid.path, solid.kind, tuple(checks), tol.eps_length)


def back_apex_residuals(x: float) -> np.ndarray:
    """Residuals of the three sphere equations that pin the apex edge of
    the prism glued behind the far square, at y = -1/2, z = 1/2.

    Each equation states an edge of that prism has length sqrt(2): two
    edges to far-square vertices, plus the constraint tying the apex to
    the near square's frame.
    """
    w = ANTIPRISM_HALF_WIDTH
    s = 1.0 / math.sqrt(2.0)
    y, z = -0.5, 0.5
    r1 = (x + w) ** 2 + y ** 2 + (z - 1.0) ** 2 - 2.0
    r2 = (x + w) ** 2 + (y + 1.0) ** 2 + z ** 2 - 2.0
    r3 = ((x - w) ** 2 + (y + s) ** 2 + (z - s) ** 2
          - (2.0 * w + math.sqrt(1.5)) ** 2 - (1.0 - s) ** 2)
    return np.array([r1, r2, r3])


def solve_back_apex_x(tol: Tolerance = DEFAULT_TOL) -> float:
    """Solve the sphere system of back_apex_residuals.

    The first equation is a quadratic in x with two roots; the third
    equation selects the negative branch.  The result equals
    BACK_APEX_X analytically (~ -1.81934843).
    """
    w = ANTIPRISM_HALF_WIDTH
    # (x + w)^2 = 2 - 1/4 - 1/4 = 3/2
    roots = [-w + math.sqrt(1.5), -w - math.sqrt(1.5)]
    good = [x for x in roots if np.abs(back_apex_residuals(x)).max() <= tol.eps_length]
    if len(good) != 1:
        raise GeometryError(f"sphere system admits {len(good)} roots, expected 1")
    return good[0]
