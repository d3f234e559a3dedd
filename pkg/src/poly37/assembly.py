"""Growing the immersed surface.

A trivalent tree is decorated with triangular prisms at the nodes and
square antiprisms along the edges.  Starting from one canonical prism,
each iteration glues an antiprism onto every free prism square and then
a prism onto every new antiprism's far square.  Square faces consumed
by a gluing disappear; the surface consists of triangle faces only.

Each attachment of a prism onto an antiprism square admits two twists
(which pair of opposite square edges receives the prism's height
edges).  The twist is chosen once, through the Chirality parameter, and
the same glue transform, conjugated by each local placement frame, is
used at every attachment thereafter.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import (DEFAULT_TOL, RigidMotion, Tolerance, compose,
                   identity_motion, reflection_across_plane, rotation_about_axis)
from .solids import (ANTIPRISM_FAR_SQUARE, ANTIPRISM_NEAR_SQUARE,
                     PRISM_APEX_X, PRISM_BASE_SQUARE, ANTIPRISM_HALF_WIDTH,
                     Solid, SolidKind, canonical_antiprism, canonical_prism)
from .surface import TriangleSurface

__all__ = [
    "Chirality",
    "PlacedSolid",
    "DecorationTree",
    "SurfaceAssembler",
    "PRISM_AXIS_POINT",
    "PRISM_AXIS_DIRECTION",
    "prism_square_motion",
    "glue_transform",
    "grow",
    "mirror",
    "MIRROR_MOTION",
]

#: Coincidence threshold when welding glued-square vertices.  This is a
#: structural identification of points known to be equal up to float
#: noise from frame composition, not a geometric tolerance.
WELD_EPS = 1e-6


class Chirality(enum.Enum):
    """Which diagonal twist the prism-onto-antiprism gluing uses.

    RIGHT reproduces the coordinates of the quotient construction (the
    prism glued behind the canonical antiprism gets its apex edge at
    x ~ -1.819 through (y, z) = (-1/2, 1/2) and (1/2, -1/2)); LEFT is
    its mirror image.
    """

    LEFT = "left"
    RIGHT = "right"


# Axis of the canonical prism: the vertical line through the centroids
# of its two triangle faces.  Rotation by 120/240 degrees about it
# permutes the prism's three squares.
PRISM_AXIS_POINT = np.array([ANTIPRISM_HALF_WIDTH + math.sqrt(1.5) / 3.0, 0.0, 0.0])
PRISM_AXIS_DIRECTION = np.array([0.0, 0.0, 1.0])

#: Reflection used by mirror(): across the z = 0 plane, which maps the
#: canonical solids to themselves and swaps the two chiralities.
MIRROR_MOTION = reflection_across_plane(np.zeros(3), np.array([0.0, 0.0, 1.0]))


def prism_square_motion(square_index: int) -> RigidMotion:
    """Motion carrying the canonical antiprism from its seat on the
    prism's base square onto square ``square_index`` of the prism."""
    if square_index not in (0, 1, 2):
        raise ValueError("prism square index must be 0, 1 or 2")
    if square_index == 0:
        return identity_motion()
    return rotation_about_axis(PRISM_AXIS_POINT, PRISM_AXIS_DIRECTION,
                               120.0 * square_index)


def _right_glue_transform() -> RigidMotion:
    # Orthonormal frame on the canonical prism's base square
    # (x = +half_width): first height-edge direction, second height-edge
    # direction, outward normal.
    s = 1.0 / math.sqrt(2.0)
    src = np.column_stack([(0.0, -1.0, 0.0), (0.0, 0.0, -1.0), (-1.0, 0.0, 0.0)])
    # Its image on the antiprism's far square (x = -half_width): the
    # prism's height edges land on the square's edge pair whose
    # midpoint diagonal runs from (-h,-1/2,1/2) to (-h,1/2,-1/2).
    dst = np.column_stack([(0.0, s, s), (0.0, s, -s), (1.0, 0.0, 0.0)])
    rot = dst @ src.T
    c_src = np.array([ANTIPRISM_HALF_WIDTH, 0.0, 0.0])
    c_dst = np.array([-ANTIPRISM_HALF_WIDTH, 0.0, 0.0])
    return RigidMotion(rot, c_dst - rot @ c_src)


_GLUE_RIGHT = _right_glue_transform()
_GLUE_LEFT = compose(MIRROR_MOTION, compose(_GLUE_RIGHT, MIRROR_MOTION))


def glue_transform(chirality: Chirality) -> RigidMotion:
    """Rigid motion placing the canonical prism glued onto the canonical
    antiprism's far square, with the chosen twist.

    The two chiralities are related by a reflection fixing the far
    square; both motions are proper rotations (determinant +1).
    """
    return _GLUE_RIGHT if chirality is Chirality.RIGHT else _GLUE_LEFT


@dataclass(eq=False)
class PlacedSolid:
    """One solid instance of the decoration, in world coordinates."""

    path: str
    frame: RigidMotion
    solid: Solid
    vertex_ids: np.ndarray            # global surface index per local vertex
    parent: str | None
    depth: int
    glued_squares: set[int] = field(default_factory=set)

    @property
    def kind(self) -> SolidKind:
        return self.solid.kind

    def free_squares(self) -> list[int]:
        return [i for i in range(len(self.solid.squares)) if i not in self.glued_squares]

    def square_vertex_ids(self, square_index: int) -> tuple[int, ...]:
        return tuple(int(self.vertex_ids[v]) for v in self.solid.squares[square_index])


@dataclass(eq=False)
class DecorationTree:
    """The trivalent tree of placed prisms (nodes) and antiprisms (edges)."""

    chirality: Chirality
    iterations: int
    placed: list[PlacedSolid]
    by_path: dict[str, PlacedSolid]
    triangle_depths: np.ndarray       # iteration at which each surface triangle appeared

    @property
    def prisms(self) -> list[PlacedSolid]:
        return [p for p in self.placed if p.kind is SolidKind.PRISM]

    @property
    def antiprisms(self) -> list[PlacedSolid]:
        return [p for p in self.placed if p.kind is SolidKind.ANTIPRISM]

    @property
    def n_prisms(self) -> int:
        return len(self.prisms)

    @property
    def n_antiprisms(self) -> int:
        return len(self.antiprisms)

    def frontier_squares(self) -> list[tuple[str, int]]:
        """Free (solid path, square index) slots at the growth frontier."""
        return [(p.path, sq) for p in self.placed for sq in p.free_squares()]

    def adjacency_edges(self) -> list[tuple[str, str]]:
        return [(p.parent, p.path) for p in self.placed if p.parent is not None]


class SurfaceAssembler:
    """Incrementally glues solids into one combinatorial surface.

    Welding happens only along explicitly glued squares: a child's
    glued-square vertices adopt the parent's vertex ids, matched by
    coincidence.  No other vertices are ever merged, so geometrically
    overlapping sheets stay combinatorially distinct.
    """

    def __init__(self, chirality: Chirality, tol: Tolerance = DEFAULT_TOL):
        self.chirality = chirality
        self.tol = tol
        self._vertices: list[np.ndarray] = []
        self._placed: list[PlacedSolid] = []
        self._by_path: dict[str, PlacedSolid] = {}
        self._tri_depths: list[int] = []

    # -- placement ------------------------------------------------------

    def _place(self, canonical: Solid, frame: RigidMotion, path: str,
               parent: PlacedSolid | None, glue_square_local: int | None,
               parent_square: int | None, depth: int) -> PlacedSolid:
        world = canonical.transformed(frame, path)
        n_local = world.vertices.shape[0]
        ids = np.full(n_local, -1, dtype=np.int64)
        glued: set[int] = set()
        if parent is not None:
            target_ids = list(parent.square_vertex_ids(parent_square))
            target_pts = np.array([self._vertices[i] for i in target_ids])
            for local in canonical.squares[glue_square_local]:
                dists = np.linalg.norm(target_pts - world.vertices[local], axis=1)
                j = int(np.argmin(dists))
                if dists[j] > WELD_EPS:
                    raise RuntimeError(
                        f"glue mismatch at {path!r}: vertex {local} is "
                        f"{dists[j]:.3e} away from the parent square")
                ids[local] = target_ids[j]
            if len(set(int(i) for i in ids if i >= 0)) != 4:
                raise RuntimeError(f"glue at {path!r} did not weld 4 distinct vertices")
            glued.add(glue_square_local)
            parent.glued_squares.add(parent_square)
        for local in range(n_local):
            if ids[local] < 0:
                ids[local] = len(self._vertices)
                self._vertices.append(world.vertices[local])
        placed = PlacedSolid(path, frame, world, ids, parent.path if parent else None,
                             depth, glued)
        self._placed.append(placed)
        self._by_path[path] = placed
        self._tri_depths.extend([depth] * len(world.triangles))
        return placed

    def add_root_prism(self) -> PlacedSolid:
        return self._place(canonical_prism(), identity_motion(), "P",
                           None, None, None, 0)

    def attach_antiprism(self, prism: PlacedSolid, square_index: int,
                         depth: int) -> PlacedSolid:
        """Glue an antiprism's near square onto the given prism square."""
        frame = compose(prism.frame, prism_square_motion(square_index))
        return self._place(canonical_antiprism(), frame,
                           f"{prism.path}/a{square_index}", prism,
                           ANTIPRISM_NEAR_SQUARE, square_index, depth)

    def attach_prism(self, antiprism: PlacedSolid, depth: int) -> PlacedSolid:
        """Glue a prism's base square onto the antiprism's far square,
        twisted by the assembler's chirality."""
        frame = compose(antiprism.frame, glue_transform(self.chirality))
        return self._place(canonical_prism(), frame, f"{antiprism.path}/p",
                           antiprism, PRISM_BASE_SQUARE, ANTIPRISM_FAR_SQUARE, depth)

    # -- output ---------------------------------------------------------

    def build(self, iterations: int) -> tuple[DecorationTree, TriangleSurface]:
        vertices = np.array(self._vertices)
        tris = []
        provenance = []
        for placed in self._placed:
            for face_idx, tri in enumerate(placed.solid.triangles):
                tris.append([int(placed.vertex_ids[v]) for v in tri])
                provenance.append((placed.path, face_idx))
        surface = TriangleSurface(vertices, np.array(tris, dtype=np.int64),
                                  tuple(provenance))
        tree = DecorationTree(self.chirality, iterations, self._placed,
                              self._by_path, np.array(self._tri_depths))
        return tree, surface


def grow(iterations: int, chirality: Chirality = Chirality.RIGHT,
         tol: Tolerance = DEFAULT_TOL) -> tuple[DecorationTree, TriangleSurface]:
    """Grow the decorated tree for the given number of iterations.

    Iteration 0 is the lone canonical prism.  Each further iteration
    attaches one antiprism to every free prism square, then one prism
    to every new antiprism's far square.  Counts follow
    prisms(k) = 1 + 3 (2^k - 1), antiprisms(k) = 3 (2^k - 1).

    The result is deterministic: equal arguments produce bit-identical
    vertex arrays, and grow(j) is an exact prefix of grow(k) for j < k.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    asm = SurfaceAssembler(chirality, tol)
    frontier = [asm.add_root_prism()]
    for k in range(1, iterations + 1):
        new_antiprisms = []
        for prism in frontier:
            for sq in prism.free_squares():
                new_antiprisms.append(asm.attach_antiprism(prism, sq, depth=k))
        frontier = [asm.attach_prism(ap, depth=k) for ap in new_antiprisms]
    return asm.build(iterations)


def mirror(s: TriangleSurface) -> TriangleSurface:
    """Image of the surface under the fixed z -> -z reflection, with
    triangle winding flipped so outward orientation is preserved."""
    vertices = MIRROR_MOTION.apply(s.vertices)
    triangles = s.triangles[:, [0, 2, 1]]
    return TriangleSurface(vertices, triangles, s.provenance)
