"""Indexed triangle surfaces and their combinatorial queries.

A TriangleSurface is purely combinatorial plus vertex geometry.  Two
vertex indices may well coincide geometrically (the assembled surface
is an immersion and sheets may touch); nothing in this module ever
merges vertices by coincidence.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

__all__ = [
    "NonManifoldError",
    "NotOrientedError",
    "TriangleSurface",
    "vertex_degrees",
    "euler_characteristic",
    "boundary_loops",
    "is_oriented",
]


class NonManifoldError(ValueError):
    """An undirected edge borders three or more triangles."""


class NotOrientedError(ValueError):
    """Triangle windings are not globally consistent."""


class TriangleSurface:
    """Triangle mesh with directed-edge adjacency.

    vertices    (V, 3) float array
    triangles   (F, 3) int array, consistent outward winding
    provenance  per triangle: (solid path, face index within the solid)
    """

    def __init__(self, vertices: np.ndarray, triangles: np.ndarray,
                 provenance: tuple[tuple[str, int], ...] | None = None):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        if provenance is None:
            provenance = tuple(("", i) for i in range(len(self.triangles)))
        if len(provenance) != len(self.triangles):
            raise ValueError("provenance must have one entry per triangle")
        self.provenance = tuple(provenance)
        self._undirected: dict[tuple[int, int], list[tuple[int, int]]] | None = None
        self._edge_map: dict[tuple[int, int], int] | None = None

    # -- counts ---------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_points(self) -> np.ndarray:
        """Geometry of every triangle, shape (F, 3, 3)."""
        return self.vertices[self.triangles]

    # -- adjacency ------------------------------------------------------

    def directed_edges(self, face: int) -> tuple[tuple[int, int], ...]:
        a, b, c = (int(v) for v in self.triangles[face])
        return ((a, b), (b, c), (c, a))

    def undirected_edge_faces(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        """Map (min u, max v) -> list of (face, +1/-1 direction slots).

        Direction is +1 when the face traverses the edge from the
        smaller to the larger vertex index.  Raises NonManifoldError on
        edges with three or more incident faces.
        """
        if self._undirected is None:
            m: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
            for f in range(self.n_triangles):
                for (u, v) in self.directed_edges(f):
                    key = (u, v) if u < v else (v, u)
                    m[key].append((f, 1 if u < v else -1))
            for edge, faces in m.items():
                if len(faces) > 2:
                    raise NonManifoldError(f"edge {edge} borders {len(faces)} triangles")
            self._undirected = dict(m)
        return self._undirected

    def edge_map(self) -> dict[tuple[int, int], int]:
        """Directed edge (u, v) -> the triangle traversing it.

        Requires a consistently oriented manifold (with or without
        boundary); that is exactly the regime in which the Petrie and
        quotient machinery operate.
        """
        if self._edge_map is None:
            if not is_oriented(self):
                raise NotOrientedError("surface winding is not consistent")
            m: dict[tuple[int, int], int] = {}
            for f in range(self.n_triangles):
                for (u, v) in self.directed_edges(f):
                    m[(u, v)] = f
            self._edge_map = m
        return self._edge_map

    def neighbor(self, face: int, slot: int) -> int | None:
        """Triangle across directed edge ``slot`` of ``face``; None at
        the boundary."""
        edges = self.directed_edges(face)
        u, v = edges[slot]
        return self.edge_map().get((v, u))

    def boundary_directed_edges(self) -> list[tuple[int, int]]:
        """Directed edges whose reverse belongs to no triangle."""
        em = self.edge_map()
        return [e for e in em if (e[1], e[0]) not in em]

    # -- transforms ------------------------------------------------------

    def with_vertices(self, vertices: np.ndarray) -> "TriangleSurface":
        return TriangleSurface(vertices, self.triangles, self.provenance)


def is_oriented(s: TriangleSurface) -> bool:
    """True iff every interior edge is traversed in opposite directions
    by its two triangles."""
    for faces in s.undirected_edge_faces().values():
        if len(faces) == 2 and faces[0][1] == faces[1][1]:
            return False
    return True


def vertex_degrees(s: TriangleSurface) -> tuple[np.ndarray, np.ndarray]:
    """Incident-triangle count per vertex plus a boundary flag.

    Returns (degrees, on_boundary) arrays of length V.  Raises
    NonManifoldError if some edge has three or more incident triangles.
    """
    degrees = np.zeros(s.n_vertices, dtype=np.int64)
    np.add.at(degrees, s.triangles.reshape(-1), 1)
    on_boundary = np.zeros(s.n_vertices, dtype=bool)
    for (u, v), faces in s.undirected_edge_faces().items():
        if len(faces) == 1:
            on_boundary[u] = True
            on_boundary[v] = True
    return degrees, on_boundary


def euler_characteristic(s: TriangleSurface) -> int:
    """V - E + F over the combinatorial simplices."""
    return s.n_vertices - len(s.undirected_edge_faces()) + s.n_triangles


def boundary_loops(s: TriangleSurface) -> list[list[int]]:
    """Partition of boundary edges into closed vertex loops.

    Each loop is the cyclic vertex sequence of one boundary component,
    listed in surface orientation.
    """
    boundary = s.boundary_directed_edges()
    succ: dict[int, int] = {}
    for (u, v) in boundary:
        if u in succ:
            raise NonManifoldError(f"vertex {u} has two outgoing boundary edges")
        succ[u] = v
    loops: list[list[int]] = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            loop.append(v)
            seen.add(v)
            v = succ[v]
        loops.append(loop)
    return loops


def vertex_link_is_single_cycle(s: TriangleSurface, vertex: int) -> bool:
    """True iff the triangles incident to ``vertex`` form one closed fan.

    For each incident triangle (v, a, b) the link contributes the arc
    a -> b; a manifold interior vertex yields exactly one cycle.
    """
    arcs: dict[int, int] = {}
    count = 0
    for f in range(s.n_triangles):
        tri = [int(x) for x in s.triangles[f]]
        if vertex not in tri:
            continue
        i = tri.index(vertex)
        a, b = tri[(i + 1) % 3], tri[(i + 2) % 3]
        if a in arcs:
            return False
        arcs[a] = b
        count += 1
    if count == 0:
        return False
    start = next(iter(arcs))
    cur = arcs[start]
    length = 1
    while cur != start:
        if cur not in arcs or length > count:
            return False
        cur = arcs[cur]
        length += 1
    return length == count
