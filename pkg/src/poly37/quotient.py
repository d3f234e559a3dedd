"""The 56-triangle fundamental piece and its closure.

The piece is the subcomplex of a depth-2 growth with exact order-3
rotational symmetry about the root prism's axis: the root prism, its
three antiprisms, one outer prism per antiprism, and one further
antiprism dangling from each outer prism.  Its boundary consists of six
squares: three free outer-prism squares and three far squares of the
dangling antiprisms.

Gluing each prism-side boundary square to an antiprism-side one, in the
unique correspondence under which the result is a closed oriented
surface with all vertex degrees 7 and Petrie period 8, produces a
genus-3 combinatorial {3,7} surface.  The correspondence is found by
search, not transcribed from a figure; the validity conditions make the
search self-verifying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assembly import (Chirality, DecorationTree, PRISM_AXIS_DIRECTION,
                       PRISM_AXIS_POINT, SurfaceAssembler, WELD_EPS)
from .geom import (DEFAULT_TOL, RigidMotion, Tolerance, angle_between_lines,
                   rotation_about_axis, triangle_normal)
from .petrie import PetrieState, Turn, all_states, petrie_period
from .surface import (TriangleSurface, euler_characteristic, is_oriented,
                      vertex_degrees, vertex_link_is_single_cycle)

__all__ = [
    "IdentificationError",
    "CoveringError",
    "BoundarySquare",
    "FundamentalPiece",
    "Identification",
    "QuotientSurface",
    "NonEmbeddabilityReport",
    "CoveringLabel",
    "build_fundamental_piece",
    "identify",
    "genus",
    "verify_nonembeddability",
    "covering_label",
    "square_normal",
]


class IdentificationError(ValueError):
    """No boundary correspondence closes the piece into a valid {3,7}
    surface (this would falsify the construction)."""


class CoveringError(ValueError):
    """Label propagation assigned two different images to one triangle."""


@dataclass(frozen=True)
class BoundarySquare:
    """One square hole of the fundamental piece's boundary."""

    branch: int
    side: str                              # "prism" | "antiprism"
    vertex_ids: tuple[int, int, int, int]  # cycle, in the solid's outward winding

    def points(self, surface: TriangleSurface) -> np.ndarray:
        return surface.vertices[list(self.vertex_ids)]


@dataclass(eq=False)
class FundamentalPiece:
    surface: TriangleSurface
    tree: DecorationTree
    chirality: Chirality
    prism_open: tuple[BoundarySquare, ...]      # 3, branch-indexed
    antiprism_open: tuple[BoundarySquare, ...]  # 3, branch-indexed
    symmetry: RigidMotion                       # order-3 rotation about the root axis
    symmetry_vertex_map: np.ndarray             # vertex permutation realizing it

    def boundary_squares(self) -> tuple[BoundarySquare, ...]:
        return self.prism_open + self.antiprism_open


@dataclass(frozen=True)
class Identification:
    """How the six boundary squares were glued in pairs.

    ``branch_offset`` m means prism-side square b glues to antiprism-side
    square (b + m) mod 3; ``rotation``/``flipped`` select the vertex
    correspondence between the two 4-cycles, applied branch-locally so
    the order-3 symmetry carries pair to pair.
    """

    branch_offset: int
    rotation: int
    flipped: bool
    vertex_pairs: tuple[tuple[int, int], ...]   # 12 merged (prism-side, antiprism-side) ids


@dataclass(eq=False)
class QuotientSurface:
    surface: TriangleSurface            # closed, V=24, E=84, F=56
    piece: FundamentalPiece
    identification: Identification
    piece_to_quotient: np.ndarray       # piece vertex id -> quotient vertex id

    def edge_midpoint(self, face: int, u: int, v: int) -> np.ndarray:
        """Midpoint of a face edge, taken in the fundamental piece's
        geometry (identified vertices have two ambient positions; each
        face keeps the geometry of its own sheet)."""
        piece_tri = [int(x) for x in self.piece.surface.triangles[face]]
        m = self.piece_to_quotient
        pu = next(p for p in piece_tri if m[p] == u)
        pv = next(p for p in piece_tri if m[p] == v)
        return 0.5 * (self.piece.surface.vertices[pu] + self.piece.surface.vertices[pv])


def _rotate_branch_path(path: str) -> str:
    """Image of a solid path under the order-3 symmetry: branch b goes
    to branch (b+1) mod 3, the rest of the path is unchanged."""
    parts = path.split("/")
    if len(parts) == 1:
        return path                      # the root prism
    b = int(parts[1][1:])
    parts[1] = f"a{(b + 1) % 3}"
    return "/".join(parts)


def build_fundamental_piece(chirality: Chirality = Chirality.RIGHT,
                            tol: Tolerance = DEFAULT_TOL) -> FundamentalPiece:
    """Assemble the 56-triangle piece (4 prisms + 6 antiprisms).

    Each outer prism's dangling antiprism sits on the free square chosen
    by the chirality (the two options are mirror images), leaving the
    other square open; for the RIGHT chirality the branch-0 open square
    is the one with vertices (-h,0,-1), (-h,-1,0), (d,-1/2,1/2),
    (d,1/2,-1/2).
    """
    dangle_sq = 1 if chirality is Chirality.RIGHT else 2
    open_sq = 2 if chirality is Chirality.RIGHT else 1

    asm = SurfaceAssembler(chirality, tol)
    root = asm.add_root_prism()
    outer_prisms = []
    dangling = []
    for b in range(3):
        ap = asm.attach_antiprism(root, b, depth=1)
        pr = asm.attach_prism(ap, depth=1)
        outer_prisms.append(pr)
        dangling.append(asm.attach_antiprism(pr, dangle_sq, depth=2))
    tree, surface = asm.build(2)

    prism_open = tuple(
        BoundarySquare(b, "prism", outer_prisms[b].square_vertex_ids(open_sq))
        for b in range(3))
    antiprism_open = tuple(
        BoundarySquare(b, "antiprism", dangling[b].square_vertex_ids(0))
        for b in range(3))

    symmetry = rotation_about_axis(PRISM_AXIS_POINT, PRISM_AXIS_DIRECTION, 120.0)

    # The symmetry as a vertex permutation: solids map branch-to-branch
    # with identical local indexing, so the permutation is combinatorial;
    # verify it against the rotation's geometry.
    perm = np.full(surface.n_vertices, -1, dtype=np.int64)
    for placed in tree.placed:
        target = tree.by_path[_rotate_branch_path(placed.path)]
        if placed.path == target.path:
            # Root prism: match its vertices under the rotation directly.
            rotated = symmetry.apply(placed.solid.vertices)
            for i, p in enumerate(rotated):
                dists = np.linalg.norm(placed.solid.vertices - p, axis=1)
                j = int(np.argmin(dists))
                if dists[j] > WELD_EPS:
                    raise RuntimeError("root prism is not symmetric under the rotation")
                perm[placed.vertex_ids[i]] = placed.vertex_ids[j]
        else:
            perm[placed.vertex_ids] = target.vertex_ids
    rotated = symmetry.apply(surface.vertices)
    err = np.linalg.norm(rotated - surface.vertices[perm], axis=1).max()
    if err > WELD_EPS:
        raise RuntimeError(f"order-3 symmetry broken by {err:.3e}")

    return FundamentalPiece(surface, tree, chirality, prism_open,
                            antiprism_open, symmetry, perm)


def _merged_surface(piece: FundamentalPiece,
                    pairs: list[tuple[int, int]]) -> tuple[TriangleSurface, np.ndarray]:
    """Relabel the piece's vertices with each pair merged; geometry of a
    merged class is the position of its smallest original id."""
    n = piece.surface.n_vertices
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    new_id: dict[int, int] = {}
    mapping = np.empty(n, dtype=np.int64)
    for v in range(n):
        r = find(v)
        if r not in new_id:
            new_id[r] = len(new_id)
        mapping[v] = new_id[r]
    reps = sorted(new_id, key=new_id.get)
    vertices = piece.surface.vertices[reps]
    triangles = mapping[piece.surface.triangles]
    return TriangleSurface(vertices, triangles, piece.surface.provenance), mapping


def _is_closed_37_petrie8(surface: TriangleSurface) -> bool:
    """Validity of a candidate closure: closed oriented manifold, all
    degrees 7 with single-cycle links, every Petrie walk of period 8."""
    if (np.diff(np.sort(surface.triangles, axis=1), axis=1) == 0).any():
        return False   # a merge collapsed some triangle
    try:
        edge_faces = surface.undirected_edge_faces()
    except ValueError:
        return False
    if any(len(faces) != 2 for faces in edge_faces.values()):
        return False
    if not is_oriented(surface):
        return False
    degrees, on_boundary = vertex_degrees(surface)
    if on_boundary.any() or not (degrees == 7).all():
        return False
    if not all(vertex_link_is_single_cycle(surface, v)
               for v in range(surface.n_vertices)):
        return False
    return all(petrie_period(surface, st, 8) == 8 for st in all_states(surface))


def identify(piece: FundamentalPiece) -> QuotientSurface:
    """Close the piece by gluing its boundary squares in pairs.

    Searches the 3 branch pairings x 8 square symmetries, propagating
    each candidate to all three pairs through the order-3 rotation, and
    keeps the unique candidate that yields a closed oriented surface
    with all 24 vertex degrees 7 and Petrie period 8 everywhere.
    """
    survivors = []
    for offset in range(3):
        for rotation in range(4):
            for flipped in (False, True):
                pairs = []
                for b in range(3):
                    e = piece.prism_open[b].vertex_ids
                    f = piece.antiprism_open[(b + offset) % 3].vertex_ids
                    for i in range(4):
                        j = (rotation - i) % 4 if flipped else (rotation + i) % 4
                        pairs.append((e[i], f[j]))
                surface, mapping = _merged_surface(piece, pairs)
                if _is_closed_37_petrie8(surface):
                    survivors.append((Identification(offset, rotation, flipped,
                                                     tuple(pairs)), surface, mapping))
    if not survivors:
        raise IdentificationError(
            "no boundary correspondence yields a closed {3,7} surface "
            "with Petrie period 8")
    if len(survivors) > 1:
        found = [(s[0].branch_offset, s[0].rotation, s[0].flipped) for s in survivors]
        raise IdentificationError(f"identification is not unique: {found}")
    ident, surface, mapping = survivors[0]
    return QuotientSurface(surface, piece, ident, mapping)


def genus(q) -> int:
    """Genus (2 - chi)/2 of a closed oriented triangle surface."""
    surface = q.surface if isinstance(q, QuotientSurface) else q
    if any(len(faces) != 2 for faces in surface.undirected_edge_faces().values()):
        raise ValueError("genus requires a closed surface")
    if not is_oriented(surface):
        raise ValueError("genus requires an oriented surface")
    chi = euler_characteristic(surface)
    if (2 - chi) % 2 != 0:
        raise ValueError(f"odd 2 - chi = {2 - chi}")
    return (2 - chi) // 2


def square_normal(points: np.ndarray) -> np.ndarray:
    """Unnormalized normal of a planar quadrilateral given as a 4x3
    cycle of corner points."""
    return triangle_normal(points[0], points[1], points[2])


@dataclass(frozen=True)
class NonEmbeddabilityReport:
    """Angles between the normals of each identified square pair.

    The pairs are abstractly identified but their ambient normals are
    not parallel, so no Euclidean translation can realize the gluing:
    the closed quotient cannot come from a translation lattice.
    """

    pair_angles_deg: tuple[float, float, float]
    all_nonparallel: bool          # every angle above the coarse floor
    angles_agree: bool             # the three angles match (order-3 symmetry)
    symmetry_angle_dev: float      # rotated branch-0 normal vs branch-1 normal


def verify_nonembeddability(piece: FundamentalPiece,
                            q: QuotientSurface | None = None,
                            tol: Tolerance = DEFAULT_TOL) -> NonEmbeddabilityReport:
    if q is None:
        q = identify(piece)
    offset = q.identification.branch_offset
    angles = []
    for b in range(3):
        n_e = square_normal(piece.prism_open[b].points(piece.surface))
        n_f = square_normal(piece.antiprism_open[(b + offset) % 3].points(piece.surface))
        angles.append(angle_between_lines(n_e, n_f))
    n0_rotated = q.piece.symmetry.rotation @ square_normal(
        piece.prism_open[0].points(piece.surface))
    n1 = square_normal(piece.prism_open[1].points(piece.surface))
    sym_dev = angle_between_lines(n0_rotated, n1)
    angles_deg = tuple(math.degrees(a) for a in angles)
    return NonEmbeddabilityReport(
        pair_angles_deg=angles_deg,
        all_nonparallel=all(a > tol.eps_angle_distinct for a in angles),
        angles_agree=max(angles) - min(angles) <= tol.eps_angle_parallel,
        symmetry_angle_dev=sym_dev,
    )


@dataclass(eq=False)
class CoveringLabel:
    """A simplicial covering map from a grown surface onto the quotient."""

    image_triangle: np.ndarray    # growth triangle -> quotient triangle
    corner_images: np.ndarray     # (F, 3) quotient vertex id per corner
    vertex_image: np.ndarray      # growth vertex -> quotient vertex (-1 if unused)

    def label_multiset(self, n_quotient_triangles: int = 56) -> np.ndarray:
        return np.bincount(self.image_triangle, minlength=n_quotient_triangles)


def covering_label(s: TriangleSurface, q: QuotientSurface) -> CoveringLabel:
    """Label every triangle of a grown surface by its quotient image.

    The root prism's triangles seed the labels (they are triangles of
    the quotient themselves); labels then propagate across every
    interior edge using the quotient's adjacency.  Raises CoveringError
    if two propagation routes disagree anywhere, and verifies that
    every interior vertex's triangle fan maps bijectively onto the fan
    of its image vertex.
    """
    qsurf = q.surface
    q_edge = qsurf.edge_map()
    s_edge = s.edge_map()

    image = np.full(s.n_triangles, -1, dtype=np.int64)
    corners = np.full((s.n_triangles, 3), -1, dtype=np.int64)

    # Seed: the root prism occupies triangles 0 and 1 in both complexes,
    # with identical local vertex order.
    root_growth = [f for f, (path, _) in enumerate(s.provenance) if path == "P"]
    root_quot = [f for f, (path, _) in enumerate(qsurf.provenance) if path == "P"]
    if len(root_growth) != 2 or len(root_quot) != 2:
        raise CoveringError("root prism triangles not found in both complexes")
    queue = []
    for f, qf in zip(root_growth, root_quot):
        image[f] = qf
        corners[f] = q.piece_to_quotient[q.piece.surface.triangles[qf]]
        queue.append(f)

    def corner_image(f: int, v: int) -> int:
        tri = s.triangles[f]
        for slot in range(3):
            if tri[slot] == v:
                return int(corners[f, slot])
        raise CoveringError(f"vertex {v} not in triangle {f}")

    while queue:
        f = queue.pop()
        for (u, v) in s.directed_edges(f):
            g = s_edge.get((v, u))
            if g is None:
                continue
            iu, iv = corner_image(f, u), corner_image(f, v)
            qg = q_edge[(iv, iu)]
            q_tri = [int(x) for x in qsurf.triangles[qg]]
            iw = next(x for x in q_tri if x != iu and x != iv)
            w = _third(s.triangles[g], v, u)
            proposal = {v: iv, u: iu, w: iw}
            g_corners = np.array([proposal[int(x)] for x in s.triangles[g]])
            if image[g] == -1:
                image[g] = qg
                corners[g] = g_corners
                queue.append(g)
            elif image[g] != qg or (corners[g] != g_corners).any():
                raise CoveringError(
                    f"triangle {g} reached with conflicting labels "
                    f"({image[g]} vs {qg}); covering fails here")

    if (image < 0).any():
        raise CoveringError("surface is not connected to the seed")

    # Per-vertex image must be consistent across incident triangles.
    vertex_image = np.full(s.n_vertices, -1, dtype=np.int64)
    for f in range(s.n_triangles):
        for slot in range(3):
            v = int(s.triangles[f, slot])
            if vertex_image[v] == -1:
                vertex_image[v] = corners[f, slot]
            elif vertex_image[v] != corners[f, slot]:
                raise CoveringError(f"vertex {v} has two images")

    # Local bijectivity on interior vertex links.
    degrees, on_boundary = vertex_degrees(s)
    q_star: dict[int, set[int]] = {}
    for qf in range(qsurf.n_triangles):
        for x in qsurf.triangles[qf]:
            q_star.setdefault(int(x), set()).add(qf)
    star: dict[int, set[int]] = {}
    for f in range(s.n_triangles):
        for x in s.triangles[f]:
            star.setdefault(int(x), set()).add(f)
    for v in range(s.n_vertices):
        if on_boundary[v]:
            continue
        images = {int(image[f]) for f in star[v]}
        if len(images) != len(star[v]) or images != q_star[int(vertex_image[v])]:
            raise CoveringError(f"link of vertex {v} does not map bijectively")

    return CoveringLabel(image, corners, vertex_image)


def _third(tri, u: int, v: int) -> int:
    for x in tri:
        if x != u and x != v:
            return int(x)
    raise CoveringError("degenerate triangle")
