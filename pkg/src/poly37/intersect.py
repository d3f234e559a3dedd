"""Self-intersection detection for the growing immersed surface.

Pairs of triangles that share no combinatorial vertex are tested for
contact; sharing a point anywhere (interior, edge, vertex, coplanar
overlap) counts.  Candidate pairs are pruned with an axis-aligned
bounding-box hierarchy; the actual test is a vectorized separating-axis
test complete for both the transversal and the coplanar case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import Chirality, grow
from .geom import DEFAULT_TOL, GeometryError, Tolerance
from .surface import TriangleSurface

__all__ = [
    "IntersectionWitness",
    "tri_tri_intersect",
    "surface_self_intersects",
    "first_self_intersecting_iteration",
    "AabbTree",
]

# Pair-batch size for the vectorized test; bounds peak memory.
_BATCH = 65536


@dataclass(frozen=True)
class IntersectionWitness:
    """Evidence of a self-intersection between two non-adjacent triangles."""

    tri_a: int
    tri_b: int
    path_a: str
    path_b: str
    point: np.ndarray      # one point common to both closed triangles

    def paths_diverge(self) -> bool:
        """True iff neither solid is an ancestor of the other in the tree."""
        a, b = self.path_a + "/", self.path_b + "/"
        return not (a.startswith(b) or b.startswith(a))


def _batch_sat_overlap(tri_a: np.ndarray, tri_b: np.ndarray) -> np.ndarray:
    """Separating-axis overlap test for N triangle pairs, (N,3,3) each.

    Axes: both face normals, the nine edge-edge cross products, and the
    six in-plane edge normals (which make the test complete for
    coplanar pairs).  Zero axes project everything to a point and can
    never separate, so degenerate cross products are harmless.
    Closed-triangle semantics: touching counts as overlap.
    """
    ea = np.stack([tri_a[:, 1] - tri_a[:, 0],
                   tri_a[:, 2] - tri_a[:, 1],
                   tri_a[:, 0] - tri_a[:, 2]], axis=1)          # (N,3,3)
    eb = np.stack([tri_b[:, 1] - tri_b[:, 0],
                   tri_b[:, 2] - tri_b[:, 1],
                   tri_b[:, 0] - tri_b[:, 2]], axis=1)
    na = np.cross(ea[:, 0], ea[:, 1])                           # (N,3)
    nb = np.cross(eb[:, 0], eb[:, 1])

    axes = [na[:, None, :], nb[:, None, :]]
    cross = np.cross(ea[:, :, None, :], eb[:, None, :, :])      # (N,3,3,3)
    axes.append(cross.reshape(len(tri_a), 9, 3))
    axes.append(np.cross(na[:, None, :], ea))                   # in-plane of A
    axes.append(np.cross(nb[:, None, :], eb))                   # in-plane of B
    all_axes = np.concatenate(axes, axis=1)                     # (N,17,3)

    pa = np.einsum("nkd,nvd->nkv", all_axes, tri_a)             # (N,17,3)
    pb = np.einsum("nkd,nvd->nkv", all_axes, tri_b)
    separated = (pa.max(axis=2) < pb.min(axis=2)) | (pb.max(axis=2) < pa.min(axis=2))
    return ~separated.any(axis=1)


def _plane_section(tri: np.ndarray, normal: np.ndarray, origin: np.ndarray,
                   eps: float) -> list[np.ndarray]:
    """Points where the triangle's boundary meets the given plane."""
    d = (tri - origin) @ normal
    pts: list[np.ndarray] = []
    for i in range(3):
        j = (i + 1) % 3
        if abs(d[i]) <= eps:
            pts.append(tri[i])
        elif d[i] * d[j] < 0.0:
            t = d[i] / (d[i] - d[j])
            pts.append(tri[i] + t * (tri[j] - tri[i]))
    # Dedupe near-coincident points.
    out: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - o) <= 10 * eps for o in out):
            out.append(p)
    return out


def _point_in_coplanar_triangle(p: np.ndarray, tri: np.ndarray,
                                normal: np.ndarray, eps: float) -> bool:
    for i in range(3):
        edge = tri[(i + 1) % 3] - tri[i]
        if np.dot(np.cross(edge, p - tri[i]), normal) < -eps:
            return False
    return True


def _witness_point(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Some point of the (known nonempty) intersection of two closed
    triangles."""
    na = np.cross(a[1] - a[0], a[2] - a[0])
    nb = np.cross(b[1] - b[0], b[2] - b[0])
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    eps = 1e-12 * scale

    da = (a - b[0]) @ nb
    if np.abs(da).max() <= eps * np.linalg.norm(nb):
        # Coplanar: a vertex of one inside the other, else an edge crossing.
        for p in a:
            if _point_in_coplanar_triangle(p, b, nb, eps):
                return p.copy()
        for p in b:
            if _point_in_coplanar_triangle(p, a, na, eps):
                return p.copy()
        for i in range(3):
            sec = _plane_section(b, np.cross(a[(i + 1) % 3] - a[i], na), a[i], eps)
            for p in sec:
                if _point_in_coplanar_triangle(p, a, na, eps):
                    return p
        raise GeometryError("coplanar witness not found")

    # Transversal: clip both triangles against the other's plane and
    # overlap the resulting collinear segments.
    sec_a = _plane_section(a, nb, b[0], eps)
    sec_b = _plane_section(b, na, a[0], eps)
    if not sec_a or not sec_b:
        raise GeometryError("witness requested for non-intersecting pair")
    direction = np.cross(na, nb)
    ta = sorted(float(p @ direction) for p in sec_a)
    tb = sorted(float(p @ direction) for p in sec_b)
    lo = max(ta[0], tb[0])
    hi = min(ta[-1], tb[-1])
    t_mid = 0.5 * (lo + hi)
    p0, p1 = (sec_a[0], sec_a[-1]) if len(sec_a) > 1 else (sec_a[0], sec_a[0])
    t0, t1 = float(p0 @ direction), float(p1 @ direction)
    if abs(t1 - t0) <= eps:
        return p0.copy()
    s = (t_mid - t0) / (t1 - t0)
    return p0 + s * (p1 - p0)


def tri_tri_intersect(t1: np.ndarray, t2: np.ndarray,
                      tol: Tolerance = DEFAULT_TOL) -> tuple[bool, np.ndarray | None]:
    """Do two closed triangles share a point?  Returns (flag, witness).

    Coplanar overlap counts as intersection.  Adjacency filtering
    (shared combinatorial vertices) is the caller's business; the test
    is purely geometric.
    """
    t1 = np.asarray(t1, dtype=float).reshape(1, 3, 3)
    t2 = np.asarray(t2, dtype=float).reshape(1, 3, 3)
    for t in (t1, t2):
        n = np.cross(t[0, 1] - t[0, 0], t[0, 2] - t[0, 0])
        if np.linalg.norm(n) <= 2 * tol.eps_length:
            raise GeometryError("degenerate triangle in intersection test")
    hit = bool(_batch_sat_overlap(t1, t2)[0])
    if not hit:
        return False, None
    return True, _witness_point(t1[0], t2[0])


class AabbTree:
    """Median-split hierarchy of axis-aligned boxes over triangles."""

    def __init__(self, tri_points: np.ndarray, leaf_size: int = 8):
        self.tri_points = tri_points
        self.lo = tri_points.min(axis=1)
        self.hi = tri_points.max(axis=1)
        self.leaf_size = leaf_size
        # Nodes as parallel arrays: box, children (-1 for leaves), items.
        self.node_lo: list[np.ndarray] = []
        self.node_hi: list[np.ndarray] = []
        self.node_left: list[int] = []
        self.node_right: list[int] = []
        self.node_items: list[np.ndarray | None] = []
        order = np.arange(len(tri_points))
        if len(order):
            self._build(order)

    def _build(self, items: np.ndarray) -> int:
        idx = len(self.node_lo)
        self.node_lo.append(self.lo[items].min(axis=0))
        self.node_hi.append(self.hi[items].max(axis=0))
        self.node_left.append(-1)
        self.node_right.append(-1)
        self.node_items.append(None)
        if len(items) <= self.leaf_size:
            self.node_items[idx] = items
            return idx
        centers = 0.5 * (self.lo[items] + self.hi[items])
        axis = int(np.argmax(self.node_hi[idx] - self.node_lo[idx]))
        order = items[np.argsort(centers[:, axis], kind="stable")]
        mid = len(order) // 2
        self.node_left[idx] = self._build(order[:mid])
        self.node_right[idx] = self._build(order[mid:])
        return idx

    def query_box(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """All triangle indices whose boxes overlap [lo, hi] (closed)."""
        if not self.node_lo:
            return np.empty(0, dtype=np.int64)
        out = []
        stack = [0]
        while stack:
            n = stack.pop()
            if (self.node_lo[n] > hi).any() or (self.node_hi[n] < lo).any():
                continue
            items = self.node_items[n]
            if items is not None:
                inside = ~(((self.lo[items] > hi) | (self.hi[items] < lo)).any(axis=1))
                out.append(items[inside])
            else:
                stack.append(self.node_left[n])
                stack.append(self.node_right[n])
        return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _candidate_pairs_bvh(surface: TriangleSurface,
                         query_tris: np.ndarray | None = None) -> np.ndarray:
    """Box-overlapping, vertex-disjoint triangle pairs (i < j), pruned by
    the hierarchy.  ``query_tris`` restricts one side of each pair."""
    pts = surface.triangle_points()
    tree = AabbTree(pts)
    tris = surface.triangles
    queries = np.arange(surface.n_triangles) if query_tris is None else query_tris
    pairs = []
    for i in queries:
        cand = tree.query_box(tree.lo[i], tree.hi[i])
        cand = cand[cand > i] if query_tris is None else cand[cand != i]
        if len(cand) == 0:
            continue
        shared = (tris[cand][:, :, None] == tris[i][None, None, :]).any(axis=(1, 2))
        cand = cand[~shared]
        if len(cand):
            pairs.append(np.column_stack([np.full(len(cand), i), cand]))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    out = np.concatenate(pairs)
    out.sort(axis=1)
    return np.unique(out, axis=0)


def _candidate_pairs_brute(surface: TriangleSurface) -> np.ndarray:
    """Every vertex-disjoint pair (i < j): the pruning-free oracle."""
    tris = surface.triangles
    n = surface.n_triangles
    i, j = np.triu_indices(n, k=1)
    shared = (tris[i][:, :, None] == tris[j][:, None, :]).any(axis=(1, 2))
    return np.column_stack([i[~shared], j[~shared]])


def _test_pairs(surface: TriangleSurface, pairs: np.ndarray) -> np.ndarray:
    """Indices into ``pairs`` of the actually intersecting ones."""
    pts = surface.triangle_points()
    lo = pts.min(axis=1)
    hi = pts.max(axis=1)
    hits = []
    for start in range(0, len(pairs), _BATCH):
        chunk = pairs[start:start + _BATCH]
        i, j = chunk[:, 0], chunk[:, 1]
        # The coordinate axes are separating axes too; testing them
        # first discards most pairs before the full 17-axis battery.
        boxed = ~(((lo[i] > hi[j]) | (hi[i] < lo[j])).any(axis=1))
        idx = np.flatnonzero(boxed)
        if len(idx) == 0:
            continue
        flags = _batch_sat_overlap(pts[i[idx]], pts[j[idx]])
        hits.append(idx[flags] + start)
    return np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)


def surface_self_intersects(surface: TriangleSurface,
                            tol: Tolerance = DEFAULT_TOL,
                            brute_force: bool = False) -> IntersectionWitness | None:
    """First (lexicographically smallest) self-intersecting pair, if any.

    All triangle pairs that share no combinatorial vertex are tested,
    through the bounding-box hierarchy unless ``brute_force`` asks for
    the exhaustive oracle.  The result is independent of traversal
    order: all hits are collected, then the minimal pair is reported.
    """
    pairs = (_candidate_pairs_brute(surface) if brute_force
             else _candidate_pairs_bvh(surface))
    if len(pairs) == 0:
        return None
    hits = _test_pairs(surface, pairs)
    if len(hits) == 0:
        return None
    hit_pairs = pairs[hits]
    order = np.lexsort((hit_pairs[:, 1], hit_pairs[:, 0]))
    a, b = (int(x) for x in hit_pairs[order[0]])
    pts = surface.triangle_points()
    _, point = tri_tri_intersect(pts[a], pts[b], tol)
    return IntersectionWitness(a, b, surface.provenance[a][0],
                               surface.provenance[b][0], point)


def first_self_intersecting_iteration(
        k_max: int, chirality: Chirality = Chirality.RIGHT,
        tol: Tolerance = DEFAULT_TOL) -> tuple[int, IntersectionWitness] | None:
    """Smallest k <= k_max at which grow(k) self-intersects.

    Growth has the prefix property, so after depth j is known clean only
    pairs involving a triangle added at depth j+1 need testing; the
    incremental sweep is exhaustive.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    for k in range(1, k_max + 1):
        tree, surface = grow(k, chirality, tol)
        new = np.flatnonzero(tree.triangle_depths == k)
        pairs = _candidate_pairs_bvh(surface, query_tris=new)
        if len(pairs) == 0:
            continue
        hits = _test_pairs(surface, pairs)
        if len(hits) == 0:
            continue
        hit_pairs = pairs[hits]
        order = np.lexsort((hit_pairs[:, 1], hit_pairs[:, 0]))
        a, b = (int(x) for x in hit_pairs[order[0]])
        pts = surface.triangle_points()
        _, point = tri_tri_intersect(pts[a], pts[b], tol)
        return k, IntersectionWitness(a, b, surface.provenance[a][0],
                                      surface.provenance[b][0], point)
    return None
