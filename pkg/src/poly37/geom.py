"""Euclidean primitives shared by every module: points, rigid motions,
triangle normals, and the global tolerance policy.

All geometry is plain float64.  Every closed-form constant used by the
construction (square roots, fourth roots) is evaluated once at full
native precision, so nothing here needs exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeometryError",
    "Tolerance",
    "DEFAULT_TOL",
    "Point3",
    "Vector3",
    "RigidMotion",
    "vec",
    "identity_motion",
    "compose",
    "rotate_z",
    "rotation_about_axis",
    "reflection_across_plane",
    "triangle_normal",
    "are_parallel",
    "angle_between_lines",
]

# Conventions: a Point3/Vector3 is a float64 ndarray of shape (3,);
# batches are (N, 3).
Point3 = np.ndarray
Vector3 = np.ndarray


class GeometryError(ValueError):
    """Degenerate or invalid geometric input."""


@dataclass(frozen=True)
class Tolerance:
    """Global tolerance policy.

    ``eps_length``         absolute tolerance for lengths and coordinates
    ``eps_angle_parallel`` angular tolerance (radians) when asserting two
                           directions ARE parallel
    ``eps_angle_distinct`` much coarser angular floor used only when
                           asserting two directions are NOT parallel, so a
                           genuinely skew pair cannot slip through by
                           numerical accident
    """

    eps_length: float = 1e-9
    eps_angle_parallel: float = 1e-9
    eps_angle_distinct: float = math.radians(1.0)

    def __post_init__(self) -> None:
        if not (0.0 < self.eps_length < 1.0):
            raise ValueError("eps_length must be positive and << 1")
        if not (0.0 < self.eps_angle_parallel < 1.0):
            raise ValueError("eps_angle_parallel must be positive and << 1")
        if self.eps_angle_distinct <= self.eps_angle_parallel:
            raise ValueError("eps_angle_distinct must be coarser than eps_angle_parallel")


DEFAULT_TOL = Tolerance()


def vec(x: float, y: float, z: float) -> Vector3:
    return np.array([x, y, z], dtype=float)


@dataclass(frozen=True, eq=False)
class RigidMotion:
    """An isometry of R^3: ``p -> rotation @ p + translation``.

    ``rotation`` is orthogonal; determinant is +1 everywhere except in
    the one place the artifact deliberately reflects (the mirror
    operation of the assembly module).
    """

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Apply to a single point (3,) or a batch (N, 3)."""
        return np.asarray(points, dtype=float) @ self.rotation.T + self.translation

    def inverse(self) -> "RigidMotion":
        rt = self.rotation.T
        return RigidMotion(rt, -(rt @ self.translation))

    def is_orthonormal(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        err = np.abs(self.rotation @ self.rotation.T - np.eye(3)).max()
        return bool(err <= 10 * tol.eps_length)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.rotation))


def identity_motion() -> RigidMotion:
    return RigidMotion()


def compose(a: RigidMotion, b: RigidMotion) -> RigidMotion:
    """Motion acting as ``a`` after ``b``: apply(compose(a,b), p) == a(b(p))."""
    return RigidMotion(a.rotation @ b.rotation,
                       a.rotation @ b.translation + a.translation)


def rotate_z(angle_degrees: float) -> RigidMotion:
    """Rotation about the z-axis, zero translation."""
    t = math.radians(angle_degrees)
    c, s = math.cos(t), math.sin(t)
    return RigidMotion(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def rotation_about_axis(point: Point3, direction: Vector3,
                        angle_degrees: float) -> RigidMotion:
    """Rotation by ``angle_degrees`` about the line through ``point``
    with the given direction (Rodrigues form)."""
    d = np.asarray(direction, dtype=float)
    n = np.linalg.norm(d)
    if n == 0.0:
        raise GeometryError("rotation axis direction must be nonzero")
    k = d / n
    t = math.radians(angle_degrees)
    kx = np.array([[0.0, -k[2], k[1]],
                   [k[2], 0.0, -k[0]],
                   [-k[1], k[0], 0.0]])
    rot = np.eye(3) + math.sin(t) * kx + (1.0 - math.cos(t)) * (kx @ kx)
    p = np.asarray(point, dtype=float)
    return RigidMotion(rot, p - rot @ p)


def reflection_across_plane(point: Point3, normal: Vector3) -> RigidMotion:
    """Reflection across the plane through ``point`` with the given
    normal.  Determinant -1; used only by the mirror operation."""
    nv = np.asarray(normal, dtype=float)
    nn = np.linalg.norm(nv)
    if nn == 0.0:
        raise GeometryError("plane normal must be nonzero")
    k = nv / nn
    rot = np.eye(3) - 2.0 * np.outer(k, k)
    p = np.asarray(point, dtype=float)
    return RigidMotion(rot, p - rot @ p)


def triangle_normal(p1: Point3, p2: Point3, p3: Point3,
                    tol: Tolerance = DEFAULT_TOL) -> Vector3:
    """Unnormalized normal (p2-p1) x (p3-p1).

    Callers compare the result up to scale; the paper mixes unit and
    non-unit normals freely, so no normalization happens here.
    """
    n = np.cross(np.asarray(p2, dtype=float) - p1, np.asarray(p3, dtype=float) - p1)
    area = 0.5 * np.linalg.norm(n)
    if area <= tol.eps_length:
        raise GeometryError(f"degenerate triangle (area {area:.3e})")
    return n


def are_parallel(u: Vector3, v: Vector3, tol: Tolerance = DEFAULT_TOL,
                 eps_angle: float | None = None) -> bool:
    """True iff ||u x v|| <= eps * ||u|| * ||v|| (sign-insensitive).

    ``eps_angle`` overrides the tolerance, e.g. with the coarse
    ``eps_angle_distinct`` floor when asserting NON-parallelism.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu <= tol.eps_length or nv <= tol.eps_length:
        raise GeometryError("are_parallel requires nonzero vectors")
    eps = tol.eps_angle_parallel if eps_angle is None else eps_angle
    return bool(np.linalg.norm(np.cross(u, v)) <= eps * nu * nv)


def angle_between_lines(u: Vector3, v: Vector3) -> float:
    """Angle in radians between the LINES spanned by u and v, in
    [0, pi/2] (sign of either vector is irrelevant)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.linalg.norm(np.cross(u, v))
    dot = abs(float(np.dot(u, v)))
    return math.atan2(cross, dot)
