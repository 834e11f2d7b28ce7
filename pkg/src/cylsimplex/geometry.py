"""Geometric primitives: simplices, axis lines, cylinders and axis recovery.

Lines are stored in moment form ``(u, v)``: ``v`` is a unit direction and ``u``
the point of the line closest to the origin, so ``u . v == 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import DegenerateError, DimensionMismatch, ShapeError, SingularMatrix

DEGENERACY_TOL = 1e-10


def canonical_direction(v: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Normalize ``v`` and flip it so that its first nonzero component is positive."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("zero direction vector")
    if abs(norm - 1.0) > 1e-15:  # leaves already-unit input untouched, so the map is idempotent
        v = v / norm
    for x in v:
        if abs(x) > tol:
            return -v if x < 0 else v
    return v


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SimplexN:
    """n+1 affinely independent points in E^n.

    The last vertex plays the role of the origin in every translated
    computation (``P`` rows are ``p_i - p_{n+1}``).
    """

    vertices: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        verts = _frozen(self.vertices)
        if verts.ndim != 2:
            raise ShapeError(f"vertices must be a 2-d array, got shape {verts.shape}")
        m, n = verts.shape
        if n < 2:
            raise DimensionMismatch(f"dimension must be >= 2, got {n}")
        if m != n + 1:
            raise ShapeError(f"a simplex in E^{n} needs {n + 1} vertices, got {m}")
        if not np.all(np.isfinite(verts)):
            raise ShapeError("vertex coordinates must be finite")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "dim", n)
        P = verts[:-1] - verts[-1]
        scale = self.max_edge_length()
        det = np.linalg.det(P)
        if scale == 0.0 or abs(det) < DEGENERACY_TOL * scale**n:
            raise DegenerateError(
                f"affine independence test failed: |det M| = {abs(det):.3e} < "
                f"{DEGENERACY_TOL:g} * (max edge)^{n} = {DEGENERACY_TOL * scale**n:.3e}"
            )

    @property
    def origin(self) -> np.ndarray:
        return self.vertices[-1]

    @property
    def translated(self) -> np.ndarray:
        """Rows ``p_i - p_{n+1}`` for i = 1..n (the matrix M)."""
        return self.vertices[:-1] - self.vertices[-1]

    def max_edge_length(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def edge_pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.dim + 1), 2))

    def edge_directions(self) -> np.ndarray:
        """Canonical unit directions of all C(n+1, 2) edges, in ``edge_pairs`` order."""
        return np.array(
            [canonical_direction(self.vertices[j] - self.vertices[i]) for i, j in self.edge_pairs()]
        )

    def transformed(self, rotation=None, translation=None, scale: float = 1.0) -> "SimplexN":
        verts = np.asarray(self.vertices) * scale
        if rotation is not None:
            verts = verts @ np.asarray(rotation).T
        if translation is not None:
            verts = verts + np.asarray(translation)
        return SimplexN(verts)

    def permuted(self, perm) -> "SimplexN":
        return SimplexN(self.vertices[list(perm)])


@dataclass(frozen=True)
class AxisLine:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        v = _frozen(self.v)
        u = _frozen(self.u)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("axis direction must be a unit vector")
        if abs(u @ v) > 1e-12 * max(1.0, np.linalg.norm(u)):
            raise ValueError("moment point must be orthogonal to the direction")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def through(cls, point, direction) -> "AxisLine":
        """Line through ``point`` with the given direction, put in canonical moment form."""
        v = canonical_direction(direction)
        p = np.asarray(point, dtype=float)
        u = p - (p @ v) * v
        # one correction pass keeps u.v at rounding level for large |p|
        u = u - (u @ v) * v
        return cls(u, v)


@dataclass(frozen=True)
class Cylinder:
    axis: AxisLine
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"cylinder radius must be positive, got {self.radius}")

    def distances(self, points) -> np.ndarray:
        return point_line_distances(np.asarray(points, dtype=float), self.axis)


def point_line_distance(p, line: AxisLine) -> float:
    d = np.asarray(p, dtype=float) - line.u
    return float(np.linalg.norm(d - (d @ line.v) * line.v))


def point_line_distances(points: np.ndarray, line: AxisLine) -> np.ndarray:
    d = points - line.u
    return np.linalg.norm(d - np.outer(d @ line.v, line.v), axis=1)


def tangency_residual(line: AxisLine, p, r: float) -> float:
    """Homogeneous quartic residual ``v^2u^2 - 2v^2 u.p + v^2p^2 - (v.p)^2 - r^2 v^2``.

    Zero exactly when ``p`` lies at distance ``r`` from the line.
    """
    u, v = line.u, line.v
    p = np.asarray(p, dtype=float)
    vv = v @ v
    return float(vv * (u @ u) - 2 * vv * (u @ p) + vv * (p @ p) - (v @ p) ** 2 - r * r * vv)


class AxisRecovery(NamedTuple):
    u: np.ndarray  # moment point relative to the last vertex
    r: float
    g1_residual: float  # u . v
    origin: np.ndarray

    def line(self, v) -> AxisLine:
        """Axis in original coordinates (meaningful when ``g1_residual`` vanishes)."""
        return AxisLine.through(self.u + self.origin, v)


def recover_axis(v, s: SimplexN) -> AxisRecovery:
    """Solve the tangency differences for the moment point ``u`` given a direction.

    With the last vertex at the origin, ``2 v^2 u.P_i = v^2 P_i^2 - (v.P_i)^2``.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (s.dim,):
        raise DimensionMismatch(f"direction must have length {s.dim}")
    P = s.translated
    scale = s.max_edge_length()
    if abs(np.linalg.det(P)) < DEGENERACY_TOL * scale**s.dim:
        raise SingularMatrix("matrix of translated vertices is singular")
    vv = v @ v
    rhs = vv * (P**2).sum(1) - (P @ v) ** 2
    u = np.linalg.solve(P, rhs) / (2 * vv)
    return AxisRecovery(u, float(np.linalg.norm(u)), float(u @ v), s.origin)


def face_areas_e3(s: SimplexN) -> np.ndarray:
    """Facet areas of a tetrahedron; entry ``i`` is the face opposite vertex ``i``."""
    if s.dim != 3:
        raise DimensionMismatch("face areas are defined here for 3-simplices only")
    V = s.vertices
    areas = []
    for i in range(4):
        a, b, c = (V[j] for j in range(4) if j != i)
        areas.append(0.5 * np.linalg.norm(np.cross(b - a, c - a)))
    return np.array(areas)


def regular_tetrahedron() -> SimplexN:
    """Regular tetrahedron with edge sqrt(2) as alternate vertices of the cube [-1/2, 1/2]^3."""
    w = 0.5
    return SimplexN(np.array([[w, w, w], [w, -w, -w], [-w, w, -w], [-w, -w, w]]))


def box_simplex(w1: float, w2: float, w3: float) -> SimplexN:
    return SimplexN(
        np.array([[w1, w2, w3], [w1, -w2, -w3], [-w1, w2, -w3], [-w1, -w2, w3]], dtype=float)
    )
