"""Special tetrahedra: facet-area classes and the equifacial closed form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotEquifacial
from .geometry import Cylinder, SimplexN, face_areas_e3, recover_axis

AREA_TOL = 1e-9
ORTHO_TOL = 1e-7

EXTREMA_BOUNDS = {"generic": 36, "two_pairs": 28, "equifacial": 24}

# opposite edge pairs; the first pair of each row contains vertex 0
OPPOSITE_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


@dataclass(frozen=True)
class SimplexClassE3:
    tag: str
    area_partition: tuple  # groups of facet indices with equal area
    areas: tuple

    @property
    def extrema_bound(self) -> int:
        return EXTREMA_BOUNDS[self.tag]

    @property
    def bound_breakdown(self) -> str:
        return {"generic": "36", "two_pairs": "20 + 8", "equifacial": "3 * 8"}[self.tag]


def _require_e3(s: SimplexN):
    if s.dim != 3:
        raise DimensionMismatch(f"expected a 3-simplex, got dimension {s.dim}")


def _close(a, b, scale):
    return abs(a - b) <= AREA_TOL * scale


def classify(s: SimplexN) -> SimplexClassE3:
    _require_e3(s)
    areas = face_areas_e3(s)
    scale = float(areas.max())
    groups: list[list[int]] = []
    for i, a in enumerate(areas):
        for g in groups:
            if _close(areas[g[0]], a, scale):
                g.append(i)
                break
        else:
            groups.append([i])
    sizes = sorted(len(g) for g in groups)
    if sizes == [4]:
        tag = "equifacial"
    elif sizes == [2, 2]:
        tag = "two_pairs"
    else:
        tag = "generic"
    return SimplexClassE3(tag, tuple(tuple(g) for g in groups), tuple(float(a) for a in areas))


@dataclass(frozen=True)
class BoxParams:
    """Half side lengths of the circumscribed box and its placement.

    ``vertices = box_vertices(w) @ rotation.T + translation``. The rotation is
    orthogonal but may be a reflection, depending on the vertex order.
    """

    w1: float
    w2: float
    w3: float
    rotation: np.ndarray
    translation: np.ndarray

    @property
    def w(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3])

    def box_vertices(self) -> np.ndarray:
        w1, w2, w3 = self.w
        return np.array([[w1, w2, w3], [w1, -w2, -w3], [-w1, w2, -w3], [-w1, -w2, w3]])

    def apply(self, points) -> np.ndarray:
        return np.asarray(points) @ self.rotation.T + self.translation


def _connectors(V: np.ndarray) -> np.ndarray:
    return np.array([(V[a].sum(0) - V[b].sum(0)) / 2 for a, b in (tuple(map(list, p)) for p in OPPOSITE_PAIRS)])


def box_params(s: SimplexN) -> BoxParams:
    _require_e3(s)
    if classify(s).tag != "equifacial":
        raise NotEquifacial("facet areas are not all equal")
    V = np.asarray(s.vertices)
    C = _connectors(V)
    lengths = np.linalg.norm(C, axis=1)
    U = C / lengths[:, None]
    G = U @ U.T
    if np.abs(G - np.eye(3)).max() > ORTHO_TOL:
        raise NotEquifacial("opposite-edge midpoint connectors are not mutually orthogonal")
    w = lengths / 2
    return BoxParams(float(w[0]), float(w[1]), float(w[2]), U.T.copy(), V.mean(0))


def rho_profile(w, z2):
    """Squared radius along the concave profile, ``z2`` the squared second direction component."""
    w1, w2, w3 = (w.w if isinstance(w, BoxParams) else np.asarray(w, dtype=float))
    z = np.asarray(z2, dtype=float)
    k = w2 * w2 * w3 * w3 / (w1 * w1)
    return -k * z * z - (w2 * w2 - w3 * w3 - k) * z + w1 * w1 + w2 * w2


def candidate_axes(s: SimplexN) -> list:
    """Directions perpendicular to both edges of each opposite pair, with their radii."""
    V = np.asarray(s.vertices)
    out = []
    for (a, b), (c, d) in OPPOSITE_PAIRS:
        v = np.cross(V[b] - V[a], V[d] - V[c])
        v = v / np.linalg.norm(v)
        rec = recover_axis(v, s)
        out.append((v, rec))
    return out


def equifacial_min_cylinder(s: SimplexN) -> Cylinder:
    _require_e3(s)
    box_params(s)  # raises NotEquifacial
    best = None
    for v, rec in candidate_axes(s):
        if best is None or rec.r < best[1].r - 1e-15:
            best = (v, rec)
    v, rec = best
    line = rec.line(v)
    return Cylinder(line, rec.r)
