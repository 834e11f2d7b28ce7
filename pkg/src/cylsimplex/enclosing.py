"""Smallest enclosing cylinder of a tetrahedron and a direction-sampling oracle.

An optimal enclosing cylinder either passes through all four vertices (the
circumscribing case), or passes through three vertices ``p_i, p_j, p_k`` with
the axis tangent to the spheres of radius ``r`` about ``p_i`` and ``p_j`` in one
of three extreme ways:

``pair_cylinder_a``
    axis parallel to ``p_j - p_i`` at distance ``r`` from that line;
``pair_cone_b``
    axis through the midpoint of ``p_i p_j`` (spheres disjoint, ``a > 2r``);
``pair_bisector_c``
    axis in the bisector plane, tangent to the circle of radius
    ``sqrt(r^2 - a^2/4)`` about the midpoint (spheres meet, ``a <= 2r``).

Each family is a curve in ``(phi, r)`` once the contact with ``p_k`` is imposed;
the smallest ``r`` on it that still encloses the fourth vertex is a candidate.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from . import kernels
from .errors import DimensionMismatch, EmptyFamily
from .geometry import AxisLine, Cylinder, SimplexN, canonical_direction
from .solver import SolverConfig, critical_points, global_min

WITNESSES = ("circumscribing_4pts", "pair_cylinder_a", "pair_cone_b", "pair_bisector_c")
CONTACT_TOL = 1e-8
N_PHI = 256


# -- projection radius ----------------------------------------------------------------

def _orthonormal_complement(v: np.ndarray) -> np.ndarray:
    """Rows spanning the hyperplane orthogonal to unit ``v``."""
    Q, _ = np.linalg.qr(np.column_stack([v, np.eye(len(v))]))
    return Q[:, 1 : len(v)].T


def _circumball(R: list):
    """Center and squared radius of the smallest sphere through ``R`` within its affine hull."""
    if not R:
        return None, -1.0
    q0 = R[0]
    if len(R) == 1:
        return q0, 0.0
    A = np.array([q - q0 for q in R[1:]])
    G = A @ A.T
    lam = np.linalg.lstsq(G, 0.5 * np.diag(G), rcond=None)[0]
    c = q0 + lam @ A
    return c, float((c - q0) @ (c - q0))


def min_enclosing_ball(points) -> tuple:
    """Welzl's move-to-front recursion; returns ``(center, radius)``."""
    P = [np.asarray(p, dtype=float) for p in points]
    d = len(P[0])
    order = np.random.default_rng(0).permutation(len(P))
    P = [P[i] for i in order]
    scale = max(float(np.abs(np.array(P)).max()), 1e-300)
    eps = 1e-12 * scale * scale

    def rec(m, R):
        if m == 0 or len(R) == d + 1:
            return _circumball(R)
        c, r2 = rec(m - 1, R)
        p = P[m - 1]
        if c is not None and (p - c) @ (p - c) <= r2 * (1 + 1e-12) + eps:
            return c, r2
        return rec(m - 1, R + [p])

    c, r2 = rec(len(P), [])
    return c, float(np.sqrt(max(r2, 0.0)))


def projection_radius(points, v) -> float:
    """Radius of the smallest ball holding ``points`` projected onto the hyperplane ``v``-perp."""
    X = np.asarray(points, dtype=float)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    B = _orthonormal_complement(v)
    return min_enclosing_ball((X - X.mean(0)) @ B.T)[1]


# -- oracle ------------------------------------------------------------------------------

def fibonacci_hemisphere(k: int) -> np.ndarray:
    """Fibonacci lattice on the upper half of S^2 (``v`` and ``-v`` give the same radius)."""
    i = np.arange(k) + 0.5
    z = 1 - i / k
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (3 - np.sqrt(5)) * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _sample_directions(n: int, k: int, rng) -> np.ndarray:
    if n == 3:
        # a seeded rotation keeps the lattice deterministic but seed dependent
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        return fibonacci_hemisphere(k) @ Q.T
    V = rng.normal(size=(k, n))
    return V / np.linalg.norm(V, axis=1)[:, None]


def _distinct_best(V, vals, count, min_angle):
    order = np.argsort(vals)
    picked = []
    for i in order:
        if all(abs(V[i] @ V[j]) < np.cos(min_angle) for j in picked):
            picked.append(i)
            if len(picked) == count:
                break
    return picked


def _refine(X, v0, step, iters):
    B = _orthonormal_complement(v0)

    def direction(x):
        w = v0 + x @ B
        return w / np.linalg.norm(w)

    def obj(x):
        return float(kernels.batch_projection_radii(X, direction(x)[None, :])[0])

    x = np.zeros(len(B))
    for scale in (step, step / 20):
        simplex = np.vstack([x, x + scale * np.eye(len(B))])
        res = minimize(obj, x, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "maxiter": iters, "xatol": 1e-12, "fatol": 1e-15})
        x = res.x
    v = direction(x)
    return obj(x), v


def oracle_min_enclosing(points, n_samples: int = 200_000, refine_iters: int = 200,
                         rng_seed: int = 42, n_seeds: int = 6) -> tuple:
    """Upper-bound search: sampled directions, then Nelder-Mead refinement from the best few."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    X = np.asarray(points, dtype=float)
    n = X.shape[1]
    X = X - X.mean(0)
    rng = np.random.default_rng(rng_seed)
    V = _sample_directions(n, n_samples, rng)
    radii = kernels.batch_projection_radii(X, V)
    spacing = (2 * np.pi / n_samples) ** (1 / (n - 1)) if n > 2 else np.pi / n_samples
    best_r, best_v = np.inf, None
    # a seed cannot reach below the best sample unless it lies within a Lipschitz margin of it
    margin = 2 * np.sqrt((X * X).sum(1).max()) * spacing
    for i in _distinct_best(V, radii, n_seeds, 4 * spacing):
        if radii[i] > radii.min() + margin:
            break
        r, v = _refine(X, V[i], 2 * spacing, refine_iters)
        if r < best_r:
            best_r, best_v = r, v
    return float(best_r), canonical_direction(best_v)


# -- restricted families -------------------------------------------------------------------

@dataclass(frozen=True)
class _PairFrame:
    origin: np.ndarray
    E: np.ndarray  # rows e1 (along the pair), e2, e3
    a: float

    @classmethod
    def build(cls, pi, pj):
        d = pj - pi
        a = float(np.linalg.norm(d))
        e1 = d / a
        Q, _ = np.linalg.qr(np.column_stack([e1, np.eye(3)]))
        E = np.array([e1, Q[:, 1], Q[:, 2]])
        if E[0] @ e1 < 0:
            E[0] = -E[0]
        return cls(pi, E, a)


def _family_lines(F: _PairFrame, family: str, phi, r):
    """Axis point and direction (world frame) for parameter arrays ``phi``, ``r``."""
    phi, r = np.broadcast_arrays(np.asarray(phi, float), np.asarray(r, float))
    c, s = np.cos(phi), np.sin(phi)
    zero = np.zeros_like(phi)
    if family == "pair_cylinder_a":
        p = np.stack([zero, r * c, r * s], -1)
        d = np.stack([np.ones_like(phi), zero, zero], -1)
    elif family == "pair_cone_b":
        sa = np.clip(2 * r / F.a, 0.0, 1.0)
        ca = np.sqrt(1 - sa * sa)
        p = np.stack([np.full_like(phi, F.a / 2), zero, zero], -1)
        d = np.stack([ca, sa * c, sa * s], -1)
    elif family == "pair_bisector_c":
        rho = np.sqrt(np.maximum(r * r - F.a * F.a / 4, 0.0))
        p = np.stack([np.full_like(phi, F.a / 2), rho * c, rho * s], -1)
        d = np.stack([zero, -s, c], -1)
    else:
        raise ValueError(f"unknown family {family!r}")
    return F.origin + p @ F.E, d @ F.E


def _dist(q, p, d):
    w = q - p
    return np.linalg.norm(w - (w * d).sum(-1)[..., None] * d, axis=-1)


def _branch_radii(F: _PairFrame, family: str, pk, phi) -> list:
    """Radius as a function of ``phi`` on each branch of the contact curve with ``pk``.

    Contact with ``pk`` is quadratic in the family's radius coordinate, so every
    branch is explicit. Entries are NaN where a branch does not exist.
    """
    w = F.E @ (pk - F.origin)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    a = F.a
    with np.errstate(divide="ignore", invalid="ignore"):
        if family == "pair_cylinder_a":
            # (w2 - r c)^2 + (w3 - r s)^2 = r^2
            den = 2 * (w[1] * c + w[2] * s)
            r = (w[1] ** 2 + w[2] ** 2) / den
            return [np.where(den > 0, r, np.nan)]
        if family == "pair_cone_b":
            # T = tan(alpha): (|w'|^2 - q^2 - a^2/4) T^2 - 2 w1' q T + (|w'|^2 - w1'^2) = 0
            wm = w - np.array([a / 2, 0, 0])
            q = wm[1] * c + wm[2] * s
            ww = wm @ wm
            A = ww - q * q - a * a / 4
            B = -2 * wm[0] * q
            C = ww - wm[0] ** 2
            disc = B * B - 4 * A * C
            out = []
            for sign in (1, -1):
                T = (-B + sign * np.sqrt(disc)) / (2 * A)
                r = a / 2 * T / np.sqrt(1 + T * T)
                out.append(np.where((disc >= 0) & (T > 0), r, np.nan))
            return out
        if family == "pair_bisector_c":
            # |w'|^2 - t^2 - a^2/4 = 2 rho (w'.n)
            wm = w - np.array([a / 2, 0, 0])
            t = -wm[1] * s + wm[2] * c
            wn = wm[1] * c + wm[2] * s
            rho = (wm @ wm - t * t - a * a / 4) / (2 * wn)
            r = np.sqrt(rho * rho + a * a / 4)
            return [np.where((rho >= 0) & np.isfinite(rho), r, np.nan)]
    raise ValueError(f"unknown family {family!r}")


def _slack(F, family, others, phi, r):
    p, d = _family_lines(F, family, phi, r)
    if len(others) == 0:
        return np.full(np.shape(p)[:-1], -np.inf)
    return np.max([_dist(q, p, d) for q in others], axis=0) - r


def _branch_minimum(F, family, others, branch, scale):
    """Smallest feasible radius on one branch: golden-section at grid minima, brentq at enclosure boundaries."""
    phis = np.linspace(0, 2 * np.pi, N_PHI + 1)
    r_of = lambda ph: float(_branch_radii(F, family, others[0][1], ph)[branch])  # noqa: E731
    R = _branch_radii(F, family, others[0][1], phis)[branch]
    valid = np.isfinite(R)
    G = np.where(valid, _slack(F, family, others[1], phis, np.where(valid, R, 1.0)), np.nan)
    cands = []
    tol = 1e-12 * scale
    for i in range(N_PHI):
        if not valid[i]:
            continue
        im, ip = (i - 1) % N_PHI, i + 1
        # interior local minimum of r
        if valid[im] and valid[ip] and R[i] <= R[im] and R[i] <= R[ip]:
            lo, hi = phis[im] if i else phis[0] - phis[1], phis[ip]
            res = minimize_scalar(r_of, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            ph = float(res.x)
            rr = r_of(ph)
            if np.isfinite(rr) and _slack(F, family, others[1], ph, rr) <= tol:
                cands.append((rr, ph))
            elif G[i] <= tol:
                cands.append((float(R[i]), float(phis[i])))
        # enclosure boundary of the remaining vertex
        if valid[ip] and G[i] * G[ip] < 0:
            g = lambda ph: float(_slack(F, family, others[1], ph, r_of(ph)))  # noqa: E731
            ph = brentq(g, phis[i], phis[ip], xtol=1e-15, rtol=1e-15)
            cands.append((r_of(ph), ph))
    cands = [c for c in cands if np.isfinite(c[0]) and c[0] > 0]
    return min(cands) if cands else None


def case_ii_candidates(s: SimplexN, pair, third) -> list:
    """Enclosing cylinders through ``p_i, p_j, p_k`` from each restricted family.

    Returns ``(Cylinder, witness)`` tuples, best first. Raises ``EmptyFamily``
    when no family admits a feasible axis.
    """
    if s.dim != 3:
        raise DimensionMismatch("restricted-axis families are defined for tetrahedra")
    i, j = pair
    k = third
    if len({i, j, k}) != 3:
        raise ValueError("pair and third vertex must be distinct")
    V = np.asarray(s.vertices)
    rest = [V[m] for m in range(4) if m not in (i, j, k)]
    F = _PairFrame.build(V[i], V[j])
    scale = s.max_edge_length()
    out = []
    for family in WITNESSES[1:]:
        best = None
        for branch in range(2 if family == "pair_cone_b" else 1):
            found = _branch_minimum(F, family, ((k, V[k]), rest), branch, scale)
            if found is not None and (best is None or found[0] < best[0]):
                best = found
        if best is None:
            continue
        r, phi = best
        p, d = _family_lines(F, family, phi, r)
        dist = _dist(V, p, d)
        contact = np.abs(dist[[i, j, k]] - r).max()
        if contact > CONTACT_TOL * max(1.0, scale) or dist.max() > r * (1 + 1e-9) + 1e-12 * scale:
            continue
        out.append((Cylinder(AxisLine.through(p, d), r), family))
    if not out:
        raise EmptyFamily(f"no restricted-axis candidate for pair {pair} and vertex {third}")
    out.sort(key=lambda t: t[0].radius)
    return out


# -- full pipeline ------------------------------------------------------------------------

@dataclass(frozen=True)
class EnclosingResult:
    cylinder: Cylinder
    witness: str
    support: tuple
    oracle_gap: float | None
    detail: dict

    @property
    def radius(self) -> float:
        return self.cylinder.radius


# only the circumscribing global minimum is needed here, so a lighter budget suffices
ENCLOSING_RESTARTS = 600
ENCLOSING_NEWTON_ITERS = 25


def smallest_enclosing_cylinder(s: SimplexN, n: int = 3, cfg: SolverConfig | None = None,
                                oracle_samples: int | None = None, rng_seed: int = 42) -> EnclosingResult:
    if n != 3 or s.dim != 3:
        raise DimensionMismatch("the enclosing reduction is implemented for tetrahedra in 3-space")
    cfg = cfg or SolverConfig(restarts=ENCLOSING_RESTARTS, newton_max_iter=ENCLOSING_NEWTON_ITERS, rng_seed=rng_seed)
    V = np.asarray(s.vertices)
    scale = s.max_edge_length()
    cands = []
    points = critical_points(s, cfg)
    if points:
        cyl = global_min(points)
        cands.append((cyl.radius, 0, (), cyl, "circumscribing_4pts"))
    for (i, j) in combinations(range(4), 2):
        for k in range(4):
            if k in (i, j):
                continue
            try:
                found = case_ii_candidates(s, (i, j), k)
            except EmptyFamily:
                continue
            for cyl, fam in found:
                cands.append((cyl.radius, WITNESSES.index(fam), (i, j, k), cyl, fam))
    if not cands:
        raise EmptyFamily("no enclosing candidate found")
    # smallest radius; ties broken toward the circumscribing witness, then the lexicographic triple
    tie = 1e-12 * scale
    rmin = min(c[0] for c in cands)
    r, _, triple, cyl, witness = min((c for c in cands if c[0] <= rmin + tie), key=lambda c: (c[1], c[2]))
    dist = cyl.distances(V)
    support = tuple(int(m) for m in np.flatnonzero(np.abs(dist - r) <= CONTACT_TOL * max(1.0, scale)))
    gap = None
    detail = {"n_candidates": len(cands), "triple": triple,
              "circumscribing_min": cands[0][0] if cands[0][4] == "circumscribing_4pts" else None}
    if oracle_samples:
        r_or, v_or = oracle_min_enclosing(V, n_samples=oracle_samples, rng_seed=rng_seed)
        gap = abs(r - r_or)
        detail["oracle_radius"] = r_or
        detail["oracle_direction"] = v_or.tolist()
    return EnclosingResult(cyl, witness, support, gap, detail)
