"""Multi-start damped Newton on the Lagrange system of the circumscribing program.

Unknowns are ``(v, lam1, lam2)``; equations are
``grad f - lam1 grad g1 - lam2 grad g2 = 0``, ``g1 = 0``, ``g2 = 0``.
All starts run as one batch so the whole solve is a handful of stacked
linear-algebra calls.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyInput, NoCriticalPointFound
from .formulation import CircumFormulation, build
from .geometry import AxisLine, Cylinder, SimplexN, canonical_direction, recover_axis

log = logging.getLogger(__name__)

KINDS = ("local_min", "local_max", "saddle", "unclassified")
ACCEPT_TOL = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    restarts: int | None = None  # None -> 200 * 3**min(n, 5)
    rng_seed: int = 42
    newton_max_iter: int = 50
    newton_tol: float = 1e-12
    dedup_angle_tol: float = 1e-7
    chunk_size: int = 4096
    workers: int = 1

    def __post_init__(self):
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.newton_tol <= 0 or self.dedup_angle_tol <= 0:
            raise ValueError("tolerances must be positive")

    def n_restarts(self, n: int) -> int:
        return self.restarts if self.restarts is not None else 200 * 3 ** min(n, 5)


@dataclass(frozen=True)
class CriticalPoint:
    v: np.ndarray
    u: np.ndarray
    r: float
    lambda1: float
    lambda2: float
    residual: float
    kind: str = "unclassified"
    basin_count: int = 1

    @property
    def cylinder(self) -> Cylinder:
        return Cylinder(AxisLine(self.u, self.v), self.r)


def _newton_step(J: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Batched ``-J^{-1} R``; rows that are (near) singular get the minimum-norm step.

    lam1 is undetermined wherever grad g1 vanishes, so singular Jacobians do occur.
    """
    try:
        step = -np.linalg.solve(J, R[..., None])[..., 0]
        bad = ~np.isfinite(step).all(1) | (np.abs(step).max(1) > 1e6)
    except np.linalg.LinAlgError:
        step = np.empty_like(R)
        bad = np.ones(len(R), dtype=bool)
    if bad.any():
        step[bad] = -np.einsum("kij,kj->ki", np.linalg.pinv(J[bad], rcond=1e-13), R[bad])
    return step


def _newton_batch(F: CircumFormulation, X: np.ndarray, cfg: SolverConfig) -> tuple[np.ndarray, np.ndarray]:
    """Damped Newton on a batch of states ``X = [v, lam1, lam2]``; returns states and residual norms."""
    n = F.dim

    def residual(X):
        return F.lagrange_residual(X[:, :n], X[:, n], X[:, n + 1])

    R = residual(X)
    rn = np.abs(R).max(1)
    active = rn > cfg.newton_tol
    eye = np.eye(n)
    for _ in range(cfg.newton_max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa = X[idx]
        V, l1, l2 = Xa[:, :n], Xa[:, n], Xa[:, n + 1]
        _, gg1, _ = F.gradients(V)
        H_f, H_g1 = F.hessians(V)
        J = np.zeros((idx.size, n + 2, n + 2))
        J[:, :n, :n] = H_f - l1[:, None, None] * H_g1 - 2 * l2[:, None, None] * eye
        J[:, :n, n] = -gg1
        J[:, :n, n + 1] = -2 * V
        J[:, n, :n] = gg1
        J[:, n + 1, :n] = 2 * V
        step = _newton_step(J, R[idx])
        old = np.linalg.norm(R[idx], axis=1)
        trial = Xa + step
        Rt = residual(trial)
        bad = np.linalg.norm(Rt, axis=1) > old
        for lo, hi in ((1, 3), (3, 9), (9, 41)):
            # halvings 2^-lo .. 2^-(hi-1) of the still-rejected steps, one evaluation per block
            b = np.flatnonzero(bad)
            if b.size == 0:
                break
            alphas = 0.5 ** np.arange(lo, hi)
            cand = Xa[b, None, :] + alphas[None, :, None] * step[b, None, :]
            Rc = residual(cand.reshape(-1, n + 2)).reshape(b.size, alphas.size, n + 2)
            improves = np.linalg.norm(Rc, axis=2) <= old[b, None]
            first = np.argmax(improves, axis=1)
            found = improves[np.arange(b.size), first]
            fb = b[found]
            trial[fb] = cand[found, first[found]]
            Rt[fb] = Rc[found, first[found]]
            bad[fb] = False
        # a step that never decreases the residual stalls the start
        stalled = bad
        X[idx] = np.where(stalled[:, None], Xa, trial)
        R[idx] = np.where(stalled[:, None], R[idx], Rt)
        rn[idx] = np.abs(R[idx]).max(1)
        active[idx] = (rn[idx] > cfg.newton_tol) & ~stalled
    return X, rn


def _singular_polish(F: CircumFormulation, V: np.ndarray, iters: int = 30):
    """Gauss-Newton on ``grad g1 = 0, g2 = 0, grad f = 2 lam2 v`` for points where
    the cubic cone ``g1 = 0`` is singular.

    The square Lagrange system is rank deficient there (``lam1`` is free) and
    Newton only reaches ~sqrt(eps) in ``v``; this overdetermined system has a
    full-rank Jacobian at a nodal point.
    """
    n = F.dim
    V = V.copy()
    gf, _, _ = F.gradients(V)
    lam2 = 0.5 * (gf * V).sum(1) / (V * V).sum(1)
    eye = np.eye(n)

    def res(V, lam2):
        gf, gg1, _ = F.gradients(V)
        return np.concatenate([gg1, ((V * V).sum(1) - 1)[:, None], gf - 2 * lam2[:, None] * V], axis=1)

    R = res(V, lam2)
    for _ in range(iters):
        H_f, H_g1 = F.hessians(V)
        J = np.zeros((len(V), 2 * n + 1, n + 1))
        J[:, :n, :n] = H_g1
        J[:, n, :n] = 2 * V
        J[:, n + 1 :, :n] = H_f - 2 * lam2[:, None, None] * eye
        J[:, n + 1 :, n] = -2 * V
        step = -np.einsum("kij,kj->ki", np.linalg.pinv(J, rcond=1e-13), R)
        Vt, lt = V + step[:, :n], lam2 + step[:, n]
        Rt = res(Vt, lt)
        better = np.linalg.norm(Rt, axis=1) < np.linalg.norm(R, axis=1)
        if not better.any():
            break
        V[better], lam2[better], R[better] = Vt[better], lt[better], Rt[better]
    return V, lam2, np.abs(R).max(1)


def _seed_directions(s: SimplexN, cfg: SolverConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.rng_seed)
    G = rng.standard_normal((cfg.n_restarts(s.dim), s.dim))
    G /= np.linalg.norm(G, axis=1, keepdims=True)
    return np.vstack([s.edge_directions(), G])


def _run_chunks(F, seeds, cfg):
    l1, l2 = F.fit_multipliers(seeds)
    X0 = np.concatenate([seeds, l1[:, None], l2[:, None]], axis=1)
    chunks = [X0[i : i + cfg.chunk_size].copy() for i in range(0, len(X0), cfg.chunk_size)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            out = list(pool.map(lambda c: _newton_batch(F, c, cfg), chunks))
    else:
        out = [_newton_batch(F, c, cfg) for c in chunks]
    return np.vstack([o[0] for o in out]), np.concatenate([o[1] for o in out])


def _cluster(V: np.ndarray, tol: float) -> np.ndarray:
    """Greedy sign-invariant clustering of unit vectors; returns a label per row."""
    labels = np.full(len(V), -1)
    cos_tol = np.cos(tol)
    k = 0
    for i in range(len(V)):
        if labels[i] >= 0:
            continue
        members = (labels < 0) & (np.abs(V @ V[i]) >= cos_tol)
        labels[members] = k
        k += 1
    return labels


def solve_all(F: CircumFormulation, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    """All real critical directions found from edge seeds plus random unit starts.

    The system is solved on a copy of the simplex scaled to unit size; the
    returned radii, moment points and multipliers are in original units.
    """
    cfg = cfg or SolverConfig()
    s = F.simplex
    L = F.scale
    Fs = build(SimplexN(np.asarray(s.vertices) / L))
    n = s.dim
    seeds = _seed_directions(s, cfg)
    X, rn = _run_chunks(Fs, seeds, cfg)
    ok = rn < ACCEPT_TOL
    if not ok.any():
        raise NoCriticalPointFound("no start converged, not even from the edge directions")
    X = X[ok]
    V = X[:, :n] / np.linalg.norm(X[:, :n], axis=1, keepdims=True)
    lam1, lam2 = X[:, n].copy(), X[:, n + 1].copy()

    _, gg1, _ = Fs.gradients(V)
    sing = np.flatnonzero(np.linalg.norm(gg1, axis=1) < 1e-5)
    if sing.size:
        Vs, l2s, rs = _singular_polish(Fs, V[sing])
        good = rs < ACCEPT_TOL
        idx = sing[good]
        V[idx] = Vs[good] / np.linalg.norm(Vs[good], axis=1, keepdims=True)
        lam1[idx] = 0.0
        lam2[idx] = l2s[good]
    res = np.abs(Fs.lagrange_residual(V, lam1, lam2)).max(1)

    labels = _cluster(V, cfg.dedup_angle_tol)
    points = []
    for k in range(labels.max() + 1):
        members = np.flatnonzero(labels == k)
        best = members[np.argmin(res[members])]
        v = canonical_direction(V[best])
        p = _to_point(s, v, lam1[best], lam2[best], res[best], L)
        p = replace(p, basin_count=int(members.size))
        if p.residual < ACCEPT_TOL and _verify(s, p):
            points.append(replace(p, kind=classify(F, p)))
        else:
            log.debug("dropping unverifiable critical point v=%s", v)
    if not points:
        raise NoCriticalPointFound("converged starts failed geometric verification")
    # clusters split by sub-tolerance noise are merged here
    return dedup(points, cfg.dedup_angle_tol)


def _to_point(s: SimplexN, v, l1, l2, res, L) -> CriticalPoint:
    rec = recover_axis(v, s)
    line = rec.line(v)
    # v was canonicalized before; AxisLine.through keeps it
    return CriticalPoint(
        v=np.array(line.v), u=np.array(line.u), r=rec.r,
        lambda1=float(l1) * L**2, lambda2=float(l2) * L**4, residual=float(res),
    )


def _verify(s: SimplexN, p: CriticalPoint) -> bool:
    rec = recover_axis(p.v, s)
    if abs(rec.g1_residual) > ACCEPT_TOL * max(1.0, rec.r):
        return False
    d = Cylinder(AxisLine(p.u, p.v), p.r).distances(s.vertices)
    return bool(np.max(np.abs(d - p.r)) <= 1e-9 * (1.0 + p.r))


def _sort_key(p: CriticalPoint):
    return (round(p.r, 12), tuple(np.round(p.v, 12)))


def _sorted(points):
    return sorted(points, key=_sort_key)


def dedup(points, tol: float = 1e-7) -> list[CriticalPoint]:
    """Merge points whose directions agree up to sign within ``tol`` radians."""
    groups: list[list[CriticalPoint]] = []
    for p in _sorted(points):
        cv = canonical_direction(p.v)
        for g in groups:
            c = abs(float(canonical_direction(g[0].v) @ cv))
            if np.arccos(min(1.0, c)) < tol:
                g.append(p)
                break
        else:
            groups.append([p])
    out = []
    for g in groups:
        best = min(g, key=lambda q: (q.residual, _sort_key(q)))
        out.append(replace(best, v=canonical_direction(best.v), basin_count=sum(q.basin_count for q in g)))
    return _sorted(out)


def _orth_complement(A: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of span(columns of A)."""
    Q, _ = np.linalg.qr(np.column_stack([A, np.eye(n)]))
    return Q[:, A.shape[1]:n]


def classify(F: CircumFormulation, point: CriticalPoint, tol: float = 1e-7) -> str:
    """Second-order test on the constraint manifold ``{g1 = 0, g2 = 0}``.

    Works on the unit-size copy of the simplex so ``tol`` is scale free. Where
    ``grad g1`` vanishes the feasible set has crossing branches; for n = 3
    each branch direction is tested separately, otherwise only definite
    cases are decided.
    """
    L = F.scale
    Fs = build(SimplexN(np.asarray(F.simplex.vertices) / L))
    n = F.dim
    v = point.v
    l1, l2 = point.lambda1 / L**2, point.lambda2 / L**4
    _, gg1, _ = Fs.gradients(v)
    H_f, H_g1 = Fs.hessians(v)
    if np.linalg.norm(gg1) > 1e-6:
        T = _orth_complement(np.column_stack([gg1 / np.linalg.norm(gg1), v]), n)
        if T.shape[1] == 0:
            # isolated feasible point: no feasible neighbours at all
            return "local_min"
        ev = np.linalg.eigvalsh(T.T @ (H_f - l1 * H_g1 - 2 * l2 * np.eye(n)) @ T)
        return _sign_kind(ev, tol)
    T = _orth_complement(v[:, None], n)
    Q = T.T @ H_g1 @ T
    Lq = T.T @ (H_f - 2 * l2 * np.eye(n)) @ T
    if n == 3:
        branches = _null_directions_2x2(Q, tol)
        if branches is None:
            return "local_min"
        vals = np.array([d @ Lq @ d for d in branches])
        return _sign_kind(vals, tol)
    kind = _sign_kind(np.linalg.eigvalsh(Lq), tol)
    return kind if kind in ("local_min", "local_max") else "unclassified"


def _null_directions_2x2(Q, tol):
    """Unit vectors d with d^T Q d = 0 for an indefinite symmetric 2x2 Q (None if definite)."""
    w, U = np.linalg.eigh(Q)
    if w[0] > tol or w[1] < -tol:
        return None
    if abs(w[0]) <= tol and abs(w[1]) <= tol:
        return [U[:, 0], U[:, 1]]
    a, b = -w[0], w[1]
    # a x^2 = b y^2 in the eigenbasis
    x, y = np.sqrt(b / (a + b)), np.sqrt(a / (a + b))
    return [x * U[:, 0] + y * U[:, 1], x * U[:, 0] - y * U[:, 1]]


def _sign_kind(ev, tol) -> str:
    ev = np.asarray(ev)
    if np.any(np.abs(ev) <= tol):
        return "unclassified"
    if np.all(ev > 0):
        return "local_min"
    if np.all(ev < 0):
        return "local_max"
    return "saddle"


def global_min(points) -> Cylinder:
    pts = list(points)
    if not pts:
        raise EmptyInput("no critical points to choose from")
    best = min(pts, key=lambda p: (p.r, tuple(canonical_direction(p.v))))
    return best.cylinder


def critical_points(s: SimplexN, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    return solve_all(build(s), cfg)
