"""Numpy implementation of the batched projection-radius kernel."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

ENCLOSE_RTOL = 1e-10


@lru_cache(maxsize=64)
def support_subsets(m: int, n: int) -> np.ndarray:
    """Index subsets that can support a smallest ball in the (n-1)-dimensional projection.

    Returned as an (S, n) int array padded with -1.
    """
    rows = []
    for size in range(2, min(m, n) + 1):
        for c in combinations(range(m), size):
            rows.append(list(c) + [-1] * (n - size))
    out = np.array(rows, dtype=np.intc)
    out.setflags(write=False)
    return out


def batch_projection_radii(points, directions) -> np.ndarray:
    """Smallest enclosing radius of ``points`` projected along each unit row of ``directions``.

    For every candidate support subset the circumball within its affine hull is
    formed; the answer is the smallest such ball that holds all projected points.
    """
    X = np.ascontiguousarray(points, dtype=float)
    V = np.ascontiguousarray(directions, dtype=float)
    m, n = X.shape
    scale2 = float(((X - X.mean(0)) ** 2).sum(1).max()) + 1e-300
    Q = X[None, :, :] - (V @ X.T)[:, :, None] * V[:, None, :]  # (K, m, n)
    best = np.full(len(V), np.inf)
    for row in support_subsets(m, n):
        S = row[row >= 0]
        q0 = Q[:, S[0]]
        A = Q[:, S[1:]] - q0[:, None, :]
        G = A @ np.swapaxes(A, 1, 2)
        rhs = 0.5 * np.einsum("kii->ki", G)
        det = np.linalg.det(G)
        good = np.abs(det) > 1e-12 * scale2 ** (len(S) - 1)
        Gs = np.where(good[:, None, None], G, np.eye(len(S) - 1))
        lam = np.linalg.solve(Gs, rhs[..., None])[..., 0]
        c = q0 + np.einsum("ki,kij->kj", lam, A)
        r2 = ((c - q0) ** 2).sum(1)
        d2 = ((Q - c[:, None, :]) ** 2).sum(2).max(1)
        ok = good & (d2 <= r2 * (1 + ENCLOSE_RTOL) + 1e-14 * scale2)
        best = np.where(ok & (r2 < best), r2, best)
    return np.sqrt(best)
