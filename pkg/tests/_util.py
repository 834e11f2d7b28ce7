"""Shared helpers for the test suite."""
import numpy as np

from cylsimplex.geometry import SimplexN


def random_simplex(n: int, rng, min_cond: float = 0.05) -> SimplexN:
    """Gaussian vertices, redrawn until the edge matrix is reasonably conditioned."""
    while True:
        X = rng.standard_normal((n + 1, n))
        P = X[:-1] - X[-1]
        sv = np.linalg.svd(P, compute_uv=False)
        if sv[-1] / sv[0] > min_cond:
            return SimplexN(X)


def random_rotation(n: int, rng) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_unit(n: int, rng, size=None) -> np.ndarray:
    shape = (n,) if size is None else (size, n)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)
