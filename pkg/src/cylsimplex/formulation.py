"""Polynomial formulation of the circumscribing-cylinder program.

For a simplex with its last vertex moved to the origin (rows ``P_i`` of ``M``)
and a direction ``v``::

    b_i(v) = v^2 P_i^2 - (v . P_i)^2
    f(v)   = | 1/2 M^{-1} b(v) |^2          (degree 4, equals r^2 on unit v)
    g1(v)  = 1/2 v . M^{-1} b(v)             (degree 3, equals v^2 (u . v))
    g2(v)  = v^2 - 1

All evaluators accept a single vector of shape ``(n,)`` or a batch ``(k, n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import DimensionMismatch
from .geometry import SimplexN, recover_axis  # noqa: F401  (re-exported for callers)


@dataclass(frozen=True)
class TCubicCoefficients:
    """Coefficients of ``g1`` in the coordinates ``v = sum_i t_i P_i``."""

    alpha: dict
    beta: dict

    def evaluate(self, t) -> float:
        t = np.asarray(t, dtype=float)
        total = 0.0
        for (i, j), a in self.alpha.items():
            total += 0.5 * a * t[i] ** 2 * t[j]
        for (i, j, k), b in self.beta.items():
            total += b * t[i] * t[j] * t[k]
        return total


class CircumFormulation:
    def __init__(self, s: SimplexN):
        self.simplex = s
        self.dim = s.dim
        self.P = np.array(s.translated)
        self.Minv = np.linalg.inv(self.P)
        self.pp = (self.P**2).sum(1)
        self.origin = np.array(s.origin)
        self.scale = float(np.sqrt(self.pp.max()))

    # -- values -----------------------------------------------------------
    def _parts(self, V):
        pv = V @ self.P.T
        vv = (V * V).sum(-1)
        b = vv[..., None] * self.pp - pv**2
        c = b @ self.Minv.T
        t = V @ self.Minv
        return pv, vv, b, c, t

    def b(self, v):
        return self._parts(np.asarray(v, dtype=float))[2]

    def u(self, v):
        """Moment point relative to the last vertex (unit-direction convention)."""
        return 0.5 * self._parts(np.asarray(v, dtype=float))[3]

    def f(self, v):
        c = self._parts(np.asarray(v, dtype=float))[3]
        return 0.25 * (c * c).sum(-1)

    def g1(self, v):
        _, _, b, _, t = self._parts(np.asarray(v, dtype=float))
        return 0.5 * (t * b).sum(-1)

    @staticmethod
    def g2(v):
        v = np.asarray(v, dtype=float)
        return (v * v).sum(-1) - 1.0

    # -- derivatives ------------------------------------------------------
    def _jac_b(self, V, pv):
        # d b_i / d v = 2 P_i^2 v - 2 (v.P_i) P_i
        return 2 * self.pp[:, None] * V[..., None, :] - 2 * pv[..., :, None] * self.P

    def gradients(self, v):
        V = np.asarray(v, dtype=float)
        pv, vv, b, c, t = self._parts(V)
        Jb = self._jac_b(V, pv)
        Jc = self.Minv @ Jb
        grad_f = 0.5 * np.einsum("...ij,...i->...j", Jc, c)
        grad_g1 = 0.5 * (c + np.einsum("...ij,...i->...j", Jb, t))
        return grad_f, grad_g1, 2 * V

    def _weighted_hb(self, w):
        # sum_i w_i (2 P_i^2 I - 2 P_i P_i^T)
        n = self.dim
        eye = np.eye(n)
        diag = 2 * (w * self.pp).sum(-1)
        return diag[..., None, None] * eye - 2 * np.einsum("...i,ij,ik->...jk", w, self.P, self.P)

    def hessians(self, v):
        """Hessians of f and g1 (the Hessian of g2 is ``2 I``)."""
        V = np.asarray(v, dtype=float)
        pv, vv, b, c, t = self._parts(V)
        Jb = self._jac_b(V, pv)
        Jc = self.Minv @ Jb
        s = c @ self.Minv
        JcT = np.swapaxes(Jc, -1, -2)
        H_f = 0.5 * (JcT @ Jc + self._weighted_hb(s))
        H_g1 = 0.5 * (self._weighted_hb(t) + Jc + JcT)
        return H_f, H_g1

    def lagrange_residual(self, v, lam1, lam2):
        """Residual vector of the square system (stationarity, g1, g2)."""
        gf, gg1, gg2 = self.gradients(v)
        stat = gf - np.asarray(lam1)[..., None] * gg1 - np.asarray(lam2)[..., None] * gg2
        return np.concatenate([stat, self.g1(v)[..., None], self.g2(v)[..., None]], axis=-1)

    def fit_multipliers(self, v):
        """Least-squares ``(lam1, lam2)`` with ``grad f ~ lam1 grad g1 + lam2 grad g2``."""
        gf, gg1, gg2 = self.gradients(v)
        A = np.stack([gg1, gg2], axis=-1)
        AtA = np.swapaxes(A, -1, -2) @ A
        Atb = np.einsum("...ji,...j->...i", A, gf)
        # small ridge keeps the fit finite where grad g1 vanishes
        ridge = 1e-14 * (np.trace(AtA, axis1=-2, axis2=-1) + 1.0)
        lam = np.linalg.solve(AtA + ridge[..., None, None] * np.eye(2), Atb[..., None])[..., 0]
        return lam[..., 0], lam[..., 1]


def build(s: SimplexN) -> CircumFormulation:
    return CircumFormulation(s)


def gradients(F: CircumFormulation, v):
    return F.gradients(v)


def _gradient_matrix(F: CircumFormulation, v) -> np.ndarray:
    gf, gg1, gg2 = F.gradients(v)
    return np.stack([-gf, gg1, gg2], axis=-1)


def optimality_determinant_e3(F: CircumFormulation, v) -> float:
    if F.dim != 3:
        raise DimensionMismatch("the optimality determinant is the n = 3 case; use optimality_minors_ndim")
    return float(np.linalg.det(_gradient_matrix(F, np.asarray(v, dtype=float))))


def optimality_minors_ndim(F: CircumFormulation, v) -> list[float]:
    if F.dim < 3:
        raise DimensionMismatch("3x3 minors need n >= 3")
    G = _gradient_matrix(F, np.asarray(v, dtype=float))
    return [float(np.linalg.det(G[list(rows)])) for rows in combinations(range(F.dim), 3)]


def t_cubic(s: SimplexN) -> TCubicCoefficients:
    P = s.translated
    G = P @ P.T
    n = s.dim
    alpha = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                alpha[(i, j)] = G[i, i] * G[j, j] - G[i, j] ** 2
    beta = {}
    for i, j, k in combinations(range(n), 3):
        beta[(i, j, k)] = (
            (G[i, j] * G[k, k] - G[i, k] * G[k, j])
            + (G[i, k] * G[j, j] - G[i, j] * G[j, k])
            + (G[j, k] * G[i, i] - G[j, i] * G[i, k])
        )
    return TCubicCoefficients(alpha, beta)


@lru_cache(maxsize=None)
def stirling2(m: int, k: int) -> int:
    """Stirling number of the second kind via S(m,k) = k S(m-1,k) + S(m-1,k-1)."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    if m == k:
        return 1
    if k == 0:
        return 0
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)


def bezout_bounds(n: int) -> dict:
    if n < 2:
        raise ValueError("n must be >= 2")
    return {
        "e3_system": 3 * 6 * 2 if n == 3 else None,
        "general": 2 * 3 ** (n + 1),
        "stirling": 6 * stirling2(n + 1, 3),
    }


def edge_count(n: int) -> int:
    return comb(n + 1, 2)
