"""Solution census of the Lagrange system for minimizing sum u_i^4 on the sphere.

The system is::

    4 u_i^3 + 2 lam1 u_i + lam2 = 0      (i = 1..n+1)
    sum u_i^2 = 1,   sum u_i = 0

Every component is a root of the same depressed cubic ``4t^3 + 2 lam1 t + lam2``,
so a solution takes at most three values ``a, b, c`` with ``a + b + c = 0``,
``lam1 = 2 e2(a, b, c)`` and ``lam2 = -4 e3(a, b, c)``. For each block shape the
value relations are linear, and only an overall scale is fixed by the sphere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial, sqrt

import numpy as np

from . import algebra
from .errors import DimensionTooLarge

MAX_DIM = 9
RESIDUAL_TOL = 1e-10
VALUE_TOL = 1e-9


@dataclass(frozen=True)
class WeissbachSolution:
    u: np.ndarray
    lambda1: float
    lambda2: float
    residual: float
    family: str  # "lambda2_zero" or "lambda2_nonzero"


def system_residual(u, lam1, lam2) -> float:
    u = np.asarray(u)
    r = np.concatenate([4 * u**3 + 2 * lam1 * u + lam2, [u @ u - 1, u.sum()]])
    return float(np.abs(r).max())


def multipliers(values) -> tuple:
    """(lam1, lam2) from the distinct values, completing them to the three cubic roots."""
    vals = list(values)
    if len(vals) == 1:
        raise ValueError("a single value cannot satisfy sum u = 0 on the sphere")
    if len(vals) == 2:
        vals.append(-vals[0] - vals[1])
    a, b, c = vals
    e2 = a * b + b * c + c * a
    e3 = a * b * c
    return 2 * e2, -4 * e3


@dataclass
class WeissbachOrbit:
    values: tuple
    multiplicities: tuple
    lambda1: float
    lambda2: float
    size: int

    @property
    def family(self) -> str:
        return "lambda2_zero" if abs(self.lambda2) < VALUE_TOL else "lambda2_nonzero"

    def representative(self) -> np.ndarray:
        return np.concatenate([np.full(c, v) for v, c in zip(self.values, self.multiplicities)])

    def expand(self) -> list:
        """Every distinct placement of the values."""
        n_total = sum(self.multiplicities)
        out = []

        def place(block, free, u):
            if block == len(self.values):
                out.append(u.copy())
                return
            for idx in combinations(free, self.multiplicities[block]):
                u[list(idx)] = self.values[block]
                rest = [i for i in free if i not in idx]
                place(block + 1, rest, u)

        place(0, list(range(n_total)), np.zeros(n_total))
        return out


@dataclass
class WeissbachCensus:
    n: int
    orbits: list
    positive_dimensional_shapes: list = field(default_factory=list)

    @property
    def solutions(self) -> list:
        out = []
        for o in self.orbits:
            for u in o.expand():
                out.append(WeissbachSolution(u, o.lambda1, o.lambda2, system_residual(u, o.lambda1, o.lambda2), o.family))
        return out

    @property
    def total(self) -> int:
        return sum(o.size for o in self.orbits)

    def family_counts(self) -> dict:
        out = {"lambda2_zero": 0, "lambda2_nonzero": 0}
        for o in self.orbits:
            out[o.family] += o.size
        return out

    @property
    def all_real(self) -> bool:
        return all(np.isrealobj(np.asarray(o.values)) for o in self.orbits)


def _merge(values, mults):
    vals, ms = [], []
    for v, c in zip(values, mults):
        for i, w in enumerate(vals):
            if abs(v - w) < VALUE_TOL:
                ms[i] += c
                break
        else:
            vals.append(float(v))
            ms.append(c)
    order = np.argsort(vals)
    return tuple(vals[i] for i in order), tuple(ms[i] for i in order)


def _scale_roots(direction, mults) -> list:
    # sum_i m_i (s d_i)^2 = 1
    q = float(sum(c * d * d for c, d in zip(mults, direction)))
    return [float(np.real(s)) for s in algebra.roots([-1.0, 0.0, q]) if abs(np.imag(s)) < VALUE_TOL]


def _candidates(n: int):
    """Value vectors (unmerged) for every block shape, plus the positive-dimensional shapes."""
    N = n + 1
    cands, flat = [], []
    for k in range(1, N):
        l = N - k
        # k a + l b = 0
        for s in _scale_roots((l, -k), (k, l)):
            cands.append(((s * l, -s * k), (k, l)))
    for k in range(1, N - 1):
        for l in range(1, N - k):
            m = N - k - l
            if k == l == m:
                flat.append((k, l, m))
                # the lambda2 = 0 points of the circle of solutions: one value is zero
                for s in _scale_roots((1, -1, 0), (k, l, m)):
                    cands.append(((s, -s, 0.0), (k, l, m)))
                continue
            # a + b + c = 0 and k a + l b + m c = 0
            d = (l - m, m - k, k - l)
            for s in _scale_roots(d, (k, l, m)):
                cands.append((tuple(s * x for x in d), (k, l, m)))
    return cands, flat


def enumerate_solutions(n: int) -> WeissbachCensus:
    if not 2 <= n <= MAX_DIM:
        raise DimensionTooLarge(f"supported dimensions are 2..{MAX_DIM}, got {n}")
    N = n + 1
    cands, flat = _candidates(n)
    seen, orbits = set(), []
    for values, mults in cands:
        vals, ms = _merge(values, mults)
        if len(vals) < 2:
            continue
        lam1, lam2 = multipliers(vals)
        u = np.concatenate([np.full(c, v) for v, c in zip(vals, ms)])
        if system_residual(u, lam1, lam2) > RESIDUAL_TOL:
            continue
        key = tuple((round(v, 9), c) for v, c in zip(vals, ms))
        if key in seen:
            continue
        seen.add(key)
        size = factorial(N)
        for c in ms:
            size //= factorial(c)
        orbits.append(WeissbachOrbit(vals, ms, float(lam1), float(lam2), size))
    orbits.sort(key=lambda o: (o.family, o.multiplicities, o.values))
    return WeissbachCensus(n, orbits, flat)


def lambda2_zero_census(n: int) -> int:
    """Closed-form count: choose 2h indices, then which h of them carry +lambda."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return sum(comb(n + 1, 2 * h) * comb(2 * h, h) for h in range(1, (n + 1) // 2 + 1))


def printed_tuples(n: int) -> list:
    """Explicit solutions with their multipliers, as listed for n = 3 and n = 4."""
    if n == 3:
        s = 1 / (2 * sqrt(3))
        base = [
            (s * np.array([1, -3, 1, 1.0]), -7 / 6, 1 / sqrt(3)),
            (s * np.array([-1, 3, -1, -1.0]), -7 / 6, -1 / sqrt(3)),
        ]
    elif n == 4:
        s = 1 / sqrt(30)
        t = 1 / (2 * sqrt(5))
        base = [
            (s * np.array([-2, -2, -2, 3, 3.0]), -7 / 15, -2 / 75 * sqrt(30)),
            (s * np.array([2, 2, 2, -3, -3.0]), -7 / 15, 2 / 75 * sqrt(30)),
            (t * np.array([1, -4, 1, 1, 1.0]), -13 / 10, 6 / 25 * sqrt(5)),
            (t * np.array([-1, 4, -1, -1, -1.0]), -13 / 10, -6 / 25 * sqrt(5)),
        ]
    else:
        raise ValueError("explicit tuples are listed for n = 3 and n = 4 only")
    return base


def verify_listed_tuples(n: int) -> dict:
    """Residuals of the listed tuples and all their permutations."""
    rows = []
    for u, l1, l2 in printed_tuples(n):
        vals, ms = _merge(u, [1] * len(u))
        orbit = WeissbachOrbit(vals, ms, l1, l2, 0)
        worst = max(system_residual(p, l1, l2) for p in orbit.expand())
        rows.append({"u": u.tolist(), "lambda1": l1, "lambda2": l2, "max_residual": worst, "placements": len(orbit.expand())})
    return {"n": n, "tuples": rows, "max_residual": max(r["max_residual"] for r in rows)}
