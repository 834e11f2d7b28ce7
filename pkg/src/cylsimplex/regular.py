"""Critical directions of the regular simplex via elementary symmetric functions.

The regular n-simplex is embedded as the standard basis vectors of E^{n+1}
inside the hyperplane ``x_1 + ... + x_{n+1} = 1``. A unit direction ``v`` in
that hyperplane has ``sigma1 = 0`` and ``sigma2 = -1/2``; it is circumscribing
iff ``sigma3 = 0``, and then ``r^2 = 9(n-1)/(8(n+1)) - sigma4``.

Every critical direction has at most three distinct component values, so the
search reduces to one small system per block shape ``(k, l, m)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial, sqrt

import numpy as np

from . import algebra
from .errors import DimensionTooLarge
from .formulation import stirling2
from .geometry import SimplexN

MAX_DIM = 9
ROOT_RES_TOL = 1e-9
VALUE_TOL = 1e-8
# values this close are merged: at a solution where two blocks coincide the
# system is singular and Newton only resolves the values to about sqrt(eps)
MERGE_TOL = 1e-6


@dataclass(frozen=True)
class RegularSimplex:
    n: int
    embedded: np.ndarray  # (n+1, n+1) identity rows
    basis: np.ndarray  # (n+1, n) orthonormal basis of {sum x = 0}
    chart: SimplexN

    def to_chart(self, v) -> np.ndarray:
        """Map an embedded direction (components summing to zero) into chart coordinates."""
        return np.asarray(v, dtype=complex if np.iscomplexobj(v) else float) @ self.basis

    def from_chart(self, d) -> np.ndarray:
        return self.basis @ np.asarray(d)


def helmert_basis(m: int) -> np.ndarray:
    """Orthonormal basis (columns) of the hyperplane orthogonal to (1, ..., 1) in R^m."""
    B = np.zeros((m, m - 1))
    for k in range(1, m):
        B[:k, k - 1] = 1.0
        B[k, k - 1] = -k
        B[:, k - 1] /= sqrt(k * (k + 1))
    return B


def regular_vertices(n: int) -> RegularSimplex:
    if n < 2:
        raise ValueError("n must be >= 2")
    E = np.eye(n + 1)
    B = helmert_basis(n + 1)
    c = np.full(n + 1, 1.0 / (n + 1))
    return RegularSimplex(n, E, B, SimplexN((E - c) @ B))


def sigma_eval(v) -> tuple:
    """(sigma1, sigma2, sigma3, sigma4) via Newton's identities from power sums."""
    v = np.asarray(v)
    p = [None] + [np.sum(v**k) for k in range(1, 5)]
    e = [1.0]
    for k in range(1, 5):
        e.append(sum((-1) ** (i - 1) * e[k - i] * p[i] for i in range(1, k + 1)) / k)
    if len(v) < 4:
        e[4] = 0.0 * e[4]
    if len(v) < 3:
        e[3] = 0.0 * e[3]
    return tuple(e[1:5])


def sigma_brute(v, k: int):
    """Elementary symmetric function by explicit subset products."""
    v = list(np.asarray(v))
    return sum(np.prod([v[i] for i in idx]) for idx in combinations(range(len(v)), k))


def radius_sq_from_sigma4(n: int, sigma4) -> float:
    return 9.0 * (n - 1) / (8.0 * (n + 1)) - sigma4


def project_to_feasible(v, iters: int = 60) -> np.ndarray:
    """Nearby real point with sigma1 = 0, sigma2 = -1/2 and sigma3 = 0.

    With sigma1 = 0 the last condition is a zero sum of cubes; Newton steps
    along its gradient projected onto the tangent space of the other two.
    """
    v = np.asarray(v, dtype=float)
    for _ in range(iters):
        v = v - v.mean()
        v = v / np.linalg.norm(v)
        p3 = float((v**3).sum())
        if abs(p3) < 1e-15:
            break
        g = 3 * v * v
        g -= g.mean()
        g -= (g @ v) * v
        v = v - p3 / (g @ g) * g
    v = v - v.mean()
    return v / np.linalg.norm(v)


# -- block systems -----------------------------------------------------------

def _block_power_sums(sizes, X):
    c = np.asarray(sizes, dtype=float)
    return [(c * X**k).sum() for k in (1, 2, 3)]


def _block_sigma3(sizes, X):
    """sigma3 of the vector holding ``sizes[i]`` copies of ``X[i]``."""
    p1, p2, p3 = _block_power_sums(sizes, np.asarray(X))
    return (p1**3 - 3 * p1 * p2 + 2 * p3) / 6


def _block_equations(sizes, X):
    """Residuals of sigma1 = 0, sigma2 = -1/2 (as sum of squares = 1), sigma3 = 0."""
    X = np.asarray(X)
    p1, p2, p3 = _block_power_sums(sizes, X)
    return np.array([p1, p2 - 1, (p1**3 - 3 * p1 * p2 + 2 * p3) / 6])


def _block_jacobian(sizes, X):
    X = np.asarray(X, dtype=complex)
    c = np.asarray(sizes, dtype=float)
    p1, p2, _ = _block_power_sums(sizes, X)
    d1, d2, d3 = c, 2 * c * X, 3 * c * X**2
    return np.array([d1, d2, (3 * p1**2 * d1 - 3 * (d1 * p2 + p1 * d2) + 2 * d3) / 6])


def _newton_polish(sizes, X, iters=60):
    """Gauss-Newton on the block equations; works for any number of blocks."""
    X = np.asarray(X, dtype=complex)
    for _ in range(iters):
        F = _block_equations(sizes, X)
        step = np.linalg.lstsq(_block_jacobian(sizes, X), -F, rcond=1e-14)[0]
        X = X + step
        if np.abs(step).max() < 1e-16:
            break
    return X, float(np.abs(_block_equations(sizes, X)).max())


def _solve_three_blocks(sizes):
    """Solutions (x, y, z) of the reduced system for three nonempty blocks.

    z is eliminated linearly; the quadratic and cubic in (x, y) are combined
    by a Sylvester resultant in x, leaving a polynomial of degree <= 6 in y.
    """
    k, l, m = sizes
    P = np.polynomial.polynomial

    def coeffs(y):
        zc = np.array([-l * y / m, -k / m])  # z as a polynomial in x
        xc = np.array([0, 1])
        quad = k * P.polypow(xc, 2)
        quad = P.polyadd(quad, [l * y * y - 1])
        quad = P.polyadd(quad, m * P.polypow(zc, 2))
        cub = np.zeros(1, dtype=complex)
        for a in range(4):
            for b in range(4 - a):
                c = 3 - a - b
                coef = comb(k, a) * comb(l, b) * comb(m, c)
                if coef:
                    term = coef * y**b * P.polymul(P.polypow(xc, a), P.polypow(zc, c))
                    cub = P.polyadd(cub, term)
        return np.pad(quad, (0, 3 - len(quad))).astype(complex), np.pad(cub, (0, 4 - len(cub))).astype(complex)

    res = algebra.resultant_in_x(lambda y: coeffs(y)[0], lambda y: coeffs(y)[1], max_degree=6)
    out = []
    if np.abs(res).max() < 1e-12:
        return out, True
    for y in algebra.roots(res):
        quad, cub = coeffs(y)
        xs = algebra.roots(quad)
        if xs.size == 0:
            continue
        x = xs[np.argmin(np.abs(P.polyval(xs, cub)))]
        z = -(k * x + l * y) / m
        X, r = _newton_polish(sizes, [x, y, z])
        if r < ROOT_RES_TOL:
            out.append(X)
    return out, False


def _solve_two_blocks(k, l):
    """Two values with multiplicities k, l: linear + quadratic, then the cubic is checked."""
    # y = -k x / l ; (k + k^2 / l) x^2 = 1
    out = []
    for x in algebra.roots([-1.0, 0.0, k + k * k / l]):
        y = -k * x / l
        X, res = _newton_polish((k, l), [x, y])
        if res < ROOT_RES_TOL:
            out.append(X)
    return out


# -- census --------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaPoint:
    """A feasible point of the symmetric program with its elementary symmetric values."""

    v: np.ndarray
    sigma1: complex
    sigma2: complex
    sigma3: complex
    sigma4: complex

    @classmethod
    def from_vector(cls, v) -> "SigmaPoint":
        return cls(np.asarray(v), *sigma_eval(v))

    def is_feasible(self, tol: float = 1e-10) -> bool:
        return abs(self.sigma1) < tol and abs(self.sigma2 + 0.5) < tol and abs(self.sigma3) < tol

    @property
    def radius_sq(self) -> float:
        n = len(self.v) - 1
        return float(np.real(radius_sq_from_sigma4(n, self.sigma4)))


@dataclass(frozen=True)
class PartitionSystem:
    """Block sizes ``(k, l, m)`` with ``k + l + m = n + 1`` and the reduced equations."""

    k: int
    l: int
    m: int

    def __post_init__(self):
        if min(self.k, self.l, self.m) < 1:
            raise ValueError("block sizes must be positive")

    @property
    def sizes(self) -> tuple:
        return (self.k, self.l, self.m)

    def residual(self, values) -> np.ndarray:
        return _block_equations(self.sizes, np.asarray(values, dtype=complex))

    def solve(self) -> list:
        return _solve_three_blocks(self.sizes)[0]


@dataclass
class CensusEntry:
    """One permutation orbit of solutions: distinct values and their multiplicities."""

    partition: tuple  # multiplicities of the distinct values, aligned with ``values``
    values: tuple  # complex values
    real: bool
    count: int  # number of distinct full-length vectors in the orbit
    sign_paired: bool = False  # the orbit is closed under v -> -v
    source_shape: tuple = field(default=())

    @property
    def n_blocks(self) -> int:
        return len(self.values)

    def vector(self) -> np.ndarray:
        parts = [np.full(c, v) for c, v in zip(self.partition, self.values)]
        vec = np.concatenate(parts)
        return vec.real if self.real else vec

    @property
    def shape_key(self) -> tuple:
        return tuple(sorted(self.partition))

    def sigma_point(self) -> SigmaPoint:
        return SigmaPoint.from_vector(self.vector())


def _multiset(values, sizes):
    """Merge equal values and return (values, multiplicities) sorted canonically."""
    vals, mults = [], []
    for v, c in zip(values, sizes):
        if c == 0:
            continue
        for i, w in enumerate(vals):
            if abs(w - v) < MERGE_TOL:
                vals[i] = (mults[i] * w + c * v) / (mults[i] + c)
                mults[i] += c
                break
        else:
            vals.append(complex(v))
            mults.append(c)
    if len(vals) < sum(1 for c in sizes if c):
        # merged blocks: the coarser shape is regular, so polish again there
        vals = list(_newton_polish(mults, vals)[0])
    vals = [complex(v.real, 0.0) if abs(v.imag) < MERGE_TOL else v for v in vals]
    order = sorted(range(len(vals)), key=lambda i: (round(vals[i].real, 7), round(vals[i].imag, 7), mults[i]))
    return tuple(vals[i] for i in order), tuple(mults[i] for i in order)


def _same_multiset(a, b) -> bool:
    (va, ma), (vb, mb) = a, b
    if sorted(ma) != sorted(mb):
        return False
    used = [False] * len(vb)
    for v, c in zip(va, ma):
        for j, (w, d) in enumerate(zip(vb, mb)):
            if not used[j] and c == d and abs(v - w) < MERGE_TOL:
                used[j] = True
                break
        else:
            return False
    return True


def _orbit_size(mults, n_total):
    out = factorial(n_total)
    for c in mults:
        out //= factorial(c)
    return out


@dataclass
class Census:
    n: int
    entries: list
    empty_block_exceptions: list  # shapes with < 3 blocks that produced solutions
    degenerate_shapes: list  # shapes whose resultant vanished identically

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    @property
    def real_entries(self) -> list:
        return [e for e in self.entries if e.real]

    @property
    def canonical_real_directions(self) -> int:
        return sum(e.count for e in self.real_entries) // 2

    def by_shape(self) -> dict:
        out: dict = {}
        for e in self.entries:
            out.setdefault(e.shape_key, []).append(e)
        return out


def _check_dim(n):
    if not 2 <= n <= MAX_DIM:
        raise DimensionTooLarge(f"supported dimensions are 2..{MAX_DIM}, got {n}")


def enumerate_all_critical(n: int) -> Census:
    """Every real and complex critical direction of the regular n-simplex, up to permutation orbits."""
    _check_dim(n)
    N = n + 1
    found = []  # (multiset, source shape)
    exceptions, degenerate = [], []
    for k in range(1, N - 1):
        for l in range(1, N - k):
            m = N - k - l
            sols, deg = _solve_three_blocks((k, l, m))
            if deg:
                degenerate.append((k, l, m))
            for X in sols:
                found.append((_multiset(X, (k, l, m)), (k, l, m)))
    for k in range(1, N):
        l = N - k
        sols = _solve_two_blocks(k, l)
        if sols:
            exceptions.append((k, l))
        for X in sols:
            found.append((_multiset(X, (k, l)), (k, l)))
    # one block: N x = 0 contradicts N x^2 = 1, so nothing to add

    entries: list[CensusEntry] = []
    keys: list = []
    for ms, shape in found:
        if any(_same_multiset(ms, key) for key in keys):
            continue
        keys.append(ms)
        vals, mults = ms
        real = all(abs(v.imag) < VALUE_TOL for v in vals)
        neg = _multiset([-v for v in vals], mults)
        entries.append(CensusEntry(
            partition=mults, values=tuple(complex(v.real, 0) if real else v for v in vals),
            real=real, count=_orbit_size(mults, N), sign_paired=_same_multiset(ms, neg),
            source_shape=shape,
        ))
    entries.sort(key=lambda e: (e.shape_key, not e.real, -e.count, [round(v.real, 9) for v in e.values]))
    return Census(n, entries, exceptions, degenerate)


def regular_min_radius(n: int, census: Census | None = None):
    """(r, v): the smallest circumscribing radius and an embedded direction achieving it."""
    census = census or enumerate_all_critical(n)
    best = max(census.real_entries, key=lambda e: (sigma_eval(e.vector())[3], e.partition))
    v = best.vector()
    s4 = sigma_eval(v)[3]
    return sqrt(radius_sq_from_sigma4(n, s4)), v


def stirling_census_check(n: int, census: Census | None = None) -> dict:
    if not 2 <= n <= 7:
        raise DimensionTooLarge("the tabulated bound covers 2 <= n <= 7")
    census = census or enumerate_all_critical(n)
    bound = 6 * stirling2(n + 1, 3)
    total = census.total
    return {
        "n": n,
        "bound": bound,
        "observed": total,
        "slack": bound - total,
        "status": "equal" if total == bound else ("below" if total < bound else "exceeds"),
    }


# -- the embedded program, for cross-checks ---------------------------------------------

def embedded_objective(v) -> float:
    """On the unit sphere this agrees with ``symmetric_objective``.

    ``u^2 - 2 u_{n+1} + 1 - v_{n+1}^2`` with ``u`` from the embedded tangency differences."""
    v = np.asarray(v, dtype=float)
    N = len(v)
    vv = v @ v
    M = np.zeros((N, N))
    rhs = np.zeros(N)
    for i in range(N - 1):
        M[i, i] = 1.0
        M[i, N - 1] = -1.0
        rhs[i] = -(v[i] ** 2 - v[N - 1] ** 2)
    M[N - 1] = 1.0
    rhs[N - 1] = 2 * vv
    u = np.linalg.solve(M, rhs) / (2 * vv)
    return float(u @ u - 2 * u[N - 1] + 1 - v[N - 1] ** 2)


def symmetric_objective(v) -> float:
    """Quartic objective written in elementary symmetric functions."""
    v = np.asarray(v, dtype=float)
    n = len(v) - 1
    s1, s2, s3, s4 = sigma_eval(v)
    return (n * s1**4 - 4 * n * s1**2 * s2 + 2 * (n - 1) * s2**2 - 4 * s1**2 + 8 * s2 + 4 * n) / (
        4 * (n + 1)
    ) + s1 * s3 - s4


def symmetric_cubic(v) -> float:
    """The circumscription cubic written in elementary symmetric functions."""
    v = np.asarray(v, dtype=float)
    n = len(v) - 1
    s1, s2, s3, _ = sigma_eval(v)
    return (-(n - 2) * s1**3 + 3 * (n - 1) * s1 * s2) / (2 * (n + 1)) - 1.5 * s3
