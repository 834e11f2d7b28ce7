"""Small dense polynomial tools: companion-matrix roots and Sylvester resultants.

Polynomials are coefficient arrays in *ascending* order, ``c[k]`` multiplying
``x**k``. Coefficients may be complex.
"""
from __future__ import annotations

import numpy as np


def trim(c, rel_tol: float = 1e-13) -> np.ndarray:
    """Drop leading coefficients that are negligible relative to the largest one."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    scale = np.abs(c).max() if c.size else 0.0
    if scale == 0.0:
        return c[:1] * 0
    k = len(c)
    while k > 1 and abs(c[k - 1]) <= rel_tol * scale:
        k -= 1
    return c[:k]


def companion(c) -> np.ndarray:
    """Companion matrix of the monic normalization of ``c`` (degree >= 1)."""
    c = trim(c)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("companion matrix needs degree >= 1")
    monic = c[:-1] / c[-1]
    C = np.zeros((deg, deg), dtype=complex)
    C[1:, :-1] = np.eye(deg - 1)
    C[:, -1] = -monic
    return C


def roots(c) -> np.ndarray:
    """All complex roots via companion-matrix eigenvalues, Newton-polished."""
    c = trim(c)
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    z = np.linalg.eigvals(companion(c))
    dc = c[1:] * np.arange(1, len(c))
    for _ in range(3):
        p = np.polynomial.polynomial.polyval(z, c)
        dp = np.polynomial.polynomial.polyval(z, dc)
        ok = np.abs(dp) > 1e-300
        z = np.where(ok, z - np.where(ok, p / np.where(ok, dp, 1), 0), z)
    return z


def sylvester(p, q) -> np.ndarray:
    """Sylvester matrix of two univariate polynomials (ascending coefficients)."""
    p = np.asarray(p, dtype=complex)[::-1]
    q = np.asarray(q, dtype=complex)[::-1]
    m, n = len(p) - 1, len(q) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = p
    for i in range(m):
        S[n + i, i : i + n + 1] = q
    return S


def resultant_in_x(P, Q, max_degree: int) -> np.ndarray:
    """Resultant with respect to ``x`` of bivariate ``P(x, y)``, ``Q(x, y)``.

    ``P`` and ``Q`` are callables mapping ``y`` to the ascending ``x``-coefficient
    array (fixed length, so the Sylvester shape never changes). The determinant
    is sampled on roots of unity and interpolated back to a polynomial in ``y``
    of degree at most ``max_degree``.
    """
    N = 1
    while N <= max_degree:
        N *= 2
    N *= 2
    ys = np.exp(2j * np.pi * np.arange(N) / N)
    vals = np.array([np.linalg.det(sylvester(P(y), Q(y))) for y in ys])
    coeffs = np.fft.fft(vals) / N
    # positive powers only appear; aliasing beyond max_degree is rounding noise
    return trim(coeffs[: max_degree + 1])
