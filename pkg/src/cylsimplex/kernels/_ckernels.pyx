# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched projection-radius kernel (same contract as the numpy version)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

from ._pykernels import support_subsets, ENCLOSE_RTOL

cnp.import_array()


cdef int _solve_small(double[:, ::1] G, double[::1] b, int s, double tiny) noexcept nogil:
    """Gaussian elimination with partial pivoting in place; 0 on a tiny pivot."""
    cdef int i, j, k, p
    cdef double t, piv
    for k in range(s):
        p = k
        piv = fabs(G[k, k])
        for i in range(k + 1, s):
            if fabs(G[i, k]) > piv:
                piv = fabs(G[i, k])
                p = i
        if piv <= tiny:
            return 0
        if p != k:
            for j in range(s):
                t = G[k, j]; G[k, j] = G[p, j]; G[p, j] = t
            t = b[k]; b[k] = b[p]; b[p] = t
        for i in range(k + 1, s):
            t = G[i, k] / G[k, k]
            for j in range(k, s):
                G[i, j] -= t * G[k, j]
            b[i] -= t * b[k]
    for k in range(s - 1, -1, -1):
        t = b[k]
        for j in range(k + 1, s):
            t -= G[k, j] * b[j]
        b[k] = t / G[k, k]
    return 1


def batch_projection_radii(points, directions):
    cdef const double[:, ::1] X = np.ascontiguousarray(points, dtype=float)
    cdef const double[:, ::1] V = np.ascontiguousarray(directions, dtype=float)
    cdef int m = X.shape[0], n = X.shape[1], K = V.shape[0]
    cdef const int[:, ::1] subsets = support_subsets(m, n)
    cdef int nsub = subsets.shape[0]
    cdef double[::1] out = np.empty(K)
    cdef double[:, ::1] Q = np.empty((m, n))
    cdef double[:, ::1] A = np.empty((n, n))
    cdef double[:, ::1] G = np.empty((n, n))
    cdef double[::1] lam = np.empty(n)
    cdef double[::1] c = np.empty(n)
    cdef double[::1] mean = np.zeros(n)
    cdef double rtol = ENCLOSE_RTOL
    cdef int k, i, j, a, t, s, i0, pi = 0, pj = 1
    cdef double proj, best, r2, d2, dmax, scale2 = 0.0, x, tiny, lower
    for i in range(m):
        for j in range(n):
            mean[j] += X[i, j] / m
    for i in range(m):
        x = 0.0
        for j in range(n):
            x += (X[i, j] - mean[j]) ** 2
        if x > scale2:
            scale2 = x
    scale2 += 1e-300
    with nogil:
        for k in range(K):
            for i in range(m):
                proj = 0.0
                for j in range(n):
                    proj += V[k, j] * X[i, j]
                for j in range(n):
                    Q[i, j] = X[i, j] - proj * V[k, j]
            best = INFINITY
            # no enclosing ball is smaller than half the diameter; the diametral
            # ball is the only two-point candidate and often already the answer
            lower = 0.0
            for i in range(m):
                for a in range(i + 1, m):
                    d2 = 0.0
                    for j in range(n):
                        d2 += (Q[i, j] - Q[a, j]) ** 2
                    if d2 > lower:
                        lower = d2
                        pi = i
                        pj = a
            lower *= 0.25
            dmax = 0.0
            for i in range(m):
                d2 = 0.0
                for j in range(n):
                    d2 += (Q[i, j] - 0.5 * (Q[pi, j] + Q[pj, j])) ** 2
                if d2 > dmax:
                    dmax = d2
            if dmax <= lower * (1 + rtol) + 1e-14 * scale2:
                out[k] = sqrt(lower)
                continue
            for t in range(nsub):
                s = 0
                while s < n and subsets[t, s] >= 0:
                    s += 1
                if s == 2:
                    continue
                i0 = subsets[t, 0]
                for a in range(s - 1):
                    for j in range(n):
                        A[a, j] = Q[subsets[t, a + 1], j] - Q[i0, j]
                for a in range(s - 1):
                    for i in range(a, s - 1):
                        x = 0.0
                        for j in range(n):
                            x += A[a, j] * A[i, j]
                        G[a, i] = x
                        G[i, a] = x
                    lam[a] = 0.5 * G[a, a]
                tiny = 1e-9 * scale2
                if not _solve_small(G, lam, s - 1, tiny):
                    continue
                r2 = 0.0
                for j in range(n):
                    x = 0.0
                    for a in range(s - 1):
                        x += lam[a] * A[a, j]
                    c[j] = Q[i0, j] + x
                    r2 += x * x
                if r2 >= best or r2 < lower * (1 - 1e-12):
                    continue
                dmax = 0.0
                for i in range(m):
                    d2 = 0.0
                    for j in range(n):
                        d2 += (Q[i, j] - c[j]) ** 2
                    if d2 > dmax:
                        dmax = d2
                if dmax <= r2 * (1 + rtol) + 1e-14 * scale2:
                    best = r2
            out[k] = sqrt(best)
    return np.asarray(out)
