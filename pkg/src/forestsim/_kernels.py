"""Numba kernels for the blocked conjugate-gradient solver.

All parallel kernels partition work by matrix row, so every output element
is written by exactly one thread and results are bitwise reproducible
regardless of thread count or scheduling. Column reductions run
single-threaded for the same reason.
"""

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def spmm_shifted(indptr, indices, diag, block, out):
    # out = diag * block - A @ block, rows in parallel
    n, b = block.shape
    for i in prange(n):
        for j in range(b):
            out[i, j] = diag[i] * block[i, j]
        for idx in range(indptr[i], indptr[i + 1]):
            c = indices[idx]
            for j in range(b):
                out[i, j] -= block[c, j]


@njit(parallel=True, cache=True)
def axpy_pair(x, r, p, ap, alpha):
    # x += alpha * p ; r -= alpha * ap, column-wise alpha
    n, b = x.shape
    for i in prange(n):
        for j in range(b):
            x[i, j] += alpha[j] * p[i, j]
            r[i, j] -= alpha[j] * ap[i, j]


@njit(parallel=True, cache=True)
def precond_p_update(p, r, minv, beta):
    # p = minv * r + beta * p
    n, b = p.shape
    for i in prange(n):
        for j in range(b):
            p[i, j] = minv[i] * r[i, j] + beta[j] * p[i, j]


@njit(cache=True)
def col_dots(a, b):
    n, cols = a.shape
    out = np.zeros(cols)
    for i in range(n):
        for j in range(cols):
            out[j] += a[i, j] * b[i, j]
    return out


@njit(cache=True)
def col_dots_weighted(w, a, b):
    n, cols = a.shape
    out = np.zeros(cols)
    for i in range(n):
        for j in range(cols):
            out[j] += w[i] * a[i, j] * b[i, j]
    return out
