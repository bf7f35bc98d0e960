"""Exact forest matrix ``(I + L)^{-1}`` via dense symmetric factorization.

``I + L`` is positive definite for every graph (connected or not), so a
Cholesky factorization always exists. Cost is O(n^3) time and O(n^2)
memory, hence the node limit; larger graphs belong to the sketched path in
:mod:`forestsim.approx`.
"""

import numpy as np
import scipy.linalg

from .exceptions import GraphSizeError

DENSE_NODE_LIMIT = 20_000


def _check_size(graph, dense_limit):
    if graph.n > dense_limit:
        raise GraphSizeError(
            f"graph has {graph.n} nodes, above the dense limit {dense_limit}; "
            "use the approximate diagonal (forestsim.approx) instead"
        )


def _shifted_laplacian_dense(graph):
    mat = -graph.adjacency().toarray()
    mat[np.diag_indices_from(mat)] = 1.0 + graph.degrees
    return mat


def forest_matrix(graph, dense_limit=DENSE_NODE_LIMIT):
    """Dense forest matrix ``W = (I + L)^{-1}``.

    The result is symmetric, row-stochastic, and has all entries in
    ``[0, 1]``; entry ``(i, j)`` is the fraction of spanning rooted forests
    in which ``i`` and ``j`` share a tree rooted at ``i``.
    """
    _check_size(graph, dense_limit)
    mat = _shifted_laplacian_dense(graph)
    factor = scipy.linalg.cho_factor(mat, lower=True, overwrite_a=True, check_finite=False)
    w = scipy.linalg.cho_solve(factor, np.eye(graph.n), check_finite=False)
    return (w + w.T) / 2.0


def forest_diag(graph, dense_limit=DENSE_NODE_LIMIT):
    """Diagonal of the forest matrix (one factorization, n back-solves)."""
    return np.ascontiguousarray(np.diag(forest_matrix(graph, dense_limit)))
