"""Comparison role-similarity measures: iterative matching and BFS histograms.

Two reference measures used to put the forest-diagonal metric in context:

* an all-pairs iterative score where each update solves a maximum-weight
  matching between the two nodes' neighborhoods (quartic-ish per sweep,
  quadratic memory -- small graphs only);
* a per-node index of logarithmic degree histograms over BFS levels, with
  similarity as normalized histogram overlap averaged across levels. The
  published description of this family leaves the per-level formula to its
  own reference; the overlap rule here is a documented stand-in that keeps
  the properties relevant for comparison (range [0, 1], symmetry,
  automorphic pairs score 1). Use it for relative studies, not as ground
  truth for the original.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linear_sum_assignment

from .exceptions import GraphSizeError
from .index import TopKResult

ROLESIM_NODE_LIMIT = 10_000


@dataclass(frozen=True)
class RoleSimConfig:
    """Decay weight, sweep cap and stopping tolerance for the iteration."""

    beta: float = 0.1
    max_iterations: int = 100
    convergence_tol: float = 1e-4

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class RoleSimResult:
    """Converged score matrix plus the per-sweep maximum change trace."""

    scores: np.ndarray
    max_deltas: list
    n_iter: int
    converged: bool


def rolesim_scores(graph, config=None, node_limit=ROLESIM_NODE_LIMIT):
    """All-pairs iterative role similarity.

    Starts from the all-ones matrix; each sweep replaces ``score(u, v)``
    with ``(1 - beta) * M(u, v) / max(d_u, d_v) + beta`` where ``M`` is the
    maximum-weight matching between the neighborhoods under the previous
    scores. Nodes with two empty neighborhoods count as perfectly matched;
    one empty neighborhood gives a zero matching term. Stops when the
    largest entry change drops to ``convergence_tol`` or after
    ``max_iterations`` sweeps.
    """
    if config is None:
        config = RoleSimConfig()
    n = graph.n
    if n > node_limit:
        raise GraphSizeError(
            f"all-pairs iterative scores need O(n^2) memory; n={n} is above "
            f"the limit {node_limit}"
        )
    beta = config.beta
    neigh = [graph.neighbors(u) for u in range(n)]
    deg = graph.degrees
    scores = np.ones((n, n))
    new = np.empty_like(scores)
    deltas = []
    converged = False
    sweeps = 0
    for sweeps in range(1, config.max_iterations + 1):
        for u in range(n):
            new[u, u] = 1.0
            nu = neigh[u]
            du = deg[u]
            for v in range(u + 1, n):
                dv = deg[v]
                if du == 0 and dv == 0:
                    match = 1.0
                elif du == 0 or dv == 0:
                    match = 0.0
                else:
                    sub = scores[np.ix_(nu, neigh[v])]
                    rows, cols = linear_sum_assignment(sub, maximize=True)
                    match = sub[rows, cols].sum() / max(du, dv)
                val = (1.0 - beta) * match + beta
                new[u, v] = new[v, u] = val
        delta = float(np.abs(new - scores).max())
        deltas.append(delta)
        scores, new = new.copy(), scores
        if delta <= config.convergence_tol:
            converged = True
            break
    return RoleSimResult(scores, deltas, sweeps, converged)


def _degree_bin(degree):
    """Log-2 degree bin: 0 for degree 0, else floor(log2 d) + 1."""
    arr = np.atleast_1d(np.asarray(degree, dtype=np.int64))
    out = np.zeros(len(arr), dtype=np.int64)
    pos = arr > 0
    out[pos] = np.floor(np.log2(arr[pos])).astype(np.int64) + 1
    return out if np.ndim(degree) else int(out[0])


def top_k_from_scores(scores, u, k):
    """Exact top-k of row ``u`` of a dense score matrix, ties by ascending id."""
    n = scores.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    row = scores[u]
    candidates = np.arange(n)[np.arange(n) != u]
    order = np.lexsort((candidates, -row[candidates]))[:k]
    chosen = candidates[order]
    return TopKResult(int(u), chosen, row[chosen].copy(), comparisons=n - 1)


class StructSimIndex:
    """Per-node, per-BFS-level logarithmic degree histograms.

    ``hist[u, level]`` counts, in log-2 degree bins, the nodes at exactly
    ``level`` hops from ``u`` (level 0 is ``u`` itself); BFS is truncated
    after ``levels`` levels. Queries count one comparison per candidate
    scored, so a top-k query costs ``n - 1`` comparisons by construction.
    """

    def __init__(self, levels, hist, frontier_sizes):
        self.levels = levels
        self.hist = hist
        self.frontier_sizes = frontier_sizes
        self.n = hist.shape[0]
        self.comparisons_total = 0

    @classmethod
    def build(cls, graph, levels=3):
        if levels < 1:
            raise ValueError("levels must be at least 1")
        n = graph.n
        n_bins = _degree_bin(max(n - 1, 1)) + 1
        bins = _degree_bin(graph.degrees)
        onehot = sp.csr_matrix(
            (np.ones(n, dtype=np.int64), (np.arange(n), bins)), shape=(n, n_bins)
        )
        # int64 pattern matrices: plain int8 would overflow on path counts
        adj = graph.adjacency().astype(bool).astype(np.int64)
        eye = sp.identity(n, dtype=np.int64, format="csr")

        hist = np.zeros((n, levels, n_bins), dtype=np.int64)
        frontier = eye
        reached = eye.copy()
        hist[:, 0, :] = (frontier @ onehot).toarray()
        for level in range(1, levels):
            if frontier.nnz == 0:
                break
            grown = (frontier @ adj).astype(bool).astype(np.int64)
            grown = grown - grown.multiply(reached)
            grown.eliminate_zeros()
            frontier = grown
            reached = (reached + frontier).astype(bool).astype(np.int64)
            hist[:, level, :] = (frontier @ onehot).toarray()
        sizes = hist.sum(axis=2)
        return cls(levels, hist, sizes)

    def score(self, u, v):
        """Similarity of ``u`` and ``v``: mean per-level histogram overlap."""
        self.comparisons_total += 1
        return float(self._level_sims(self.hist[u], self.frontier_sizes[u],
                                      self.hist[v], self.frontier_sizes[v]).mean())

    @staticmethod
    def _level_sims(hist_u, sizes_u, hist_v, sizes_v):
        overlap = np.minimum(hist_u, hist_v).sum(axis=-1)
        denom = np.maximum(sizes_u, sizes_v)
        both_empty = (sizes_u == 0) & (sizes_v == 0)
        sims = np.where(denom > 0, overlap / np.where(denom > 0, denom, 1), 0.0)
        return np.where(both_empty, 1.0, sims)

    def score_all(self, u):
        """Scores between ``u`` and every node (vectorized one-vs-all sweep)."""
        self.comparisons_total += self.n - 1
        sims = self._level_sims(self.hist[u][None, :, :], self.frontier_sizes[u][None, :],
                                self.hist, self.frontier_sizes)
        return sims.mean(axis=1)

    def top_k(self, u, k):
        if not 1 <= k <= self.n - 1:
            raise ValueError(f"k must lie in [1, {self.n - 1}], got {k}")
        row = self.score_all(u)
        candidates = np.arange(self.n)[np.arange(self.n) != u]
        order = np.lexsort((candidates, -row[candidates]))[:k]
        chosen = candidates[order]
        return TopKResult(int(u), chosen, row[chosen], comparisons=self.n - 1)


def structsim_build_index(graph, levels=3):
    """Build the BFS histogram index (worst case O(n m) work)."""
    return StructSimIndex.build(graph, levels)


def structsim_score(index, u, v):
    return index.score(u, v)


def structsim_top_k(index, u, k):
    return index.top_k(u, k)
