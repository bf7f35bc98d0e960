"""Scikit-learn style estimators wrapping the similarity measures.

Each estimator follows the fit/query convention: ``fit(X)`` runs the
measure's precomputation on a graph (anything :func:`forestsim.as_graph`
accepts: a ``Graph``, a symmetric sparse/dense adjacency, an ``(m, 2)``
edge array, or a networkx-style object) and the fitted object answers
``similarity``, ``top_k`` and ``top_k_all`` queries. ``get_params`` /
``set_params`` / ``clone`` work as usual.
"""

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import approx, baselines, exact, index as index_mod
from .graph import as_graph


class _FittedQueryMixin:
    def _require_fitted(self, attr):
        if not hasattr(self, attr):
            raise NotFittedError(
                f"this {type(self).__name__} instance is not fitted yet; call fit first"
            )

    def distance(self, u, v):
        """Metric distance ``1 - similarity(u, v)``."""
        return 1.0 - self.similarity(u, v)

    def top_k_all(self, k):
        """Top-k results for every node; over-large k is clamped to n - 1."""
        self._require_fitted("graph_")
        k_eff = min(k, self.graph_.n - 1)
        return [self.top_k(u, k_eff) for u in range(self.graph_.n)]


class ForestSim(BaseEstimator, _FittedQueryMixin):
    """Role similarity from the forest-matrix diagonal, with O(k) top-k.

    Fitting computes one positive value per node (the node's diagonal entry
    of ``(I + L)^{-1}``) and sorts nodes by it; ``similarity(u, v)`` is the
    min/max ratio of the two values and ``top_k`` walks the sorted order
    with two cursors, independent of graph size.

    Parameters
    ----------
    method : {"exact", "approx"}
        ``"exact"`` uses a dense factorization (O(n^3) time, O(n^2) space,
        guarded by ``dense_limit``); ``"approx"`` uses random projection
        plus sparse solves.
    epsilon : float
        Relative-error target of the approximation, in (0, 0.5).
    jl_constant : float
        Sketch-dimension multiplier C in ``ceil(C log n / epsilon^2)``.
    solver_tol : float
        Relative residual target of the conjugate-gradient solver.
    solver_max_iter : int
        Iteration cap per solve.
    random_state : int
        Seed of the sketch; fitting is deterministic given it.
    dense_limit : int
        Node-count ceiling for the exact method.

    Attributes
    ----------
    graph_ : Graph
        The validated input graph.
    index_ : ForestIndex
        Sorted index (values, order, rank, fingerprint).
    diag_ : ndarray
        Per-node diagonal values.
    """

    def __init__(self, method="exact", epsilon=0.1, jl_constant=4.0,
                 solver_tol=1e-8, solver_max_iter=1000, random_state=0,
                 dense_limit=exact.DENSE_NODE_LIMIT):
        self.method = method
        self.epsilon = epsilon
        self.jl_constant = jl_constant
        self.solver_tol = solver_tol
        self.solver_max_iter = solver_max_iter
        self.random_state = random_state
        self.dense_limit = dense_limit

    def fit(self, X, y=None):
        graph = as_graph(X)
        if self.method == "exact":
            diag = exact.forest_diag(graph, dense_limit=self.dense_limit)
            idx = index_mod.build_index(graph, diag, method=index_mod.METHOD_EXACT)
        elif self.method == "approx":
            cfg = approx.ApproxConfig(
                epsilon=self.epsilon,
                jl_constant=self.jl_constant,
                solver_rel_tol=self.solver_tol,
                max_iterations=self.solver_max_iter,
                seed=self.random_state,
            )
            diag = approx.approx_forest_diag(graph, cfg)
            idx = index_mod.build_index(graph, diag, method=index_mod.METHOD_APPROX,
                                        epsilon=cfg.epsilon, seed=cfg.seed)
        else:
            raise ValueError(f"method must be 'exact' or 'approx', got {self.method!r}")
        self.graph_ = graph
        self.index_ = idx
        return self

    @property
    def diag_(self):
        self._require_fitted("index_")
        return self.index_.values

    def similarity(self, u, v):
        self._require_fitted("index_")
        return index_mod.forest_similarity(self.index_, u, v)

    def top_k(self, u, k):
        self._require_fitted("index_")
        return index_mod.top_k_search(self.index_, u, k)

    def top_k_all(self, k):
        self._require_fitted("index_")
        return index_mod.top_k_all(self.index_, k)


class RoleSim(BaseEstimator, _FittedQueryMixin):
    """Iterative matching-based role similarity (all pairs, dense).

    Parameters mirror the iteration: decay ``beta`` in (0, 1), sweep cap
    ``max_iter``, stopping tolerance ``tol`` on the largest entry change,
    and a node-count guard ``dense_limit`` for the O(n^2) score matrix.

    Attributes: ``scores_`` (dense symmetric matrix, unit diagonal),
    ``n_iter_``, ``max_deltas_``, ``converged_``.
    """

    def __init__(self, beta=0.1, max_iter=100, tol=1e-4,
                 dense_limit=baselines.ROLESIM_NODE_LIMIT):
        self.beta = beta
        self.max_iter = max_iter
        self.tol = tol
        self.dense_limit = dense_limit

    def fit(self, X, y=None):
        graph = as_graph(X)
        config = baselines.RoleSimConfig(beta=self.beta, max_iterations=self.max_iter,
                                         convergence_tol=self.tol)
        result = baselines.rolesim_scores(graph, config, node_limit=self.dense_limit)
        self.graph_ = graph
        self.scores_ = result.scores
        self.n_iter_ = result.n_iter
        self.max_deltas_ = result.max_deltas
        self.converged_ = result.converged
        return self

    def similarity(self, u, v):
        self._require_fitted("scores_")
        return float(self.scores_[u, v])

    def top_k(self, u, k):
        self._require_fitted("scores_")
        return baselines.top_k_from_scores(self.scores_, u, k)


class StructSim(BaseEstimator, _FittedQueryMixin):
    """BFS-histogram role similarity (per-level degree profiles).

    ``levels`` controls how many BFS levels (starting at the node itself)
    enter the per-node index. A top-k query scores the node against all
    others, so per-query work grows linearly with graph size.

    Attributes: ``bincount_index_`` (the histogram index).
    """

    def __init__(self, levels=3):
        self.levels = levels

    def fit(self, X, y=None):
        graph = as_graph(X)
        self.graph_ = graph
        self.bincount_index_ = baselines.structsim_build_index(graph, levels=self.levels)
        return self

    def similarity(self, u, v):
        self._require_fitted("bincount_index_")
        return baselines.structsim_score(self.bincount_index_, u, v)

    def top_k(self, u, k):
        self._require_fitted("bincount_index_")
        return baselines.structsim_top_k(self.bincount_index_, u, k)
