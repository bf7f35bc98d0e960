import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import helpers
from forestsim import ForestSim, GraphSizeError, RoleSim, StructSim, forest_diag


class TestForestSimEstimator:
    def test_fit_exact(self, g0):
        est = ForestSim().fit(g0)
        assert np.abs(est.diag_ - helpers.TOY_DIAG).max() <= 1e-12
        assert est.index_.method == "exact"

    def test_fit_approx_deterministic(self, g0):
        a = ForestSim(method="approx", epsilon=0.1, random_state=7).fit(g0)
        b = ForestSim(method="approx", epsilon=0.1, random_state=7).fit(g0)
        assert (a.diag_ == b.diag_).all()
        assert a.index_.method == "approx"

    def test_queries(self, g0):
        est = ForestSim().fit(g0)
        assert est.similarity(2, 3) == pytest.approx(1.0, abs=1e-12)
        assert est.distance(0, 1) == pytest.approx(1 / 3, abs=1e-12)
        result = est.top_k(2, 2)
        assert result.nodes.tolist() == [3, 0]
        assert [r.query for r in est.top_k_all(1)] == [0, 1, 2, 3]

    def test_accepts_sparse_and_edge_array(self, g0):
        from_sparse = ForestSim().fit(g0.adjacency())
        from_edges = ForestSim().fit(np.asarray(g0.edges))
        assert (from_sparse.diag_ == from_edges.diag_).all()

    def test_accepts_networkx(self):
        networkx = pytest.importorskip("networkx")
        est = ForestSim().fit(networkx.path_graph(5))
        assert len(est.diag_) == 5

    def test_invalid_method(self, g0):
        with pytest.raises(ValueError):
            ForestSim(method="magic").fit(g0)

    def test_dense_limit_enforced(self, g0):
        with pytest.raises(GraphSizeError):
            ForestSim(dense_limit=2).fit(g0)

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            ForestSim().similarity(0, 1)
        with pytest.raises(NotFittedError):
            ForestSim().top_k(0, 1)

    def test_sklearn_protocol(self, g0):
        est = ForestSim(method="approx", epsilon=0.2, random_state=3)
        params = est.get_params()
        assert params["epsilon"] == 0.2 and params["method"] == "approx"
        cloned = clone(est)
        assert cloned.get_params() == params
        cloned.set_params(epsilon=0.3)
        assert cloned.epsilon == 0.3 and est.epsilon == 0.2

    def test_exact_and_approx_agree_on_small_graph(self):
        graph = helpers.random_graph(40, 0.15, seed=2)
        ex = ForestSim(method="exact").fit(graph)
        ap = ForestSim(method="approx", epsilon=0.1).fit(graph)
        # sketch dimension exceeds n here, so the approx path is exact up to
        # solver tolerance
        assert np.abs(ex.diag_ - ap.diag_).max() <= 1e-6


class TestRoleSimEstimator:
    def test_fit_and_query(self, g0):
        est = RoleSim(tol=1e-6).fit(g0)
        assert est.similarity(2, 3) == pytest.approx(1.0, abs=1e-9)
        assert est.top_k(2, 1).nodes.tolist() == [3]
        assert est.converged_
        assert len(est.max_deltas_) == est.n_iter_

    def test_sklearn_protocol(self):
        est = RoleSim(beta=0.2, max_iter=5)
        assert clone(est).get_params()["beta"] == 0.2

    def test_size_guard(self):
        with pytest.raises(GraphSizeError):
            RoleSim(dense_limit=5).fit(helpers.random_graph(10, 0.3, seed=0))

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            RoleSim().top_k(0, 1)


class TestStructSimEstimator:
    def test_fit_and_query(self, g0):
        est = StructSim(levels=2).fit(g0)
        assert est.similarity(2, 3) == 1.0
        assert est.top_k(2, 1).nodes.tolist() == [3]

    def test_top_k_all_clamps(self, g0):
        est = StructSim().fit(g0)
        results = est.top_k_all(10)
        assert all(len(r) == 3 for r in results)

    def test_sklearn_protocol(self):
        assert clone(StructSim(levels=4)).get_params()["levels"] == 4

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            StructSim().similarity(0, 1)


class TestCrossMeasureConsistency:
    def test_all_measures_rank_automorphic_pair_first(self, g0):
        for est in (ForestSim(), RoleSim(tol=1e-6), StructSim()):
            fitted = est.fit(g0)
            assert fitted.top_k(2, 1).nodes.tolist() == [3], type(est).__name__

    def test_diag_matches_functional_api(self, g0):
        assert (ForestSim().fit(g0).diag_ == forest_diag(g0)).all()
