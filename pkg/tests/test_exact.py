import numpy as np
import pytest

import helpers
from forestsim import GraphSizeError, forest_diag, forest_matrix, shifted_laplacian_apply


class TestForestMatrix:
    def test_toy_graph_matches_known_values(self, g0):
        assert np.abs(forest_matrix(g0) - helpers.TOY_MATRIX).max() <= 1e-12

    def test_single_node(self):
        assert np.allclose(forest_matrix(helpers.single_node()), [[1.0]], atol=1e-12)

    def test_k2(self):
        # direct inversion of [[2, -1], [-1, 2]]
        expected = np.array([[2, 1], [1, 2]]) / 3.0
        assert np.abs(forest_matrix(helpers.k2()) - expected).max() <= 1e-12

    def test_inverse_identity(self):
        for seed in range(5):
            graph = helpers.random_graph(25, 0.2, seed=seed)
            w = forest_matrix(graph)
            residual = shifted_laplacian_apply(graph, w) - np.eye(graph.n)
            assert np.abs(residual).max() <= 1e-9

    def test_symmetric_row_stochastic_unit_interval(self):
        for seed in range(5):
            graph = helpers.random_graph(30, 0.15, seed=seed + 50)
            w = forest_matrix(graph)
            assert (w == w.T).all()
            assert np.abs(w.sum(axis=1) - 1.0).max() <= 1e-9
            assert w.min() >= -1e-12 and w.max() <= 1.0 + 1e-12

    def test_size_limit(self, g0):
        with pytest.raises(GraphSizeError):
            forest_matrix(g0, dense_limit=3)
        with pytest.raises(GraphSizeError):
            forest_diag(g0, dense_limit=3)


class TestForestDiag:
    def test_toy_diagonal(self, g0):
        assert np.abs(forest_diag(g0) - helpers.TOY_DIAG).max() <= 1e-12

    def test_triangle_diagonal(self):
        # enumeration oracle: K3 has 16 rooted forests, 8 rooting each node
        from forestsim import enumerate_rooted_forests

        ens = enumerate_rooted_forests(helpers.k3())
        expected = np.array(ens.rooted_count) / ens.total
        assert np.allclose(expected, 0.5)
        assert np.abs(forest_diag(helpers.k3()) - expected).max() <= 1e-12

    def test_single_node_diag(self):
        assert forest_diag(helpers.single_node()) == pytest.approx([1.0])

    def test_degree_bounds(self):
        # 1/(d+1) <= w_uu <= 2/(d+2) for every node
        for seed in range(10):
            graph = helpers.random_graph(40, 0.1, seed=seed)
            diag = forest_diag(graph)
            lower = 1.0 / (graph.degrees + 1.0)
            upper = 2.0 / (graph.degrees + 2.0)
            assert (diag >= lower - 1e-12).all()
            assert (diag <= upper + 1e-12).all()

    def test_upper_bound_attained_on_k2_k3(self):
        for graph in (helpers.k2(), helpers.k3()):
            diag = forest_diag(graph)
            upper = 2.0 / (graph.degrees + 2.0)
            assert np.abs(diag - upper).max() <= 1e-12

    def test_automorphic_nodes_equal(self, g0):
        diag = forest_diag(g0)
        assert abs(diag[2] - diag[3]) <= 1e-12

        star = helpers.star_graph(5)
        leaf_vals = forest_diag(star)[1:]
        assert np.abs(leaf_vals - leaf_vals[0]).max() <= 1e-12

        k3_vals = forest_diag(helpers.k3())
        assert np.abs(k3_vals - k3_vals[0]).max() <= 1e-12

    def test_isolated_node_value_one(self):
        from forestsim.graph import Graph

        graph = Graph(3, [(0, 1)])  # node 2 isolated
        assert forest_diag(graph)[2] == pytest.approx(1.0, abs=1e-12)
