import pytest

from forestsim.generators import gnm_random_graph, gnp_random_graph, random_regular_graph


class TestRandomRegular:
    def test_degrees_exact(self):
        for n, d in ((50, 4), (101, 6), (1000, 4)):
            graph = random_regular_graph(n, d, seed=1)
            assert (graph.degrees == d).all()
            assert graph.m == n * d // 2

    def test_deterministic_given_seed(self):
        a = random_regular_graph(300, 4, seed=9)
        b = random_regular_graph(300, 4, seed=9)
        assert a == b

    def test_seed_sensitivity(self):
        a = random_regular_graph(300, 4, seed=1)
        b = random_regular_graph(300, 4, seed=2)
        assert a != b

    def test_odd_total_degree_rejected(self):
        with pytest.raises(ValueError):
            random_regular_graph(5, 3, seed=0)

    def test_degree_too_large_rejected(self):
        with pytest.raises(ValueError):
            random_regular_graph(4, 4, seed=0)


class TestGnm:
    def test_exact_edge_count(self):
        for m in (0, 1, 50, 200):
            graph = gnm_random_graph(40, m, seed=3)
            assert graph.m == m and graph.n == 40

    def test_deterministic(self):
        assert gnm_random_graph(100, 300, seed=7) == gnm_random_graph(100, 300, seed=7)

    def test_too_many_edges_rejected(self):
        with pytest.raises(ValueError):
            gnm_random_graph(4, 7, seed=0)

    def test_simple(self):
        graph = gnm_random_graph(30, 100, seed=5)
        assert (graph.edges[:, 0] < graph.edges[:, 1]).all()


class TestGnp:
    def test_extremes(self):
        assert gnp_random_graph(10, 0.0, seed=0).m == 0
        assert gnp_random_graph(10, 1.0, seed=0).m == 45

    def test_deterministic(self):
        assert gnp_random_graph(50, 0.2, seed=4) == gnp_random_graph(50, 0.2, seed=4)
