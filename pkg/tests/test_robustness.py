"""Differential checks on the solver kernels, concurrency safety, and
hostile-input handling."""

import struct
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

import helpers
from forestsim import (ApproxConfig, ForestSim, approx_forest_diag, axiom_battery,
                       build_index, forest_diag, load_index, save_index,
                       shifted_laplacian_apply, structsim_build_index,
                       structsim_score, top_k_search)
from forestsim import _kernels
from forestsim.graph import Graph


class TestKernelsAgainstNumpy:
    """The numba kernels must agree with plain numpy reference expressions."""

    @pytest.fixture
    def setup(self):
        rng = np.random.Generator(np.random.Philox(key=17))
        graph = helpers.random_graph(120, 0.06, seed=5)
        adj = graph.adjacency()
        block = np.ascontiguousarray(rng.normal(size=(graph.n, 9)))
        return graph, adj, block, rng

    def test_spmm_shifted(self, setup):
        graph, adj, block, _ = setup
        out = np.empty_like(block)
        diag = (1.0 + graph.degrees).astype(np.float64)
        _kernels.spmm_shifted(adj.indptr.astype(np.int64),
                              adj.indices.astype(np.int64), diag, block, out)
        reference = shifted_laplacian_apply(graph, block)
        assert np.abs(out - reference).max() <= 1e-12

    def test_axpy_pair(self, setup):
        _, _, block, rng = setup
        x = np.ascontiguousarray(rng.normal(size=block.shape))
        r = np.ascontiguousarray(rng.normal(size=block.shape))
        p = np.ascontiguousarray(rng.normal(size=block.shape))
        ap = np.ascontiguousarray(rng.normal(size=block.shape))
        alpha = rng.normal(size=block.shape[1])
        x_ref = x + alpha * p
        r_ref = r - alpha * ap
        _kernels.axpy_pair(x, r, p, ap, alpha)
        assert np.array_equal(x, x_ref) and np.array_equal(r, r_ref)

    def test_precond_p_update(self, setup):
        _, _, block, rng = setup
        p = np.ascontiguousarray(rng.normal(size=block.shape))
        r = np.ascontiguousarray(rng.normal(size=block.shape))
        minv = rng.uniform(0.1, 1.0, size=block.shape[0])
        beta = rng.normal(size=block.shape[1])
        p_ref = minv[:, None] * r + beta * p
        _kernels.precond_p_update(p, r, minv, beta)
        assert np.abs(p - p_ref).max() <= 1e-15

    def test_col_dots(self, setup):
        _, _, block, rng = setup
        other = np.ascontiguousarray(rng.normal(size=block.shape))
        w = rng.uniform(0.1, 1.0, size=block.shape[0])
        assert np.allclose(_kernels.col_dots(block, other),
                           np.einsum("ij,ij->j", block, other), atol=1e-12)
        assert np.allclose(_kernels.col_dots_weighted(w, block, other),
                           np.einsum("i,ij,ij->j", w, block, other), atol=1e-12)

    def test_parallel_kernels_deterministic(self, setup):
        graph, adj, block, _ = setup
        diag = (1.0 + graph.degrees).astype(np.float64)
        indptr = adj.indptr.astype(np.int64)
        indices = adj.indices.astype(np.int64)
        out1, out2 = np.empty_like(block), np.empty_like(block)
        _kernels.spmm_shifted(indptr, indices, diag, block, out1)
        _kernels.spmm_shifted(indptr, indices, diag, block, out2)
        assert np.array_equal(out1, out2)


class TestConcurrentReads:
    def test_concurrent_topk_queries(self):
        graph = helpers.random_graph(150, 0.05, seed=6)
        idx = build_index(graph, forest_diag(graph))
        expected = {u: top_k_search(idx, u, 5).nodes.tolist() for u in range(graph.n)}
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda u: top_k_search(idx, u, 5).nodes.tolist(),
                                    range(graph.n)))
        assert results == [expected[u] for u in range(graph.n)]

    def test_concurrent_sketched_fits_identical(self):
        graph = helpers.random_graph(80, 0.08, seed=7)
        cfg = ApproxConfig(epsilon=0.3, jl_constant=1.0, seed=4)
        with ThreadPoolExecutor(max_workers=2) as pool:
            a, b = pool.map(lambda _: approx_forest_diag(graph, cfg), range(2))
        assert np.array_equal(a, b)


class TestCorruptIndexFiles:
    def _valid_bytes(self, tmp_path, g0):
        path = tmp_path / "ok.fsim"
        save_index(build_index(g0, helpers.TOY_DIAG), path)
        return bytearray(path.read_bytes())

    def test_truncated_payload(self, tmp_path, g0):
        raw = self._valid_bytes(tmp_path, g0)
        bad = tmp_path / "t.fsim"
        bad.write_bytes(bytes(raw[:-6]))
        with pytest.raises(ValueError, match="truncated"):
            load_index(bad)

    def test_broken_permutation(self, tmp_path, g0):
        raw = self._valid_bytes(tmp_path, g0)
        # order array occupies the last 4*n bytes; duplicate the first entry
        raw[-16:-12] = raw[-12:-8]
        bad = tmp_path / "p.fsim"
        bad.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="permutation"):
            load_index(bad)

    def test_unsorted_order(self, tmp_path, g0):
        raw = self._valid_bytes(tmp_path, g0)
        head = len(raw) - 16
        raw[head:head + 4], raw[head + 4:head + 8] = raw[head + 4:head + 8], raw[head:head + 4]
        bad = tmp_path / "s.fsim"
        bad.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="sort"):
            load_index(bad)

    def test_nonpositive_value(self, tmp_path, g0):
        raw = self._valid_bytes(tmp_path, g0)
        values_at = len(raw) - 16 - 32  # before order block
        raw[values_at:values_at + 8] = struct.pack("<d", -0.5)
        bad = tmp_path / "v.fsim"
        bad.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="non-positive"):
            load_index(bad)

    def test_unknown_version(self, tmp_path, g0):
        raw = self._valid_bytes(tmp_path, g0)
        raw[4:8] = struct.pack("<I", 99)
        bad = tmp_path / "ver.fsim"
        bad.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="version"):
            load_index(bad)


class TestDisconnectedGraphs:
    """Every path must accept disconnected graphs: the shifted Laplacian is
    positive definite regardless of connectivity."""

    @pytest.fixture
    def islands(self):
        # two triangles plus two isolated nodes
        return Graph(8, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])

    def test_exact_diag(self, islands):
        diag = forest_diag(islands)
        assert np.allclose(diag[:6], 0.5, atol=1e-12)  # triangle nodes
        assert np.allclose(diag[6:], 1.0, atol=1e-12)  # isolated nodes

    def test_sketched_matches_exact(self, islands):
        est = approx_forest_diag(islands, ApproxConfig(seed=3))
        assert np.abs(est - forest_diag(islands)).max() <= 1e-7

    def test_full_pipeline(self, islands):
        model = ForestSim().fit(islands)
        # isolated nodes are each other's perfect matches
        assert model.similarity(6, 7) == 1.0
        result = model.top_k(6, 1)
        assert result.nodes[0] == 7

    def test_structsim_isolated_pair(self, islands):
        idx = structsim_build_index(islands)
        assert structsim_score(idx, 6, 7) == 1.0


class TestAxiomBatteryOnBaselines:
    def test_structsim_automorphism_on_toy(self, g0):
        idx = structsim_build_index(g0)
        report = axiom_battery(lambda u, v: structsim_score(idx, u, v), g0,
                               trials=100, automorphic_pairs=[(2, 3)])
        assert report.range_check.passed and report.symmetry.passed
        assert report.automorphism.passed

    def test_rolesim_automorphism_on_toy(self, g0):
        from forestsim import RoleSim

        est = RoleSim(tol=1e-8).fit(g0)
        report = axiom_battery(est, g0, trials=100, automorphic_pairs=[(2, 3)])
        assert report.automorphism.passed and report.label_invariance.passed
