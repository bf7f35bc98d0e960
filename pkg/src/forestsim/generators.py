"""Seeded synthetic graph generators for benchmarks and tests.

Both generators are deterministic functions of their arguments: the same
seed always yields the identical edge set, independent of library versions
of any external graph package.
"""

import numpy as np

from .graph import Graph


def _rng(seed):
    return np.random.Generator(np.random.Philox(key=seed))


def random_regular_graph(n, degree, seed=0):
    """Random simple ``degree``-regular graph on ``n`` nodes.

    Uses the stub-pairing (configuration model) construction with targeted
    re-shuffling of the stubs involved in self-loops or duplicate edges
    until the graph is simple. ``n * degree`` must be even.
    """
    if n * degree % 2:
        raise ValueError("n * degree must be even")
    if degree >= n:
        raise ValueError("degree must be below n")
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), degree)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    u = np.minimum(pairs[:, 0], pairs[:, 1])
    v = np.maximum(pairs[:, 0], pairs[:, 1])
    for _ in range(1000):
        key = u * n + v
        order = np.argsort(key, kind="stable")
        dup = np.zeros(len(key), dtype=bool)
        sorted_key = key[order]
        dup[order[1:]] = sorted_key[1:] == sorted_key[:-1]
        bad = (u == v) | dup
        n_bad = int(bad.sum())
        if n_bad == 0:
            return Graph.from_edge_pairs(np.column_stack([u, v]), n=n)
        # re-pair the bad stubs together with an equal number of good pairs
        idx_bad = np.flatnonzero(bad)
        good = np.flatnonzero(~bad)
        take = min(len(good), max(n_bad, 8))
        idx = np.concatenate([idx_bad, rng.choice(good, size=take, replace=False)])
        st = np.concatenate([u[idx], v[idx]])
        rng.shuffle(st)
        repaired = st.reshape(-1, 2)
        u[idx] = np.minimum(repaired[:, 0], repaired[:, 1])
        v[idx] = np.maximum(repaired[:, 0], repaired[:, 1])
    raise RuntimeError("stub pairing failed to produce a simple graph")


def gnm_random_graph(n, m, seed=0):
    """Erdos-Renyi G(n, m): exactly ``m`` distinct edges drawn uniformly."""
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the {max_edges} possible edges")
    rng = _rng(seed)
    chosen = np.empty(0, dtype=np.int64)
    while len(chosen) < m:
        need = m - len(chosen)
        cand = rng.integers(0, n, size=(2 * need + 16, 2), dtype=np.int64)
        uu = np.minimum(cand[:, 0], cand[:, 1])
        vv = np.maximum(cand[:, 0], cand[:, 1])
        keys = uu[uu != vv] * n + vv[uu != vv]
        chosen = np.unique(np.concatenate([chosen, keys]))
        if len(chosen) > m:
            # drop a deterministic random subset to hit m exactly
            drop = rng.choice(len(chosen), size=len(chosen) - m, replace=False)
            chosen = np.delete(chosen, drop)
    return Graph.from_edge_pairs(np.column_stack([chosen // n, chosen % n]), n=n)


def gnp_random_graph(n, p, seed=0):
    """Erdos-Renyi G(n, p); each possible edge present independently."""
    rng = _rng(seed)
    iu = np.triu_indices(n, k=1)
    mask = rng.random(len(iu[0])) < p
    pairs = np.column_stack([iu[0][mask], iu[1][mask]])
    return Graph.from_edge_pairs(pairs, n=n) if len(pairs) else Graph(n, pairs)
