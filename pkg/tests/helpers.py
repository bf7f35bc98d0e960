"""Shared test fixtures and independent oracles."""

import itertools

import numpy as np

from forestsim import Graph
from forestsim.generators import gnp_random_graph


def toy_graph():
    """The 4-node running example: edges (0,1), (0,2), (0,3), (2,3).

    Loaded from 1-based text this is nodes 1..4 with edges
    12, 13, 14, 34; diagonal (0.4, 0.6, 0.475, 0.475).
    """
    return Graph(4, [(0, 1), (0, 2), (0, 3), (2, 3)])


TOY_DIAG = np.array([16, 24, 19, 19]) / 40.0
TOY_MATRIX = np.array([
    [16, 8, 8, 8],
    [8, 24, 4, 4],
    [8, 4, 19, 9],
    [8, 4, 9, 19],
]) / 40.0


def k2():
    return Graph(2, [(0, 1)])


def k3():
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


def complete_graph(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


def star_graph(leaves):
    """Hub-and-spoke graph: node 0 is the hub, 1..leaves are the leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def single_node():
    return Graph(1, np.empty((0, 2), dtype=np.int64))


def random_graph(n, p=0.3, seed=0):
    return gnp_random_graph(n, p, seed=seed)


def brute_force_top_k(index, u, k):
    """O(n log n) oracle replicating the two-cursor tie rules exactly.

    Candidates sort by descending score; equal scores put high-value-side
    nodes (rank above the query) first in ascending rank, then low-side
    nodes in descending rank -- precisely the order the cursor merge emits.
    """
    w, rank = index.values, index.rank
    wu = w[u]
    entries = []
    for v in range(index.n):
        if v == u:
            continue
        wv = w[v]
        score = min(wu, wv) / max(wu, wv)
        if rank[v] > rank[u]:
            key = (-score, 0, rank[v])
        else:
            key = (-score, 1, -rank[v])
        entries.append((key, v, score))
    entries.sort(key=lambda e: e[0])
    top = entries[:k]
    return np.array([e[1] for e in top]), np.array([e[2] for e in top])


def all_connected_graphs(max_nodes):
    """Yield every labeled connected graph with 1..max_nodes nodes."""
    for n in range(1, max_nodes + 1):
        possible = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(possible)):
            edges = [possible[i] for i in range(len(possible)) if mask >> i & 1]
            if _is_connected(n, edges):
                yield Graph(n, edges) if edges else Graph(n, np.empty((0, 2), np.int64))


def _is_connected(n, edges):
    if n == 1:
        return True
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n
