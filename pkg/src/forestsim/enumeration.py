"""Brute-force enumeration of spanning rooted forests.

This is the combinatorial ground-truth oracle: it literally walks every
acyclic edge subset, and for each resulting forest multiplies out the valid
root markings (one root per tree, so a forest with trees of sizes
``s_1..s_t`` yields ``prod s_i`` rooted forests). All counting is exact
integer arithmetic. The exponential cost restricts it to tiny graphs.
"""

from dataclasses import dataclass

from .exceptions import GraphSizeError

ORACLE_NODE_LIMIT = 10
ORACLE_EDGE_LIMIT = 16


@dataclass
class ForestEnsemble:
    """Exhaustive census of the spanning rooted forests of one graph.

    Attributes
    ----------
    total : int
        Number of spanning rooted forests.
    rooted_count : list of int
        Per node ``i``, the number of forests in which ``i`` is a root.
    joint_count : list of list of int
        ``joint_count[i][j]``: forests where ``i`` and ``j`` lie in the same
        tree and that tree is rooted at ``i``. ``joint_count[i][i]`` equals
        ``rooted_count[i]``.
    root_tree_size_sum : list of int
        Per node ``i``, the sum over forests rooted at ``i`` of the size of
        the tree containing ``i``.
    """

    n: int
    total: int
    rooted_count: list
    joint_count: list
    root_tree_size_sum: list


def enumerate_rooted_forests(graph):
    """Count spanning rooted forests of ``graph`` by direct enumeration.

    Walks the inclusion tree of edge subsets, pruning any branch whose next
    edge would close a cycle (union-find with explicit rollback, no path
    compression so undo stays trivial). Limits: n <= 10, m <= 16.
    """
    n, m = graph.n, graph.m
    if n > ORACLE_NODE_LIMIT or m > ORACLE_EDGE_LIMIT:
        raise GraphSizeError(
            f"enumeration oracle is limited to n<={ORACLE_NODE_LIMIT}, "
            f"m<={ORACLE_EDGE_LIMIT}; got n={n}, m={m}"
        )
    edges = [(int(u), int(v)) for u, v in graph.edges]

    parent = list(range(n))
    size = [1] * n
    total = 0
    rooted = [0] * n
    joint = [[0] * n for _ in range(n)]
    size_sum = [0] * n

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def account():
        nonlocal total
        comps = {}
        for i in range(n):
            comps.setdefault(find(i), []).append(i)
        prod = 1
        for members in comps.values():
            prod *= len(members)
        total += prod
        for members in comps.values():
            s = len(members)
            q = prod // s
            for i in members:
                rooted[i] += q
                size_sum[i] += prod  # == s * q: every root marking of i's tree
                row = joint[i]
                for j in members:
                    row[j] += q

    def descend(i):
        if i == m:
            account()
            return
        descend(i + 1)
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            descend(i + 1)
            parent[rv] = rv
            size[ru] -= size[rv]

    descend(0)
    return ForestEnsemble(n, total, rooted, joint, size_sum)


def average_root_tree_size(ensemble, u):
    """Mean size of the tree rooted at ``u``, over all forests rooting ``u``."""
    return ensemble.root_tree_size_sum[u] / ensemble.rooted_count[u]


def shifted_laplacian_determinant(graph):
    """``det(I + L)`` as an exact integer (fraction-free Bareiss elimination).

    Cross-checks the enumeration total via the matrix-forest theorem without
    floating-point drift.
    """
    n = graph.n
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = 1 + int(graph.degrees[i])
    for u, v in graph.edges:
        mat[u][v] -= 1
        mat[v][u] -= 1
    return _det_bareiss(mat)


def _det_bareiss(mat):
    mat = [row[:] for row in mat]
    n = len(mat)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, n):
                if mat[r][k] != 0:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    return sign * mat[-1][-1]
