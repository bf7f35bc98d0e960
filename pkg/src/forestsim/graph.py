"""Immutable undirected simple graphs with matrix-free Laplacian operators.

The loader normalizes arbitrary edge-list text into a canonical form:
external node tokens are remapped to dense internal ids ``0..n-1``,
duplicate edges are collapsed, self-loops dropped, and every edge is stored
once as ``(u, v)`` with ``u < v`` in lexicographic order. The result is
independent of the input line order.
"""

import hashlib
import io
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .exceptions import GraphParseError

COMMENT_PREFIXES = ("#", "%")


class NodeIdMap:
    """Bijection between external node tokens and internal ids ``0..n-1``.

    Parameters
    ----------
    external_ids : sequence of str
        External token for each internal id, position ``i`` maps to
        internal id ``i``.
    """

    def __init__(self, external_ids):
        self._to_external = [str(t) for t in external_ids]
        self._to_internal = {t: i for i, t in enumerate(self._to_external)}
        if len(self._to_internal) != len(self._to_external):
            raise ValueError("external ids must be unique")

    def __len__(self):
        return len(self._to_external)

    def to_internal(self, external):
        try:
            return self._to_internal[str(external)]
        except KeyError:
            raise KeyError(f"unknown node id {external!r}") from None

    def to_external(self, internal):
        return self._to_external[internal]

    @property
    def external_ids(self):
        return list(self._to_external)

    @classmethod
    def identity(cls, n):
        """Map internal ids to their own decimal string, for synthetic graphs."""
        return cls([str(i) for i in range(n)])


class Graph:
    """Undirected unweighted simple graph with node ids ``0..n-1``.

    Stores sorted compressed adjacency plus the canonical edge list
    ``(u, v), u < v``. Instances are immutable after construction and safe
    for concurrent reads.
    """

    def __init__(self, n, edges):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n <= 0:
            raise ValueError("graph must contain at least one node")
        m = edges.shape[0]
        if m:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (edges[:, 0] >= edges[:, 1]).any():
                raise ValueError("edges must be canonical: u < v (no self-loops)")
            keys = edges[:, 0] * n + edges[:, 1]
            if (np.diff(keys) <= 0).any():
                raise ValueError("edges must be sorted and free of duplicates")

        self.n = int(n)
        self.m = int(m)
        self.edges = edges

        ends = np.concatenate([edges[:, 0], edges[:, 1]]) if m else np.empty(0, np.int64)
        self.degrees = np.bincount(ends, minlength=n).astype(np.int64)

        targets = np.concatenate([edges[:, 1], edges[:, 0]]) if m else ends
        order = np.lexsort((targets, ends))  # neighbor lists sorted by id
        self.indices = targets[order]
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.indptr[1:])
        for arr in (self.edges, self.degrees, self.indices, self.indptr):
            arr.setflags(write=False)
        self._adjacency = None
        self._incidence = None

    @classmethod
    def from_edge_pairs(cls, pairs, n=None):
        """Build a graph from raw (u, v) pairs.

        Self-loops are dropped, duplicates collapsed, orientation
        canonicalized. ``n`` defaults to ``max id + 1``.
        """
        pairs = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                           dtype=np.int64).reshape(-1, 2)
        if n is None:
            if pairs.size == 0:
                raise ValueError("cannot infer node count from an empty edge set")
            n = int(pairs.max()) + 1
        u = np.minimum(pairs[:, 0], pairs[:, 1])
        v = np.maximum(pairs[:, 0], pairs[:, 1])
        keep = u != v
        u, v = u[keep], v[keep]
        if len(u):
            keys = np.unique(u * np.int64(n) + v)
            u, v = keys // n, keys % n
        return cls(n, np.column_stack([u, v]))

    def neighbors(self, u):
        """Sorted neighbor ids of node ``u`` (read-only view)."""
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def adjacency(self):
        """Adjacency as a cached scipy CSR matrix with unit weights."""
        if self._adjacency is None:
            data = np.ones(2 * self.m, dtype=np.float64)
            self._adjacency = sp.csr_matrix(
                (data, self.indices.astype(np.int64), self.indptr), shape=(self.n, self.n)
            )
        return self._adjacency

    def incidence(self):
        """Signed edge-node incidence as an ``m x n`` CSR matrix.

        Row ``e`` for the canonical edge ``(u, v), u < v`` carries ``+1`` at
        ``u`` and ``-1`` at ``v``. Any fixed sign convention yields the same
        Laplacian ``B.T @ B``.
        """
        if self._incidence is None:
            m = self.m
            rows = np.repeat(np.arange(m, dtype=np.int64), 2)
            cols = self.edges.ravel()
            data = np.tile(np.array([1.0, -1.0]), m)
            self._incidence = sp.csr_matrix((data, (rows, cols)), shape=(m, self.n))
        return self._incidence

    def canonical_edge_text(self):
        """Canonical serialization: sorted internal-id edge list, one per line."""
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    def fingerprint(self):
        """SHA-256 digest of the canonical form, including node/edge counts.

        The count header makes isolated nodes part of the fingerprint even
        though they cannot appear in the edge lines.
        """
        h = hashlib.sha256()
        h.update(f"{self.n} {self.m}\n".encode())
        h.update(self.canonical_edge_text().encode())
        return h.digest()

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.edges, other.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _token_sort_key(tokens):
    # numeric order when every token is an integer, else lexicographic
    try:
        return sorted(tokens, key=int)
    except ValueError:
        return sorted(tokens)


def load_edge_list(source):
    """Parse whitespace-delimited edge-list text into a graph.

    Parameters
    ----------
    source : str, pathlib.Path or text stream
        Path to a file, or an open text stream, or a string containing the
        edge list itself when it holds newlines.
    Lines starting with ``#`` or ``%`` are comments; every other non-blank
    line must hold exactly two node tokens.

    Returns
    -------
    (Graph, NodeIdMap)

    Raises
    ------
    GraphParseError
        On malformed lines (with the line number) or when no nodes remain.
    """
    if isinstance(source, io.TextIOBase):
        lines = source.read().splitlines()
    elif isinstance(source, Path):
        lines = source.read_text().splitlines()
    elif isinstance(source, str) and source and "\n" not in source and Path(source).is_file():
        lines = Path(source).read_text().splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()

    raw_pairs = []
    tokens = set()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"expected two node tokens, got {len(parts)}: {stripped!r}", lineno
            )
        raw_pairs.append(parts)
        tokens.update(parts)

    if not tokens:
        raise GraphParseError("no edges found: empty graph")

    id_map = NodeIdMap(_token_sort_key(tokens))
    pairs = np.array(
        [(id_map.to_internal(a), id_map.to_internal(b)) for a, b in raw_pairs],
        dtype=np.int64,
    )
    graph = Graph.from_edge_pairs(pairs, n=len(id_map))
    return graph, id_map


def save_edge_list(graph, path):
    """Write the canonical serialization of ``graph`` to ``path``."""
    Path(path).write_text(graph.canonical_edge_text())


def shifted_laplacian_apply(graph, x):
    """Apply ``I + L`` matrix-free: ``y_i = (1 + d_i) x_i - sum_{j~i} x_j``.

    ``x`` may be a vector of length ``n`` or an ``(n, k)`` block.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != graph.n:
        raise ValueError(f"expected leading dimension {graph.n}, got {x.shape[0]}")
    scale = 1.0 + graph.degrees
    if x.ndim == 1:
        return scale * x - graph.adjacency() @ x
    return scale[:, None] * x - graph.adjacency() @ x


def incidence_apply(graph, x):
    """Apply the incidence operator: ``out[e] = x[u] - x[v]`` per edge ``(u, v)``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != graph.n:
        raise ValueError(f"expected leading dimension {graph.n}, got {x.shape[0]}")
    return x[graph.edges[:, 0]] - x[graph.edges[:, 1]]


def as_graph(X, n_nodes=None):
    """Coerce supported graph representations to a :class:`Graph`.

    Accepted inputs:

    - :class:`Graph` (returned unchanged);
    - square scipy sparse matrix or square numpy array, read as a symmetric
      adjacency pattern (nonzero = edge; diagonal ignored);
    - ``(m, 2)`` integer array or list of pairs, read as an edge list
      (``n_nodes`` overrides the inferred node count);
    - objects exposing ``nodes`` and ``edges`` iterables (networkx-style).
    """
    if isinstance(X, Graph):
        return X
    if sp.issparse(X):
        if X.shape[0] != X.shape[1]:
            raise ValueError("sparse adjacency must be square")
        pattern = X.astype(bool).astype(np.int8)
        if (pattern != pattern.T).nnz:
            raise ValueError("adjacency must be structurally symmetric")
        coo = sp.triu(pattern, k=1).tocoo()
        n = X.shape[0]
        if coo.nnz == 0:
            return Graph(n, np.empty((0, 2), dtype=np.int64))
        return Graph.from_edge_pairs(np.column_stack([coo.row, coo.col]), n=n)
    if hasattr(X, "nodes") and hasattr(X, "edges"):
        nodes = list(X.nodes)
        try:
            nodes = sorted(nodes)
        except TypeError:
            nodes = sorted(nodes, key=str)
        idx = {v: i for i, v in enumerate(nodes)}
        pairs = [(idx[a], idx[b]) for a, b in X.edges]
        if not pairs:
            return Graph(len(nodes), np.empty((0, 2), dtype=np.int64))
        return Graph.from_edge_pairs(pairs, n=len(nodes))
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1] and arr.shape[0] != 2:
        return as_graph(sp.csr_matrix(arr))
    if arr.ndim == 2 and arr.shape[1] == 2:
        if arr.shape[0] == 2 and n_nodes is None and _looks_like_adjacency(arr):
            return as_graph(sp.csr_matrix(arr))
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.equal(np.mod(arr, 1), 0).all():
                raise ValueError("edge arrays must hold integer node ids")
        return Graph.from_edge_pairs(arr.astype(np.int64), n=n_nodes)
    raise TypeError(f"cannot interpret {type(X).__name__} as a graph")


def _looks_like_adjacency(arr):
    return (np.isin(arr, (0, 1)).all() and arr[0, 0] == 0 and arr[1, 1] == 0
            and arr[0, 1] == arr[1, 0])
