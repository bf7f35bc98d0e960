"""Sorted similarity index and the O(k) two-cursor top-k search.

The similarity between nodes ``u`` and ``v`` is the ratio
``min(w_u, w_v) / max(w_u, w_v)`` of their per-node diagonal values, and
``1 - similarity`` is a metric. Sorting nodes by value therefore places
every node's most similar peers adjacent to it in the sorted order, and a
top-k query reduces to merging the two sorted runs flanking the query
node, consuming O(k) comparisons regardless of graph size.

Tie rules (fixed so results are deterministic and oracle-testable): equal
values sort by ascending node id; when the two cursor candidates tie in
similarity, the high-value side wins.
"""

import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import FingerprintMismatchError

INDEX_MAGIC = b"FSIM"
INDEX_VERSION = 1
METHOD_EXACT = "exact"
METHOD_APPROX = "approx"


@dataclass(frozen=True)
class ForestIndex:
    """Precomputed search index over per-node diagonal values.

    Attributes
    ----------
    values : ndarray of float64
        Diagonal value per node, all in (0, 1].
    order : ndarray of int64
        Node ids sorted by ascending value (ties by ascending id).
    rank : ndarray of int64
        Inverse permutation: ``order[rank[u]] == u``.
    fingerprint : bytes
        SHA-256 digest of the canonical form of the source graph.
    method : str
        ``"exact"`` or ``"approx"``.
    epsilon, seed
        Approximation parameters; ``None`` for exact indexes.
    """

    values: np.ndarray
    order: np.ndarray
    rank: np.ndarray
    fingerprint: bytes
    method: str = METHOD_EXACT
    epsilon: float = None
    seed: int = None

    @property
    def n(self):
        return len(self.values)

    @property
    def method_tag(self):
        if self.method == METHOD_APPROX:
            return f"approx(epsilon={self.epsilon}, seed={self.seed})"
        return self.method


@dataclass
class TopKResult:
    """Ordered answer to one top-k query.

    ``nodes`` holds the k most similar nodes (query excluded), ``scores``
    the matching similarities in non-increasing order. ``comparisons``
    counts the candidate similarity evaluations the search consumed.
    """

    query: int
    nodes: np.ndarray
    scores: np.ndarray
    comparisons: int = 0

    def pairs(self):
        return list(zip(self.nodes.tolist(), self.scores.tolist()))

    def __len__(self):
        return len(self.nodes)


def build_index(graph, values, method=METHOD_EXACT, epsilon=None, seed=None):
    """Sort per-node values into a :class:`ForestIndex`.

    ``values`` must be positive and one per node of ``graph``. Ties are
    broken by ascending node id so the index is a deterministic function of
    its inputs.
    """
    values = np.array(values, dtype=np.float64, copy=True)  # callers keep theirs writable
    if values.shape != (graph.n,):
        raise ValueError(f"expected {graph.n} values, got shape {values.shape}")
    if not (values > 0.0).all():
        raise ValueError("diagonal values must be positive")
    if method not in (METHOD_EXACT, METHOD_APPROX):
        raise ValueError(f"unknown method {method!r}")
    if method == METHOD_APPROX and (epsilon is None or seed is None):
        raise ValueError("approx indexes must record their epsilon and seed")
    order = np.argsort(values, kind="stable").astype(np.int64)
    rank = np.empty_like(order)
    rank[order] = np.arange(graph.n, dtype=np.int64)
    values.setflags(write=False)
    order.setflags(write=False)
    rank.setflags(write=False)
    return ForestIndex(values, order, rank, graph.fingerprint(), method, epsilon, seed)


def forest_similarity(index, u, v):
    """Similarity ``min(w_u, w_v) / max(w_u, w_v)``, in [0, 1], 1 iff equal."""
    wu, wv = _value(index, u), _value(index, v)
    return min(wu, wv) / max(wu, wv)


def forest_distance(index, u, v):
    """Metric distance ``1 - similarity`` (satisfies the triangle inequality)."""
    return 1.0 - forest_similarity(index, u, v)


def _value(index, u):
    if not 0 <= u < index.n:
        raise KeyError(f"node id {u} out of range for n={index.n}")
    return index.values[u]


def top_k_search(index, u, k):
    """The k nodes most similar to ``u``, in non-increasing score order.

    Strict single-query contract: requires ``1 <= k <= n - 1``. Runs the
    two-cursor merge over the sorted order, so the number of candidate
    evaluations is 2k independent of n.
    """
    _value(index, u)
    if not 1 <= k <= index.n - 1:
        raise ValueError(f"k must lie in [1, {index.n - 1}], got {k}")
    return _walk(index, u, k)


def _walk(index, u, k):
    values, order = index.values, index.order
    n = index.n
    pos = index.rank[u]
    wu = values[u]
    left, right = pos - 1, pos + 1
    nodes = np.empty(k, dtype=np.int64)
    scores = np.empty(k, dtype=np.float64)
    comparisons = 0
    for i in range(k):
        sim_left = values[order[left]] / wu if left >= 0 else -np.inf
        sim_right = wu / values[order[right]] if right < n else -np.inf
        comparisons += 2
        if sim_left > sim_right:
            nodes[i] = order[left]
            scores[i] = sim_left
            left -= 1
        else:
            nodes[i] = order[right]
            scores[i] = sim_right
            right += 1
    return TopKResult(int(u), nodes, scores, comparisons)


def top_k_all(index, k):
    """Batch top-k for every node.

    Over-large ``k`` is clamped to ``n - 1`` with a warning (batch
    convenience; single queries stay strict).
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    k_eff = min(k, index.n - 1)
    if k_eff < k:
        warnings.warn(f"k={k} exceeds n-1={index.n - 1}; clamping", stacklevel=2)
    return [_walk(index, u, k_eff) if k_eff else TopKResult(u, np.empty(0, np.int64), np.empty(0))
            for u in range(index.n)]


def save_index(index, path):
    """Write the index in the binary format (little-endian).

    Layout: magic ``FSIM``, u32 version, u32 n, u8 method (0 exact,
    1 approx), for approx an f64 epsilon and u64 seed, a 32-byte graph
    fingerprint, then n f64 values and n u32 sorted node ids. The rank
    permutation is recomputed on load.
    """
    with open(path, "wb") as fh:
        fh.write(INDEX_MAGIC)
        fh.write(struct.pack("<II", INDEX_VERSION, index.n))
        if index.method == METHOD_APPROX:
            fh.write(struct.pack("<B", 1))
            fh.write(struct.pack("<dQ", float(index.epsilon), int(index.seed)))
        else:
            fh.write(struct.pack("<B", 0))
        fh.write(index.fingerprint)
        fh.write(index.values.astype("<f8").tobytes())
        fh.write(index.order.astype("<u4").tobytes())


def load_index(path):
    """Read an index written by :func:`save_index`, validating structure."""
    def read_exact(fh, count, what):
        raw = fh.read(count)
        if len(raw) != count:
            raise ValueError(f"truncated index file ({what})")
        return raw

    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != INDEX_MAGIC:
            raise ValueError(f"not an index file: bad magic {magic!r}")
        version, n = struct.unpack("<II", read_exact(fh, 8, "header"))
        if version != INDEX_VERSION:
            raise ValueError(f"unsupported index version {version}")
        (method_code,) = struct.unpack("<B", read_exact(fh, 1, "method"))
        epsilon = seed = None
        method = METHOD_EXACT
        if method_code == 1:
            epsilon, seed = struct.unpack("<dQ", read_exact(fh, 16, "parameters"))
            method = METHOD_APPROX
        elif method_code != 0:
            raise ValueError(f"unknown method code {method_code}")
        fingerprint = read_exact(fh, 32, "fingerprint")
        values = np.frombuffer(read_exact(fh, 8 * n, "values"), dtype="<f8").astype(np.float64)
        order = np.frombuffer(read_exact(fh, 4 * n, "order"), dtype="<u4").astype(np.int64)
    if not (values > 0.0).all():
        raise ValueError("corrupt index: non-positive values")
    if not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("corrupt index: order is not a permutation")
    sorted_vals = values[order]
    if (np.diff(sorted_vals) < 0).any():
        raise ValueError("corrupt index: order does not sort the values")
    rank = np.empty_like(order)
    rank[order] = np.arange(n, dtype=np.int64)
    for arr in (values, order, rank):
        arr.setflags(write=False)
    return ForestIndex(values, order, rank, fingerprint, method,
                       epsilon if method == METHOD_APPROX else None,
                       seed if method == METHOD_APPROX else None)


def check_fingerprint(index, graph):
    """Raise :class:`FingerprintMismatchError` unless index matches graph."""
    if index.fingerprint != graph.fingerprint():
        raise FingerprintMismatchError(
            "index fingerprint does not match the graph; "
            "the graph changed since precomputation"
        )
