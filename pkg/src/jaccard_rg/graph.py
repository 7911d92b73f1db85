"""Erdős–Rényi graphs stored as packed bit rows.

Vertices are 1-based in every public function, matching the edge-list
format; the packed storage is 0-based.
"""

import math

import numpy as np

from . import rng as _rng
from ._validation import check_count, check_probability
from .errors import ParameterError, ValidationError

WORD_BITS = 64
# upper-triangle entries drawn per chunk when sampling densely
_SAMPLE_CHUNK = 1 << 22
# below this p, "auto" sampling switches to geometric skipping
GEOMETRIC_THRESHOLD = 0.05


def n_words(n):
    return (n + WORD_BITS - 1) // WORD_BITS


class Graph:
    """Immutable simple undirected graph on vertices ``1..n``.

    ``rows[i]`` is the neighborhood of vertex ``i + 1`` as ``n_words(n)``
    little-endian ``uint64`` words; bit ``k`` of row ``i`` is the indicator
    of the edge ``{i + 1, k + 1}``.
    """

    __slots__ = ("_n", "_rows")

    def __init__(self, n, rows):
        n = check_count(n, minimum=2)
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (n, n_words(n)):
            raise ValidationError(
                f"rows must have shape {(n, n_words(n))}, got {rows.shape}"
            )
        rows = rows.copy()
        rows.flags.writeable = False
        self._n = n
        self._rows = rows

    @property
    def n(self):
        return self._n

    @property
    def rows(self):
        return self._rows

    def __repr__(self):
        return f"Graph(n={self._n}, edges={self.edge_count()})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._rows, other._rows)

    __hash__ = None

    def _vertex(self, i):
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
            raise ParameterError(f"vertex must be an integer, got {i!r}")
        if not 1 <= i <= self._n:
            raise ParameterError(f"vertex {i} outside [1, {self._n}]")
        return int(i) - 1

    def has_edge(self, i, j):
        a, b = self._vertex(i), self._vertex(j)
        return bool((int(self._rows[a, b // WORD_BITS]) >> (b % WORD_BITS)) & 1)

    def degree(self, i):
        """Popcount of the row of vertex ``i`` (1-based)."""
        return int(np.bitwise_count(self._rows[self._vertex(i)]).sum())

    def degrees(self):
        """All degrees as an ``int64`` array indexed 0..n-1."""
        return np.bitwise_count(self._rows).sum(axis=1, dtype=np.int64)

    def edge_count(self):
        return int(self.degrees().sum()) // 2

    def to_dense(self):
        """Boolean adjacency matrix (0-based)."""
        as_bytes = self._rows.view(np.uint8)
        return np.unpackbits(as_bytes, axis=1, count=self._n, bitorder="little").astype(bool)

    def edges(self):
        """Yield edges ``(i, j)`` with ``i < j``, 1-based, in row-major order."""
        dense = self.to_dense()
        ii, jj = np.nonzero(np.triu(dense, k=1))
        for a, b in zip(ii.tolist(), jj.tolist()):
            yield a + 1, b + 1


def _from_dense(adj):
    n = adj.shape[0]
    padded = np.zeros((n, n_words(n) * WORD_BITS), dtype=bool)
    padded[:, :n] = adj
    packed = np.packbits(padded, axis=1, bitorder="little")
    return Graph(n, packed.view("<u8").astype(np.uint64))


def _from_index_arrays(n, a, b):
    """Build a graph from 0-based endpoint arrays (assumed valid, a != b)."""
    rows = np.zeros((n, n_words(n)), dtype=np.uint64)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    one = np.uint64(1)
    for src, dst in ((a, b), (b, a)):
        bits = np.left_shift(one, (dst % WORD_BITS).astype(np.uint64))
        np.bitwise_or.at(rows, (src, dst // WORD_BITS), bits)
    return Graph(n, rows)


def from_edge_list(n, edges):
    """Graph on ``1..n`` with the given unordered pairs; duplicates are idempotent."""
    n = check_count(n, minimum=2)
    pairs = [tuple(e) for e in edges]
    if not pairs:
        return Graph(n, np.zeros((n, n_words(n)), dtype=np.uint64))
    arr = np.asarray(pairs)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("edges must be pairs of vertices")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValidationError("edge endpoints must be integers")
    bad = (arr < 1) | (arr > n)
    if bad.any():
        k = int(np.argmax(bad.any(axis=1)))
        raise ValidationError(f"edge {pairs[k]} has an endpoint outside [1, {n}]")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        k = int(np.argmax(loops))
        raise ValidationError(f"self-loop {pairs[k]} is not allowed")
    return _from_index_arrays(n, arr[:, 0] - 1, arr[:, 1] - 1)


def _row_offsets(n):
    # linear index of (i, i+1) in the row-major strict upper triangle
    i = np.arange(n, dtype=np.int64)
    return i * (2 * n - i - 1) // 2


def pair_from_linear(n, k):
    """Map linear upper-triangle indices to 0-based ``(i, j)`` with ``i < j``."""
    k = np.asarray(k, dtype=np.int64)
    offsets = _row_offsets(n)
    i = np.searchsorted(offsets, k, side="right") - 1
    j = k - offsets[i] + i + 1
    return i, j


def _sample_bernoulli(n, p, gen):
    adj = np.zeros((n, n), dtype=bool)
    offsets = _row_offsets(n)
    # whole rows per chunk keep the draw order equal to the linear edge index
    start_row = 0
    while start_row < n - 1:
        stop_row = start_row + 1
        width = n - 1 - start_row
        while stop_row < n - 1 and width + (n - 1 - stop_row) <= _SAMPLE_CHUNK:
            width += n - 1 - stop_row
            stop_row += 1
        draws = gen.random(width) < p
        lo = offsets[start_row]
        hit = np.flatnonzero(draws) + lo
        i, j = pair_from_linear(n, hit)
        adj[i, j] = True
        start_row = stop_row
    adj |= adj.T
    return _from_dense(adj)


def _sample_geometric(n, p, gen):
    total = n * (n - 1) // 2
    expected = total * p
    chunk = max(64, int(expected + 6 * math.sqrt(expected + 1)) + 64)
    log_q = math.log1p(-p)
    hits = []
    last = -1
    while True:
        # inversion: ceil(log(1 - U) / log(1 - p)) ~ Geometric(p) on 1, 2, ...
        u = gen.random(chunk)
        with np.errstate(over="ignore"):
            gaps = np.ceil(np.log1p(-u) / log_q)
        gaps = np.clip(gaps, 1, total + 1).astype(np.int64)
        pos = last + np.cumsum(gaps)
        inside = pos[pos < total]
        hits.append(inside)
        if inside.size < pos.size:
            break
        last = int(pos[-1])
    k = np.concatenate(hits)
    i, j = pair_from_linear(n, k)
    return _from_index_arrays(n, i, j)


def sample_gnp(n, p, seed, *, trial=0, method="auto"):
    """Sample G(n, p) deterministically from ``(seed, trial)``.

    ``method="bernoulli"`` draws one uniform per vertex pair in row-major
    order, so the indicator of pair number ``k`` is a function of
    ``(seed, n, trial, k)`` alone.  ``method="geometric"`` jumps between
    successes with geometric gaps; it has the same law but a different
    realization for a given seed.  ``"auto"`` picks geometric for small p.
    """
    n = check_count(n, minimum=2)
    p = check_probability(p)
    if method == "auto":
        method = "geometric" if 0.0 < p < GEOMETRIC_THRESHOLD else "bernoulli"
    if method not in ("bernoulli", "geometric"):
        raise ParameterError(f"unknown sampling method {method!r}")
    if p == 0.0:
        return Graph(n, np.zeros((n, n_words(n)), dtype=np.uint64))
    if p == 1.0:
        adj = ~np.eye(n, dtype=bool)
        return _from_dense(adj)
    gen = _rng.stream(seed, _rng.GRAPH_STREAM, n, trial)
    if method == "geometric":
        return _sample_geometric(n, p, gen)
    return _sample_bernoulli(n, p, gen)


def degree(g, i):
    return g.degree(i)
