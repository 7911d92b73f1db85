"""Pair statistics and the all-pairs bit-parallel kernel.

For vertices ``i != j`` the common-neighbor count is
``S = popcount(row_i & row_j)`` and the union-neighborhood size is
``T = popcount(row_i | row_j) - 2 * I_ij``: the diagonal is zero, so the
only bits of ``{i, j}`` that can appear are bit ``j`` of row ``i`` and bit
``i`` of row ``j``, both equal to ``I_ij``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from ._validation import check_probability
from .errors import ParameterError
from .graph import WORD_BITS

# entries per (block_rows x n) count block handed out by iter_count_blocks
_KERNEL_ENTRIES = 1 << 20


@dataclass(frozen=True)
class PairStats:
    s: int
    t: int
    j: float


@dataclass(frozen=True)
class GraphSummary:
    """Average Jaccard index of one realization and its decomposition terms.

    ``p2`` is the literal index sum from :func:`path2_sum`; ``paths2`` is the
    number of paths of length two, ``sum_k C(d_k, 2)``.  The two agree in
    expectation but only ``paths2`` makes :meth:`decomposition` exact.
    """

    n: int
    p: float
    j_avg: float
    p1: int
    p2: int
    paths2: int
    r_sum: float

    def decomposition(self):
        """Right-hand side of the edge / path-sum / remainder expansion of ``j_avg``."""
        n, p = self.n, self.p
        q = 2.0 - p
        pairs = n * (n - 1)
        return (
            p / q
            - 4.0 * self.p1 / (pairs * q * q)
            + 4.0 * self.paths2 / (pairs * (n - 2) * p * q * q)
            + 2.0 * self.r_sum / pairs
        )

    def residual(self):
        return abs(self.j_avg - self.decomposition())


def convention_value(p):
    """Jaccard value used when the union neighborhood is empty."""
    return p / (2.0 - p)


def pair_stats(g, i, j, p):
    """``(S, T, J)`` for the 1-based vertex pair ``(i, j)``."""
    p = check_probability(p)
    a, b = g._vertex(i), g._vertex(j)
    if a == b:
        raise ParameterError("pair_stats needs two distinct vertices")
    ra, rb = g.rows[a], g.rows[b]
    s = int(np.bitwise_count(ra & rb).sum())
    edge = (int(ra[b // WORD_BITS]) >> (b % WORD_BITS)) & 1
    t = int(np.bitwise_count(ra | rb).sum()) - 2 * edge
    jac = s / t if t > 0 else convention_value(p)
    return PairStats(s, t, jac)


def _block_rows(g):
    return max(1, _KERNEL_ENTRIES // g.n)


def iter_count_blocks(g):
    """Yield ``(start, stop, S, T)`` row blocks of the all-pairs count matrices.

    ``S`` and ``T`` have shape ``(stop - start, n)``; only the entries with
    column index greater than the (0-based) row index are filled.  Each
    pair costs ``2 * n_words`` AND/OR + popcount word operations.
    """
    n = g.n
    step = _block_rows(g)
    for start in range(0, n - 1, step):
        stop = min(n - 1, start + step)
        s, t = _kernel.count_rows(g.rows, start, stop)
        yield start, stop, s, t


def pair_count_matrices(g):
    """Full symmetric ``(S, T)`` matrices with zero diagonals."""
    n = g.n
    s_all = np.zeros((n, n), dtype=np.int64)
    t_all = np.zeros((n, n), dtype=np.int64)
    for start, stop, s, t in iter_count_blocks(g):
        s_all[start:stop] = s
        t_all[start:stop] = t
    return s_all + s_all.T, t_all + t_all.T


def iter_pair_stats(g, p):
    """Stream ``((i, j), PairStats)`` over all pairs ``i < j`` (1-based).

    Memory stays at one kernel block; the O(n^2) matrix of values is never
    materialized.
    """
    p = check_probability(p)
    conv = convention_value(p)
    n = g.n
    for start, stop, s, t in iter_count_blocks(g):
        for r in range(stop - start):
            a = start + r
            for b in range(a + 1, n):
                sv, tv = int(s[r, b]), int(t[r, b])
                yield (a + 1, b + 1), PairStats(sv, tv, sv / tv if tv > 0 else conv)


def _check_average_input(g, p):
    if g.n < 3:
        raise ParameterError("average over pairs needs n >= 3")
    return check_probability(p)


def average_jaccard(g, p):
    """Mean Jaccard index over all ``C(n, 2)`` pairs."""
    p = _check_average_input(g, p)
    j_rows, _ = _kernel.row_sums(g.rows, p, convention_value(p), False)
    return math.fsum(j_rows.tolist()) / (g.n * (g.n - 1) // 2)


def edge_count(g):
    return g.edge_count()


def path2_sum(g):
    """Literal double sum ``sum_{i<j} sum_{k != i,j} I_ij I_ik``.

    Equals ``sum over edges (i, j), i < j, of (d_i - 1)``.  Each 2-path is
    weighted by how many of its endpoints have a larger index than its
    center, so this is not the 2-path count (a star centered at vertex 1
    with three leaves gives 6, not 3).
    """
    if g.n < 3:
        raise ParameterError("path2_sum needs n >= 3")
    deg = g.degrees()
    above = _neighbors_above(g)
    return int(((deg - 1) * above).sum())


def paths2_count(g):
    """Number of paths of length two, ``sum_k d_k (d_k - 1) / 2``."""
    deg = g.degrees()
    return int((deg * (deg - 1) // 2).sum())


def _neighbors_above(g):
    # popcount of each row restricted to bits with index > row index
    n, w = g.rows.shape
    r = np.arange(n)
    word = r // WORD_BITS
    shift = (r % WORD_BITS).astype(np.uint64)
    partial = g.rows[r, word] >> shift >> np.uint64(1)
    counts = np.bitwise_count(partial).astype(np.int64)
    later = np.arange(w)[None, :] > word[:, None]
    counts += np.bitwise_count(np.where(later, g.rows, np.uint64(0))).sum(axis=1, dtype=np.int64)
    return counts


def v_statistic(i_ik, i_jk, p):
    """``(2 - p) I_ik I_jk - p (I_ik or I_jk)``; mean 0 under Bernoulli(p) inputs."""
    for bit in (i_ik, i_jk):
        if bit not in (0, 1):
            raise ParameterError(f"indicator must be 0 or 1, got {bit!r}")
    p = check_probability(p)
    return (2.0 - p) * (i_ik & i_jk) - p * (i_ik | i_jk)


def _remainder_values(s, t, n, p):
    q = 2.0 - p
    scale = (n - 2) * p * q
    lead = (q * s - p * t) / ((n - 2) * p * q * q)
    out = np.zeros(np.shape(s), dtype=np.float64)
    ratio = np.divide(scale, t, out=np.zeros_like(out), where=t > 0)
    np.multiply(lead, ratio - 1.0, out=out, where=np.asarray(t) > 0)
    return out


def remainder(g, i, j, p):
    """Second-order term of the expansion of ``J_ij`` around ``p / (2 - p)``.

    Zero when the union neighborhood is empty.
    """
    p = check_probability(p)
    if p == 0.0:
        raise ParameterError("remainder is undefined at p = 0")
    if g.n < 3:
        raise ParameterError("remainder needs n >= 3")
    st = pair_stats(g, i, j, p)
    if st.t == 0:
        return 0.0
    n, q = g.n, 2.0 - p
    lead = (q * st.s - p * st.t) / ((n - 2) * p * q * q)
    return lead * ((n - 2) * p * q / st.t - 1.0)


def graph_summary(g, p):
    """Average Jaccard index with edge count, path sum and remainder sum."""
    p = _check_average_input(g, p)
    if p == 0.0:
        raise ParameterError("graph_summary is undefined at p = 0")
    n = g.n
    j_rows, r_rows = _kernel.row_sums(g.rows, p, convention_value(p), True)
    return GraphSummary(
        n=n,
        p=p,
        j_avg=math.fsum(j_rows.tolist()) / (n * (n - 1) // 2),
        p1=g.edge_count(),
        p2=path2_sum(g),
        paths2=paths2_count(g),
        r_sum=math.fsum(r_rows.tolist()),
    )
