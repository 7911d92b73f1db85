"""Numba kernels over packed bit rows (hardware popcount via llvm.ctpop)."""

import numba
import numpy as np
from llvmlite import ir
from numba import types
from numba.extending import intrinsic


@intrinsic
def _ctpop64(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(fn, args)

    return sig, codegen


@numba.njit(nogil=True, cache=True)
def _pair_st(rows, a, b):
    s = 0
    t = 0
    for w in range(rows.shape[1]):
        x = rows[a, w]
        y = rows[b, w]
        s += _ctpop64(x & y)
        t += _ctpop64(x | y)
    edge = (rows[a, b >> 6] >> np.uint64(b & 63)) & np.uint64(1)
    return s, t - 2 * np.int64(edge)


@numba.njit(nogil=True, cache=True)
def count_rows(rows, start, stop):
    """``S`` and ``T`` of every pair ``(a, b)`` with ``start <= a < stop`` and ``b > a``."""
    n = rows.shape[0]
    s_out = np.zeros((stop - start, n), dtype=np.int64)
    t_out = np.zeros((stop - start, n), dtype=np.int64)
    for a in range(start, stop):
        for b in range(a + 1, n):
            s, t = _pair_st(rows, a, b)
            s_out[a - start, b] = s
            t_out[a - start, b] = t
    return s_out, t_out


@numba.njit(nogil=True, cache=True)
def row_sums(rows, p, conv, with_remainder):
    """Per-row sums over ``b > a`` of the Jaccard index and of the remainder term.

    Each row is accumulated sequentially, so the partial sums are fixed
    numbers regardless of who calls the kernel.
    """
    n = rows.shape[0]
    j_rows = np.zeros(n, dtype=np.float64)
    r_rows = np.zeros(n, dtype=np.float64)
    q = 2.0 - p
    scale = (n - 2) * p * q
    denom = (n - 2) * p * q * q
    for a in range(n - 1):
        js = 0.0
        rs = 0.0
        for b in range(a + 1, n):
            s, t = _pair_st(rows, a, b)
            if t > 0:
                js += s / t
                if with_remainder:
                    rs += (q * s - p * t) / denom * (scale / t - 1.0)
            else:
                js += conv
        j_rows[a] = js
        r_rows[a] = rs
    return j_rows, r_rows
