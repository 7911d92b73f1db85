import itertools

import numpy as np
import pytest

from jaccard_rg.graph import from_edge_list


def naive_pair(dense, a, b, p):
    """S, T, J for 0-based vertices from a plain adjacency matrix."""
    s = t = 0
    for k in range(dense.shape[0]):
        if k in (a, b):
            continue
        s += int(dense[a, k] and dense[b, k])
        t += int(dense[a, k] or dense[b, k])
    return s, t, (s / t if t else p / (2 - p))


def literal_path2(dense):
    n = dense.shape[0]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k != i and k != j:
                    total += int(dense[i, j]) * int(dense[i, k])
    return total


def enumerate_pair_law(n, p):
    """Exact mean and variance of J_12 by summing over all 2^(2(n-2)) row configurations."""
    m = n - 2
    ex = ex2 = 0.0
    for bits in itertools.product((0, 1), repeat=2 * m):
        r1, r2 = bits[:m], bits[m:]
        ones = sum(bits)
        w = p**ones * (1 - p) ** (2 * m - ones)
        s = sum(a & b for a, b in zip(r1, r2))
        t = sum(a | b for a, b in zip(r1, r2))
        j = s / t if t else p / (2 - p)
        ex += w * j
        ex2 += w * j * j
    return ex, ex2 - ex * ex


def cf_by_enumeration(t, p):
    """E[exp(-i t V)] summed over the four outcomes of two independent Bernoulli(p) bits."""
    total = 0j
    for a in (0, 1):
        for b in (0, 1):
            w = (p if a else 1 - p) * (p if b else 1 - p)
            v = (2 - p) * a * b - p * (a | b)
            total += w * np.exp(-1j * t * v)
    return total


@pytest.fixture
def small_graph():
    return from_edge_list(4, [(1, 3), (2, 3), (1, 4)])


@pytest.fixture
def k4():
    return from_edge_list(4, list(itertools.combinations(range(1, 5), 2)))


@pytest.fixture
def star4():
    return from_edge_list(4, [(1, 2), (1, 3), (1, 4)])
