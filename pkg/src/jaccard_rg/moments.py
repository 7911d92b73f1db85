"""Exact and asymptotic moments of the pair Jaccard index in G(n, p).

Exact values are full-support sums over a binomial pmf (see
:mod:`jaccard_rg.distributions`), accumulated with ``math.fsum``.  Terms
whose pmf underflows to zero are dropped; their total mass is below
``1e-300`` and cannot move a double-precision sum.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_positive, check_probability
from .distributions import binom_pmf, binom_support_pmf
from .errors import ParameterError

__all__ = [
    "InverseMomentReport",
    "MomentReport",
    "binom_pmf",
    "conditional_mean_S",
    "conditional_var_S",
    "inverse_first_moment_positive",
    "inverse_moment_report",
    "lemma1_quantity",
    "lemma2_quantity",
    "mean_jaccard",
    "moment_report",
    "union_probability",
    "var_jaccard_asymptotic",
    "var_jaccard_exact",
]


@dataclass(frozen=True)
class InverseMomentReport:
    exact: float
    asymptotic: float
    relative_gap: float
    degenerate: bool


@dataclass(frozen=True)
class MomentReport:
    n: int
    p: float
    mean: float
    var_exact: float
    var_asymptotic: float
    relative_gap: float
    degenerate: bool


def mean_jaccard(p):
    """Exact mean ``p / (2 - p)`` of any pair index, valid for every ``n >= 2``."""
    p = check_probability(p)
    return p / (2.0 - p)


def union_probability(p):
    """``P(I_ik or I_jk) = p (2 - p)``, computed as ``1 - (1 - p)^2``."""
    p = check_probability(p)
    return 1.0 - (1.0 - p) ** 2


def conditional_mean_S(m, p):
    """``E[S | T = m]``: given ``T = m``, ``S ~ Bin(m, p / (2 - p))``."""
    m = check_count(m, "m")
    p = check_probability(p)
    return m * p / (2.0 - p)


def conditional_var_S(m, p):
    m = check_count(m, "m")
    p = check_probability(p)
    return 2.0 * m * p * (1.0 - p) / (2.0 - p) ** 2


def _support_sum(n, q, weights):
    pmf = binom_support_pmf(n, q)
    terms = weights(np.arange(n + 1, dtype=np.float64)) * pmf
    return math.fsum(terms[pmf > 0].tolist())


def inverse_first_moment_positive(n, q):
    """``sum_{m=1}^{n} P(X = m) / m`` for ``X ~ Bin(n, q)``.

    Returns 0 at ``q = 0`` (empty sum); use :func:`inverse_moment_report`
    for the degenerate flag and the gap to ``1 / (n q)``.
    """
    n = check_count(n, minimum=1)
    q = check_probability(q, "q")
    if q == 0.0:
        return 0.0
    pmf = binom_support_pmf(n, q)[1:]
    m = np.arange(1, n + 1, dtype=np.float64)
    keep = pmf > 0
    return math.fsum((pmf[keep] / m[keep]).tolist())


def inverse_moment_report(n, q):
    exact = inverse_first_moment_positive(n, q)
    if q == 0.0:
        return InverseMomentReport(0.0, math.inf, math.inf, True)
    asym = 1.0 / (n * q)
    return InverseMomentReport(exact, asym, abs(exact - asym) / exact, False)


def var_jaccard_exact(n, p):
    """Law-of-total-variance form of ``Var[J_12]``.

    ``Var[J] = 2 p (1 - p) / (2 - p)^2 * E[1 / T; T > 0]`` with
    ``T ~ Bin(n - 2, p (2 - p))``.  Zero at ``p in {0, 1}``.
    """
    n = check_count(n, minimum=3)
    p = check_probability(p)
    if p in (0.0, 1.0):
        return 0.0
    inv = inverse_first_moment_positive(n - 2, union_probability(p))
    return 2.0 * p * (1.0 - p) / (2.0 - p) ** 2 * inv


def var_jaccard_asymptotic(n, p):
    """Leading-order variance ``2 (1 - p) / (n (2 - p)^3)``."""
    n = check_count(n, minimum=3)
    p = check_probability(p)
    return 2.0 * (1.0 - p) / (n * (2.0 - p) ** 3)


def moment_report(n, p):
    n = check_count(n, minimum=3)
    p = check_probability(p)
    exact = var_jaccard_exact(n, p)
    asym = var_jaccard_asymptotic(n, p)
    degenerate = p in (0.0, 1.0)
    if degenerate:
        gap = 0.0 if exact == asym else math.inf
    else:
        gap = abs(exact - asym) / exact
    return MomentReport(n, p, mean_jaccard(p), exact, asym, gap, degenerate)


def lemma1_quantity(n, p, a, b):
    """``E[((n + a) p / (b + X) - 1)^2]`` for ``X ~ Bin(n, p)``; O(1/(np)) as np grows."""
    n = check_count(n, minimum=1)
    p = check_probability(p, open_low=True)
    if a < 0:
        raise ParameterError(f"a must be >= 0, got {a}")
    b = check_positive(b, "b")
    scale = (n + a) * p
    return _support_sum(n, p, lambda x: (scale / (b + x) - 1.0) ** 2)


def lemma2_quantity(n, p, b, alpha):
    """``E[(b + X)^(-alpha)]`` for ``X ~ Bin(n, p)``; tends to ``(np)^(-alpha)``."""
    n = check_count(n, minimum=1)
    p = check_probability(p, open_low=True)
    b = check_positive(b, "b")
    alpha = check_positive(alpha, "alpha")
    return _support_sum(n, p, lambda x: (b + x) ** -alpha)
