import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jaccard_rg.distributions import binom_pmf, binom_support_pmf, normal_cdf, poisson_pmf
from jaccard_rg.errors import ParameterError

mp.mp.dps = 50


def exact_binom(n, q, m):
    return mp.binomial(n, m) * mp.mpf(q) ** m * (1 - mp.mpf(q)) ** (n - m)


def test_binom_examples():
    assert binom_pmf(2, 0.5, 1) == pytest.approx(0.5, rel=1e-15)
    assert binom_pmf(7, 0.0, 0) == 1.0
    assert binom_pmf(10, 0.3, 3) == pytest.approx(0.266827932, abs=1e-9)


def test_binom_range_check():
    with pytest.raises(ParameterError):
        binom_pmf(5, 0.5, 6)
    with pytest.raises(ParameterError):
        binom_pmf(5, 0.5, -1)


@pytest.mark.parametrize(
    "n,q", [(10, 0.3), (137, 0.71), (1000, 0.002), (10_000, 0.5), (10_000, 0.0123), (9998, 0.36)]
)
def test_binom_relative_error_against_mpmath(n, q):
    ms = np.unique(np.concatenate([np.linspace(0, n, 41).astype(int), np.arange(int(n * q) - 5, int(n * q) + 6)]))
    ms = ms[(ms >= 0) & (ms <= n)]
    got = binom_pmf(n, q, ms)
    for m, g in zip(ms.tolist(), got.tolist()):
        ref = exact_binom(n, q, m)
        if ref < mp.mpf("1e-100"):
            continue
        assert abs(g / float(ref) - 1) <= 1e-12


def test_binom_large_n_support_sums_to_one():
    pmf = binom_support_pmf(1_000_000, 0.3)
    assert math.fsum(pmf.tolist()) == pytest.approx(1.0, abs=1e-12)


def test_poisson_examples():
    assert poisson_pmf(0, 4) == pytest.approx(math.exp(-4), rel=1e-15)
    assert poisson_pmf(0, 4) == pytest.approx(0.0183156, abs=1e-7)
    with pytest.raises(ParameterError):
        poisson_pmf(1, 0.0)


@pytest.mark.parametrize("lam", [0.01, 0.5, 3.0, 4.0, 250.0, 9000.0])
def test_poisson_relative_error_against_mpmath(lam):
    for k in [0, 1, 2, 3, 7, 15, 16, 17, 100, 249, 1000, 5000, 9000, 10_000]:
        ref = mp.exp(-mp.mpf(lam)) * mp.mpf(lam) ** k / mp.factorial(k)
        if ref < mp.mpf("1e-100"):
            continue
        assert abs(poisson_pmf(k, lam) / float(ref) - 1) <= 1e-12


@pytest.mark.parametrize("lam", [0.3, 4.0, 37.0, 900.0])
def test_poisson_mass_within_forty_sd(lam):
    k = np.arange(int(lam + 40 * math.sqrt(lam)) + 1)
    assert math.fsum(poisson_pmf(k, lam).tolist()) >= 1 - 1e-12


def test_normal_cdf_examples():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.0) == pytest.approx(0.841345, abs=1e-6)


@pytest.mark.parametrize("x", [-8.0, -3.3, -1.0, -0.2, 0.0, 0.7, 1.0, 2.5, 6.0])
def test_normal_cdf_absolute_error(x):
    assert abs(normal_cdf(x) - float(mp.ncdf(x))) <= 1e-10


@given(st.floats(-30, 30), st.floats(-30, 30))
@settings(max_examples=200)
def test_normal_cdf_monotone_and_symmetric(a, b):
    lo, hi = min(a, b), max(a, b)
    assert normal_cdf(lo) <= normal_cdf(hi)
    assert abs(normal_cdf(a) + normal_cdf(-a) - 1) <= 1e-12
