"""Regime classification, standardizing transforms and limit characteristic functions."""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_count, check_positive, check_probability
from .distributions import normal_cdf, poisson_pmf
from .errors import DegenerateError, ParameterError

__all__ = [
    "PairRegime",
    "ProbabilityFamily",
    "RegimeClass",
    "cf_negV",
    "cf_poisson_limit",
    "classify",
    "normal_cdf",
    "parse_family",
    "poisson_pmf",
    "standardize_average",
    "standardize_pair",
]


class PairRegime(str, enum.Enum):
    NORMAL = "PairNormal"
    POISSON = "PairPoisson"
    ZERO = "PairZero"
    DENSE_POISSON = "DensePoisson"
    DENSE_ZERO = "DenseZero"
    UNCLASSIFIED = "Unclassified"


FAMILY_KINDS = ("const", "pow", "dense")


def _exact(x, name):
    if isinstance(x, Fraction):
        return x
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"{name} must be a finite real, got {x!r}") from exc


@dataclass(frozen=True)
class ProbabilityFamily:
    """``p(n)`` as ``c``, ``c n^-gamma`` or ``1 - c n^-gamma``.

    ``kind`` is ``"const"`` (``c`` is the constant probability, ``gamma``
    ignored), ``"pow"`` or ``"dense"``.  Coefficients are kept as exact
    fractions so the regime limits are decided by exact exponent
    comparison.
    """

    kind: str
    c: Fraction
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ParameterError(f"family kind must be one of {FAMILY_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "c", _exact(self.c, "c"))
        object.__setattr__(self, "gamma", _exact(self.gamma, "gamma"))
        if self.kind == "const":
            object.__setattr__(self, "gamma", Fraction(0))
        if self.c <= 0:
            raise ParameterError("family coefficient must be > 0")
        if self.gamma < 0:
            raise ParameterError("family exponent must be >= 0")
        if self.gamma == 0 and self.c >= 1:
            raise ParameterError("family never lies in (0, 1)")

    @classmethod
    def constant(cls, p):
        return cls("const", p)

    @classmethod
    def power_law(cls, c, gamma):
        return cls("pow", c, gamma)

    @classmethod
    def dense_complement(cls, c, gamma):
        return cls("dense", c, gamma)

    def p_at(self, n):
        n = check_count(n, minimum=1)
        c, g = float(self.c), float(self.gamma)
        if self.kind == "const":
            return c
        if self.kind == "pow":
            return c * n ** -g
        return 1.0 - c * n ** -g

    def complement_at(self, n):
        """``1 - p(n)`` without cancellation for dense families."""
        if self.kind == "dense":
            return float(self.c) * n ** -float(self.gamma)
        return 1.0 - self.p_at(n)

    @property
    def n_min(self):
        """Smallest ``n`` from which ``p(n)`` stays strictly inside (0, 1)."""
        if self.kind == "const" or self.gamma == 0:
            return 1
        # c n^-gamma < 1  <=>  n > c^(1/gamma)
        bound = float(self.c) ** (1.0 / float(self.gamma))
        n = max(1, math.floor(bound) + 1)
        while n > 1 and float(self.c) * (n - 1) ** -float(self.gamma) < 1:
            n -= 1
        while float(self.c) * n ** -float(self.gamma) >= 1:
            n += 1
        return n

    def spec(self):
        if self.kind == "const":
            return f"const:{_fmt(self.c)}"
        return f"{self.kind}:{_fmt(self.c)}:{_fmt(self.gamma)}"


def _fmt(x):
    if x.denominator == 1:
        return str(x.numerator)
    short = repr(float(x))
    return short if Fraction(short) == x else str(x)


def parse_family(text):
    """Parse ``const:<p>``, ``pow:<c>:<gamma>`` or ``dense:<c>:<gamma>``.

    Numbers may be decimals or ratios (``1/2``).
    """
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind == "const" and len(parts) == 2:
            return ProbabilityFamily("const", Fraction(parts[1]))
        if kind in ("pow", "dense") and len(parts) == 3:
            return ProbabilityFamily(kind, Fraction(parts[1]), Fraction(parts[2]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"bad number in family spec {text!r}") from exc
    raise ParameterError(
        f"family spec {text!r} must be const:<p>, pow:<c>:<gamma> or dense:<c>:<gamma>"
    )


@dataclass(frozen=True)
class RegimeClass:
    """Pair-index regime and average-index CLT applicability of a family.

    ``lam`` is ``lim n p^2`` for :attr:`PairRegime.POISSON`; ``c`` is
    ``lim n (1 - p)`` for :attr:`PairRegime.DENSE_POISSON`.
    ``limit_param`` is the mean of the Poisson limit law (``lam`` or
    ``2 c``), ``None`` otherwise.
    """

    pair_regime: PairRegime
    avg_clt_applies: bool
    lam: float | None = None
    c: float | None = None

    @property
    def limit_param(self):
        if self.pair_regime is PairRegime.POISSON:
            return self.lam
        if self.pair_regime is PairRegime.DENSE_POISSON:
            return 2.0 * self.c
        return None

    def to_dict(self):
        return {
            "pair_regime": self.pair_regime.value,
            "avg_clt_applies": self.avg_clt_applies,
            "lambda": self.lam,
            "c": self.c,
            "limit_param": self.limit_param,
        }


def _power_limit(coef, exponent):
    """Limit of ``coef * n^exponent``: ``inf``, ``0`` or ``coef``."""
    if exponent > 0:
        return math.inf
    if exponent < 0:
        return 0.0
    return float(coef)


def classify(family):
    """Map a family to its regime by exact comparison of growth exponents.

    For ``p = c n^-g`` (``g > 0``): ``n p^2 = c^2 n^(1 - 2g)``, ``1 - p -> 1``,
    ``n p = c n^(1 - g)`` and ``n^2 (1 - p) -> inf``.  For
    ``p = 1 - c n^-g``: ``n (1 - p) = c n^(1 - g)``, ``n p -> inf`` and
    ``n^2 (1 - p) = c n^(2 - g)``.
    """
    if not isinstance(family, ProbabilityFamily):
        raise ParameterError("classify needs a ProbabilityFamily")
    c, g = family.c, family.gamma
    if family.kind == "const" or g == 0:
        # fixed p in (0, 1): n p^2 (1 - p), n p and n^2 (1 - p) all diverge
        return RegimeClass(PairRegime.NORMAL, True)
    if family.kind == "pow":
        np2 = _power_limit(c * c, 1 - 2 * g)
        np_ = _power_limit(c, 1 - g)
        avg = math.isinf(np_)
        if math.isinf(np2):
            return RegimeClass(PairRegime.NORMAL, avg)
        if np2 > 0:
            return RegimeClass(PairRegime.POISSON, avg, lam=np2)
        return RegimeClass(PairRegime.ZERO, avg)
    if family.kind == "dense":
        n_comp = _power_limit(c, 1 - g)
        n2_comp = _power_limit(c, 2 - g)
        avg = math.isinf(n2_comp)
        if math.isinf(n_comp):
            # p -> 1, so n p^2 (1 - p) ~ n (1 - p)
            return RegimeClass(PairRegime.NORMAL, avg)
        if n_comp > 0:
            return RegimeClass(PairRegime.DENSE_POISSON, avg, c=n_comp)
        return RegimeClass(PairRegime.DENSE_ZERO, avg)
    return RegimeClass(PairRegime.UNCLASSIFIED, False)


def _regime_of(regime):
    if isinstance(regime, RegimeClass):
        return regime.pair_regime
    return PairRegime(regime)


def standardize_pair(j, n, p, regime):
    """Scale a pair index (scalar or array) to the statistic whose limit law the regime names.

    NORMAL: ``sqrt(n (2-p)^3 / (2 (1-p))) (J - p/(2-p))``; POISSON: ``2 n p J``;
    ZERO: ``n p J``; DENSE_POISSON and DENSE_ZERO: ``n (1 - J)``.
    """
    n = check_count(n, minimum=2)
    p = check_probability(p)
    kind = _regime_of(regime)
    j = np.asarray(j, dtype=np.float64)
    if kind is PairRegime.NORMAL:
        if p in (0.0, 1.0):
            raise DegenerateError("normal standardization needs 0 < p < 1")
        out = math.sqrt(n * (2.0 - p) ** 3 / (2.0 * (1.0 - p))) * (j - p / (2.0 - p))
    elif kind is PairRegime.POISSON:
        out = 2.0 * n * p * j
    elif kind is PairRegime.ZERO:
        out = n * p * j
    elif kind in (PairRegime.DENSE_POISSON, PairRegime.DENSE_ZERO):
        out = n * (1.0 - j)
    else:
        raise ParameterError("no standardization for an unclassified regime")
    return float(out) if out.ndim == 0 else out


def standardize_average(j_avg, n, p):
    """``n (2-p)^2 / sqrt(8 p (1-p)) * (J_n - p/(2-p))``."""
    n = check_count(n, minimum=3)
    p = check_probability(p)
    if p in (0.0, 1.0):
        raise DegenerateError("average standardization needs 0 < p < 1")
    out = n * (2.0 - p) ** 2 / math.sqrt(8.0 * p * (1.0 - p)) * (
        np.asarray(j_avg, dtype=np.float64) - p / (2.0 - p)
    )
    return float(out) if out.ndim == 0 else out


def cf_negV(t, p):
    """Characteristic function of ``-V`` for one third vertex.

    ``p^2 e^{-2it(1-p)} + 2p(1-p) e^{itp} + (1-p)^2``.
    """
    p = check_probability(p)
    t = np.asarray(t, dtype=np.float64)
    q = 1.0 - p
    out = p * p * np.exp(-2j * t * q) + 2.0 * p * q * np.exp(1j * t * p) + q * q
    return complex(out) if out.ndim == 0 else out


def cf_poisson_limit(t, c):
    """``exp(2c (e^{it} - it - 1))``, the CF of ``Poi(2c) - 2c``."""
    c = check_positive(c, "c")
    t = np.asarray(t, dtype=np.float64)
    out = np.exp(2.0 * c * (np.exp(1j * t) - 1j * t - 1.0))
    return complex(out) if out.ndim == 0 else out
