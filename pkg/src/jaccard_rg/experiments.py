"""Goodness-of-fit runs and convergence sweeps built on the trial runners."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import tolerances
from .distributions import normal_cdf, poisson_pmf
from .errors import ParameterError
from .limits import PairRegime, classify, standardize_average, standardize_pair
from .montecarlo import (
    EmpiricalSample,
    GofReport,
    Mode,
    TrialConfig,
    ks_statistic,
    run_average_trials,
    run_pair_trials,
    sample_var,
    tv_distance_integer,
)


class Law(str, enum.Enum):
    NORMAL = "normal"
    POISSON = "poisson"
    ZERO = "zero"
    DENSE_POISSON = "dense-poisson"
    DENSE_ZERO = "dense-zero"


_LAW_OF_REGIME = {
    PairRegime.NORMAL: Law.NORMAL,
    PairRegime.POISSON: Law.POISSON,
    PairRegime.ZERO: Law.ZERO,
    PairRegime.DENSE_POISSON: Law.DENSE_POISSON,
    PairRegime.DENSE_ZERO: Law.DENSE_ZERO,
}

_REGIME_OF_LAW = {v: k for k, v in _LAW_OF_REGIME.items()}


def law_for_regime(regime):
    try:
        return _LAW_OF_REGIME[regime.pair_regime]
    except KeyError:
        raise ParameterError("no reference law for an unclassified regime") from None


@dataclass(frozen=True)
class GofResult:
    sample: EmpiricalSample
    report: GofReport


def _degenerate(values, kind, reference):
    return GofReport(
        kind, None, reference, float(np.mean(values)), sample_var(values), len(values), True
    )


def _exceed_report(values, threshold, reference):
    frac = float(np.mean(np.abs(values) > threshold))
    return GofReport(
        "EXCEED",
        frac,
        reference,
        float(np.mean(values)),
        sample_var(values),
        len(values),
        extra={"exceed_threshold": threshold},
    )


def _pair_values(trials, law, lam, c):
    cfg = trials.config
    n, p = cfg.n, cfg.p
    regime = _REGIME_OF_LAW[law]
    if law is Law.NORMAL:
        return standardize_pair(trials.j, n, p, regime), "N(0,1)", {}
    if law is Law.POISSON:
        lam = n * p * p if lam is None else lam
        return standardize_pair(trials.j, n, p, regime), f"Poi({lam!r})", {"lambda": lam}
    if law is Law.DENSE_POISSON:
        c = n * (1.0 - p) if c is None else c
        return standardize_pair(trials.j, n, p, regime), f"Poi({2.0 * c!r})", {"c": c}
    return standardize_pair(trials.j, n, p, regime), "delta(0)", {}


def run_gof(cfg, law=Law.NORMAL, *, lam=None, c=None, threads=1, table=None):
    """Sample, standardize and compare to the reference law of ``law``.

    NORMAL uses the KS distance to N(0, 1); POISSON and DENSE_POISSON the
    total variation of the rounded statistic to ``Poi(lam)`` / ``Poi(2c)``;
    ZERO and DENSE_ZERO report the fraction of trials whose scaled index
    exceeds the table's ``degenerate_threshold`` in absolute value.
    Average mode supports NORMAL only.
    """
    law = Law(law)
    table = table or tolerances.load()
    if cfg.mode is Mode.AVERAGE:
        if law is not Law.NORMAL:
            raise ParameterError("average mode is compared to the normal law only")
        raw = run_average_trials(cfg, threads)
        if cfg.p in (0.0, 1.0):
            return GofResult(raw, _degenerate(raw.values, "KS", "N(0,1)"))
        values = standardize_average(raw.values, cfg.n, cfg.p)
        sample = EmpiricalSample(values, cfg, "standardized J_avg")
        report = ks_statistic(sample, normal_cdf, "N(0,1)")
        return GofResult(sample, _with_verdict(report, table["ks_normal_max"]))

    trials = run_pair_trials(cfg, threads)
    if law is Law.NORMAL and cfg.p in (0.0, 1.0):
        return GofResult(trials.sample("J"), _degenerate(trials.j, "KS", "N(0,1)"))
    values, reference, params = _pair_values(trials, law, lam, c)
    sample = EmpiricalSample(values, cfg, f"scaled J ({law.value})")
    if law is Law.NORMAL:
        report = _with_verdict(ks_statistic(sample, normal_cdf, reference), table["ks_normal_max"])
    elif law in (Law.POISSON, Law.DENSE_POISSON):
        mean = params["lambda"] if law is Law.POISSON else 2.0 * params["c"]
        if not mean > 0:
            raise ParameterError("Poisson reference needs a positive mean")
        report = tv_distance_integer(sample, lambda k: poisson_pmf(k, mean), reference)
        report = _with_verdict(report, table["tv_poisson_max"])
    else:
        report = _exceed_report(sample.values, table["degenerate_threshold"], reference)
        report = _with_verdict(report, table["degenerate_fraction_max"])
    if params:
        report = _with_extra(report, params)
    return GofResult(sample, report)


def _with_extra(report, extra):
    merged = dict(report.extra)
    merged.update(extra)
    return GofReport(
        report.statistic_kind,
        report.value,
        report.reference,
        report.mean,
        report.variance,
        report.size,
        report.degenerate,
        merged,
    )


def _with_verdict(report, threshold):
    if report.value is None:
        return report
    return _with_extra(report, {"threshold": threshold, "passed": report.value <= threshold})


SWEEP_COLUMNS = (
    "family",
    "n",
    "p",
    "mode",
    "regime",
    "statistic",
    "value",
    "reference",
    "mean",
    "variance",
    "trials",
    "seed",
)


def sweep(family, n_list, trials, seed, *, mode=Mode.PAIR_CONDITIONAL, threads=1, table=None):
    """One goodness-of-fit row per ``n`` along a probability family.

    Pair modes compare to the family's limiting pair law; average mode to
    the normal law.  Rows are recorded as-is: convergence is not asserted.
    """
    if not n_list:
        raise ParameterError("n_list must be nonempty")
    mode = Mode(mode)
    regime = classify(family)
    law = Law.NORMAL if mode is Mode.AVERAGE else law_for_regime(regime)
    rows = []
    for n in n_list:
        if n < family.n_min:
            raise ParameterError(f"p(n) leaves (0, 1) for n={n} < {family.n_min}")
        p = family.p_at(n)
        cfg = TrialConfig(n, p, trials, seed, mode)
        result = run_gof(cfg, law, lam=regime.lam, c=regime.c, threads=threads, table=table)
        rep = result.report
        rows.append(
            {
                "family": family.spec(),
                "n": n,
                "p": p,
                "mode": mode.value,
                "regime": regime.pair_regime.value,
                "statistic": rep.statistic_kind,
                "value": math.nan if rep.value is None else rep.value,
                "reference": rep.reference,
                "mean": rep.mean,
                "variance": rep.variance,
                "trials": trials,
                "seed": seed,
            }
        )
    return rows
