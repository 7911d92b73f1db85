"""Reproducible Monte Carlo runners and goodness-of-fit statistics.

Pair trials never build a graph.  ``pair_direct`` draws the ``2 (n - 2)``
edge indicators from vertices 1 and 2 to the rest; ``pair_conditional``
draws ``T ~ Bin(n - 2, p (2 - p))`` and then ``S | T = m ~ Bin(m, p / (2 - p))``.
Both are exact samplers of the joint law of ``(S, T)``.

Trials are grouped in blocks of :data:`TRIAL_BLOCK`; each block owns an
independent Philox stream keyed by ``(seed, mode, n, block)``.  Since the
block size is a constant, every trial's value is a pure function of
``(seed, trial index)`` and results do not depend on the thread count.
Full-graph trials get one stream per trial.
"""

import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import rng as _rng
from ._validation import check_count, check_probability, check_seed
from .errors import CapacityError, ParameterError
from .graph import sample_gnp
from .pairs import average_jaccard, convention_value, graph_summary

TRIAL_BLOCK = 1024
DEFAULT_AVERAGE_CAP = 4096
# uniforms per draw when sampling rows 1 and 2 directly
_DIRECT_CHUNK = 1 << 21


class Mode(str, enum.Enum):
    PAIR_DIRECT = "pair_direct"
    PAIR_CONDITIONAL = "pair_conditional"
    AVERAGE = "average"


_STREAM_OF = {
    Mode.PAIR_DIRECT: _rng.PAIR_DIRECT_STREAM,
    Mode.PAIR_CONDITIONAL: _rng.PAIR_CONDITIONAL_STREAM,
}


@dataclass(frozen=True)
class TrialConfig:
    n: int
    p: float
    trials: int
    seed: int
    mode: Mode = Mode.PAIR_CONDITIONAL
    cap: int = DEFAULT_AVERAGE_CAP

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", Mode(self.mode))
        except ValueError:
            raise ParameterError(f"unknown mode {self.mode!r}") from None
        object.__setattr__(self, "n", check_count(self.n, minimum=3))
        object.__setattr__(self, "p", check_probability(self.p))
        object.__setattr__(self, "trials", check_count(self.trials, "trials", minimum=1))
        object.__setattr__(self, "seed", check_seed(self.seed))
        if self.mode is Mode.AVERAGE and self.n > self.cap:
            raise CapacityError(
                f"average mode needs n <= {self.cap} (got n={self.n}); "
                "raise the cap explicitly or use a pair mode"
            )

    def to_dict(self):
        return {
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode.value,
        }


def _fmt17(x):
    return format(float(x), ".17g")


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted sample of one scalar statistic, with its provenance."""

    values: np.ndarray
    config: TrialConfig
    statistic: str = "J"

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=np.float64))
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def mean(self):
        return float(self.values.mean())

    def var(self):
        return sample_var(self.values)

    def provenance(self):
        return {"statistic": self.statistic, **self.config.to_dict(), "version": __version__}

    def to_csv(self):
        out = io.StringIO()
        for key, val in self.provenance().items():
            out.write(f"# {key}={val}\n")
        out.write("value\n")
        for v in self.values:
            out.write(_fmt17(v) + "\n")
        return out.getvalue()

    def to_json(self):
        doc = {"config": self.provenance(), "values": [float(v) for v in self.values]}
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_csv(cls, text):
        meta, vals = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                meta[key] = val
            elif line and line != "value":
                vals.append(float(line))
        cfg = TrialConfig(
            n=int(meta["n"]),
            p=float(meta["p"]),
            trials=int(meta["trials"]),
            seed=int(meta["seed"]),
            mode=meta["mode"],
            cap=max(DEFAULT_AVERAGE_CAP, int(meta["n"])),
        )
        return cls(np.array(vals), cfg, meta.get("statistic", "J"))


@dataclass(frozen=True)
class PairTrials:
    """``(S, T, J)`` per trial, in trial order."""

    s: np.ndarray
    t: np.ndarray
    j: np.ndarray
    config: TrialConfig

    def __len__(self):
        return self.s.size

    def sample(self, statistic="J", transform=None):
        vals = {"S": self.s, "T": self.t, "J": self.j}[statistic].astype(np.float64)
        if transform is not None:
            vals = transform(vals)
        return EmpiricalSample(vals, self.config, statistic)


def sample_var(values):
    """Unbiased sample variance; 0 for a single value."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        return 0.0
    return float(values.var(ddof=1))


def _blocks(trials):
    return [(b, min(TRIAL_BLOCK, trials - b * TRIAL_BLOCK)) for b in range(-(-trials // TRIAL_BLOCK))]


def _conditional_block(cfg, block, size):
    gen = _rng.stream(cfg.seed, _rng.PAIR_CONDITIONAL_STREAM, cfg.n, block)
    p = cfg.p
    q_union = 1.0 - (1.0 - p) ** 2
    # p / (2 - p) written to stay exact as p -> 1
    q_common = 1.0 - 2.0 * (1.0 - p) / (2.0 - p)
    t = gen.binomial(cfg.n - 2, q_union, size=size)
    s = gen.binomial(t, q_common)
    return s.astype(np.int64), t.astype(np.int64)


def _direct_block(cfg, block, size):
    gen = _rng.stream(cfg.seed, _rng.PAIR_DIRECT_STREAM, cfg.n, block)
    m = cfg.n - 2
    per_chunk = max(1, _DIRECT_CHUNK // (2 * m))
    s_out = np.empty(size, dtype=np.int64)
    t_out = np.empty(size, dtype=np.int64)
    for lo in range(0, size, per_chunk):
        hi = min(size, lo + per_chunk)
        bits = gen.random((hi - lo, 2, m)) < cfg.p
        s_out[lo:hi] = (bits[:, 0] & bits[:, 1]).sum(axis=1)
        t_out[lo:hi] = (bits[:, 0] | bits[:, 1]).sum(axis=1)
    return s_out, t_out


def _map_ordered(fn, items, threads):
    threads = check_count(threads, "threads", minimum=1)
    if threads == 1 or len(items) == 1:
        return [fn(*it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda it: fn(*it), items))


def run_pair_trials(cfg, threads=1):
    """Sample ``(S, T, J)`` for the pair (1, 2), ``cfg.trials`` times."""
    if cfg.mode is Mode.AVERAGE:
        raise ParameterError("run_pair_trials needs a pair mode")
    worker = _direct_block if cfg.mode is Mode.PAIR_DIRECT else _conditional_block
    parts = _map_ordered(lambda b, k: worker(cfg, b, k), _blocks(cfg.trials), threads)
    s = np.concatenate([a for a, _ in parts])
    t = np.concatenate([b for _, b in parts])
    j = np.full(s.shape, convention_value(cfg.p))
    np.divide(s, t, out=j, where=t > 0)
    return PairTrials(s, t, j, cfg)


def run_average_trials(cfg, threads=1):
    """Average Jaccard index of ``cfg.trials`` independent full graphs."""
    if cfg.mode is not Mode.AVERAGE:
        raise ParameterError("run_average_trials needs mode='average'")
    vals = _map_ordered(
        lambda i: average_jaccard(sample_gnp(cfg.n, cfg.p, cfg.seed, trial=i), cfg.p),
        [(i,) for i in range(cfg.trials)],
        threads,
    )
    return EmpiricalSample(np.array(vals), cfg, "J_avg")


@dataclass(frozen=True)
class GofReport:
    statistic_kind: str
    value: float | None
    reference: str
    mean: float
    variance: float
    size: int
    degenerate: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "statistic_kind": self.statistic_kind,
            "value": self.value,
            "reference": self.reference,
            "sample_moments": {"mean": self.mean, "variance": self.variance},
            "size": self.size,
            "degenerate": self.degenerate,
            **self.extra,
        }


def _values(sample):
    if isinstance(sample, EmpiricalSample):
        return sample.values
    vals = np.sort(np.asarray(sample, dtype=np.float64).ravel())
    if vals.size == 0:
        raise ParameterError("sample must be nonempty")
    return vals


def ks_statistic(sample, cdf, reference="N(0,1)"):
    """One-sample Kolmogorov-Smirnov distance to a continuous CDF."""
    x = _values(sample)
    if x.size == 0:
        raise ParameterError("sample must be nonempty")
    size = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, size + 1)
    d = max(float(np.max(i / size - f)), float(np.max(f - (i - 1) / size)))
    return GofReport("KS", min(1.0, max(0.0, d)), reference, float(x.mean()), sample_var(x), size)


def round_half_even(values):
    return np.rint(np.asarray(values, dtype=np.float64)).astype(np.int64)


def tv_distance_integer(sample, pmf, reference="Poi"):
    """Total variation between the rounded sample and an integer law.

    ``pmf`` maps a nonnegative integer array to probabilities summing to 1
    over all of ``0, 1, 2, ...``.  Mass the sample puts on negative
    integers counts fully toward the distance.
    """
    x = _values(sample)
    k, counts = np.unique(round_half_even(x), return_counts=True)
    emp = counts / x.size
    ref = np.zeros(k.shape)
    nonneg = k >= 0
    if nonneg.any():
        ref[nonneg] = pmf(k[nonneg])
    unseen = max(0.0, 1.0 - math.fsum(ref.tolist()))
    tv = 0.5 * (math.fsum(np.abs(emp - ref).tolist()) + unseen)
    return GofReport("TV", min(1.0, tv), reference, float(x.mean()), sample_var(x), x.size)


def ks_two_sample(a, b):
    """Two-sample KS distance ``sup |F_a - F_b|`` (ties handled exactly)."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_two_sample_critical(n_a, n_b, coefficient=1.63):
    """Asymptotic critical value ``c * sqrt((n_a + n_b) / (n_a n_b))``; 1.63 is alpha = 0.01."""
    return coefficient * math.sqrt((n_a + n_b) / (n_a * n_b))


@dataclass(frozen=True)
class VarianceRow:
    n: int
    est_var_rn: float
    ratio: float


def remainder_sums(n, p, trials, seed, threads=1, cap=DEFAULT_AVERAGE_CAP):
    """``R_n`` for ``trials`` independent graphs, in trial order."""
    cfg = TrialConfig(n, p, trials, seed, Mode.AVERAGE, cap)
    if cfg.p == 0.0:
        raise ParameterError("remainder sums are undefined at p = 0")
    return np.array(
        _map_ordered(
            lambda i: graph_summary(sample_gnp(cfg.n, cfg.p, cfg.seed, trial=i), cfg.p).r_sum,
            [(i,) for i in range(cfg.trials)],
            threads,
        )
    )


def variance_scaling_experiment(n_list, p, trials, seed, threads=1, cap=DEFAULT_AVERAGE_CAP):
    """Sample variance of ``R_n`` and its ratio to ``n (1 - p)`` for each ``n``.

    The ratio is NaN when ``p = 1`` (both sides vanish).
    """
    if not n_list:
        raise ParameterError("n_list must be nonempty")
    rows = []
    for n in n_list:
        est = sample_var(remainder_sums(n, p, trials, seed, threads, cap))
        scale = n * (1.0 - p)
        rows.append(VarianceRow(n, est, est / scale if scale > 0 else math.nan))
    return rows
