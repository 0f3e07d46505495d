"""Monte Carlo estimation, distributional tests and growth diagnostics.

Every estimate is a deterministic function of its seed: replicate i draws
from the stream keyed by (seed, task label, i) and aggregation runs in
replicate order, so worker counts never change results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.stats

from chainrec.rng import make_stream, stream_id


@dataclass(frozen=True)
class ExperimentSummary:
    """One reproducible Monte Carlo estimate with its standard error."""

    estimator: str
    value: float
    std_error: float | None
    replicates: int
    seed: int
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "estimator": self.estimator,
            "value": self.value,
            "std_error": self.std_error,
            "replicates": self.replicates,
            "seed": self.seed,
            "params": dict(self.params),
        }


@dataclass(frozen=True)
class TestResult:
    """Decision of a two-sample equality-in-distribution test."""

    reject: bool
    statistic: float
    pvalue: float
    kind: str  # "ks" or "chisq"


@dataclass(frozen=True)
class CltDiagnostics:
    """Shape diagnostics of a record-count sample against its Gaussian target."""

    mean_over_log_n: float
    var_over_log_n: float
    skewness: float
    excess_kurtosis: float
    ks_distance_to_fitted_normal: float


def estimate(
    sampler: Callable[[np.random.Generator], float],
    replicates: int,
    seed: int,
    *,
    label: str = "estimate",
    params: Mapping | None = None,
    workers: int = 1,
) -> ExperimentSummary:
    """Mean and standard error of a replicate-valued procedure.

    ``sampler`` receives the generator of its own replicate stream and
    returns one float.  Needs at least two replicates for a standard
    error.
    """
    if replicates < 2:
        raise ValueError("need at least 2 replicates for a standard error")
    sid = stream_id(label)
    values = np.empty(replicates)

    def fill(lo, hi):
        for i in range(lo, hi):
            values[i] = sampler(make_stream(seed, sid, i))

    if workers <= 1:
        fill(0, replicates)
    else:
        step = max(1, math.ceil(replicates / workers))
        spans = [(lo, min(lo + step, replicates)) for lo in range(0, replicates, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda s: fill(*s), spans))
    return summarize(values, label, seed, params)


def summarize(
    values: np.ndarray,
    estimator: str,
    seed: int,
    params: Mapping | None = None,
) -> ExperimentSummary:
    """Summary of already-sampled replicate values (mean, SE of the mean)."""
    values = np.asarray(values, dtype=float)
    n = values.size
    se = float(values.std(ddof=1) / math.sqrt(n)) if n >= 2 else None
    return ExperimentSummary(
        estimator=estimator,
        value=float(values.mean()),
        std_error=se,
        replicates=int(n),
        seed=int(seed),
        params=dict(params or {}),
    )


def _is_integer_valued(a: np.ndarray) -> bool:
    return np.issubdtype(a.dtype, np.integer) or bool(np.all(a == np.round(a)))


def two_sample_test(
    a: Sequence[float],
    b: Sequence[float],
    significance: float = 0.01,
    kind: str = "auto",
) -> TestResult:
    """Test whether two samples share a distribution.

    Integer-valued data gets a chi-square over pooled bins (each expected
    count at least 5); continuous data gets the two-sample
    Kolmogorov-Smirnov test.  ``kind`` forces "chisq" or "ks".
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    if not 0 < significance < 1:
        raise ValueError("significance must be in (0, 1)")
    if kind == "auto":
        kind = "chisq" if (_is_integer_valued(a) and _is_integer_valued(b)) else "ks"
    if kind == "ks":
        stat, pvalue = scipy.stats.ks_2samp(a, b)
    elif kind == "chisq":
        stat, pvalue = _chi_square_two_sample(a.astype(np.int64), b.astype(np.int64))
    else:
        raise ValueError(f"unknown test kind {kind!r}")
    return TestResult(
        reject=bool(pvalue < significance),
        statistic=float(stat),
        pvalue=float(pvalue),
        kind=kind,
    )


def _chi_square_two_sample(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    values = np.union1d(a, b)
    oa = np.array([int((a == v).sum()) for v in values], dtype=float)
    ob = np.array([int((b == v).sum()) for v in values], dtype=float)
    na, nb = float(a.size), float(b.size)
    share_a, share_b = na / (na + nb), nb / (na + nb)
    # pool adjacent value bins until both expected counts reach 5
    bins_a: list[float] = []
    bins_b: list[float] = []
    acc_a = acc_b = 0.0
    for x, y in zip(oa, ob):
        acc_a += x
        acc_b += y
        col = acc_a + acc_b
        if col * share_a >= 5 and col * share_b >= 5:
            bins_a.append(acc_a)
            bins_b.append(acc_b)
            acc_a = acc_b = 0.0
    if acc_a or acc_b:
        if bins_a:
            bins_a[-1] += acc_a
            bins_b[-1] += acc_b
        else:
            bins_a.append(acc_a)
            bins_b.append(acc_b)
    if len(bins_a) < 2:
        return 0.0, 1.0  # everything pooled into one bin: no evidence either way
    obs_a = np.array(bins_a)
    obs_b = np.array(bins_b)
    col_totals = obs_a + obs_b
    exp_a = col_totals * share_a
    exp_b = col_totals * share_b
    stat = float(((obs_a - exp_a) ** 2 / exp_a).sum() + ((obs_b - exp_b) ** 2 / exp_b).sum())
    dof = len(bins_a) - 1
    return stat, float(scipy.stats.chi2.sf(stat, dof))


def clt_diagnostics(samples: Sequence[float], d: int, n: int) -> CltDiagnostics:
    """Growth and shape diagnostics of record counts at horizon n.

    Reports mean/log(n) and var/log(n) (their targets are 1/d and 1/d**2)
    plus shape statistics; thresholds live with the caller because the
    asymptotics come with no rate.
    """
    samples = np.asarray(samples, dtype=float)
    if n < 1000:
        raise ValueError("diagnostics need horizon n >= 1000")
    if samples.size < 1000:
        raise ValueError("diagnostics need at least 1000 replicates")
    if samples.std() == 0:
        raise ValueError("degenerate sample: zero variance")
    log_n = math.log(n)
    mean = samples.mean()
    std = samples.std(ddof=1)
    ks = scipy.stats.kstest(samples, scipy.stats.norm(loc=mean, scale=std).cdf).statistic
    return CltDiagnostics(
        mean_over_log_n=float(mean / log_n),
        var_over_log_n=float(samples.var(ddof=1) / log_n),
        skewness=float(scipy.stats.skew(samples)),
        excess_kurtosis=float(scipy.stats.kurtosis(samples)),
        ks_distance_to_fitted_normal=float(ks),
    )


def regression_slope(pairs: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of (x, y) pairs, for log-n growth coefficients.

    Requires at least 4 points whose x values span at least log(100),
    i.e. two decades of the underlying horizon; the intercept absorbs
    additive constants so the slope isolates the growth coefficient.
    """
    pts = [(float(x), float(y)) for x, y in pairs]
    if len(pts) < 4:
        raise ValueError("need at least 4 grid points")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if xs.max() - xs.min() < math.log(100):
        raise ValueError("grid must span at least two decades")
    return float(np.polyfit(xs, ys, 1)[0])


def bonferroni(significance: float, num_tests: int) -> float:
    """Per-test significance keeping the family-wise level at ``significance``."""
    if num_tests < 1:
        raise ValueError("num_tests must be >= 1")
    return significance / num_tests
