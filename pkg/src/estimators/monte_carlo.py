"""
Monte Carlo estimation helpers: estimates with standard errors, empirical
pmfs, total-variation distance, path moments with jackknife errors and
power-law decay fits.
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class EstimateWithError:
    """A Monte Carlo scalar estimate with its standard error"""

    value: float
    std_error: float
    n: int
    diverged: bool = False

    def __post_init__(self):
        if not self.std_error >= 0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @classmethod
    def from_sample(cls, values) -> "EstimateWithError":
        """Sample mean with its plug-in standard error"""
        values = np.asarray(values, dtype=float)
        n = values.size
        if n == 0:
            raise ValueError("Cannot estimate from an empty sample")
        se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
        return cls(value=float(values.mean()), std_error=se, n=n)

    @classmethod
    def exact(cls, value: float) -> "EstimateWithError":
        """A closed-form value carried in estimate form"""
        return cls(value=float(value), std_error=0.0, n=1)

    def within(self, expected: float, n_se: float = 3.0) -> bool:
        if self.diverged:
            return False
        return abs(self.value - expected) <= n_se * self.std_error

    def to_dict(self) -> dict:
        return asdict(self)


class EmpiricalPmf:
    """Frequency table of integer samples"""

    fixed_window = False

    def __init__(self, counts: Dict[int, int], total: int):
        if sum(counts.values()) != total:
            raise ValueError("Counts must sum to the total number of samples")
        self.counts = counts
        self.total = total

    @property
    def n_min(self) -> int:
        return min(self.counts)

    @property
    def n_max(self) -> int:
        return max(self.counts)

    def prob(self, n: int) -> float:
        return self.counts.get(int(n), 0) / self.total

    def probs_on(self, n_min: int, n_max: int) -> Tuple[np.ndarray, float]:
        """Relative frequencies on [n_min, n_max] and the mass outside it"""
        probs = np.array([self.prob(n) for n in range(n_min, n_max + 1)])
        return probs, max(0.0, 1.0 - float(probs.sum()))


def empirical_pmf(samples: Sequence[int]) -> EmpiricalPmf:
    """
    Build a frequency table from integer samples.

    Args:
        samples: Nonempty sequence of integers

    Returns:
        EmpiricalPmf whose relative frequencies sum to 1
    """
    series = pd.Series(np.asarray(samples).ravel())
    if series.empty:
        raise ValueError("empirical_pmf needs at least one sample")
    counts = series.value_counts().sort_index()
    return EmpiricalPmf({int(n): int(c) for n, c in counts.items()}, int(len(series)))


def tv_distance(a, b) -> float:
    """
    Total-variation distance between two pmf-like objects.

    Both must expose probs_on(n_min, n_max). Objects with a fixed window
    (analytic tables) impose it; two fixed windows must coincide.
    """
    fixed = [p for p in (a, b) if p.fixed_window]
    if len(fixed) == 2 and (a.n_min, a.n_max) != (b.n_min, b.n_max):
        raise ValueError(
            f"window mismatch: [{a.n_min}, {a.n_max}] vs [{b.n_min}, {b.n_max}]"
        )
    if fixed:
        lo, hi = fixed[0].n_min, fixed[0].n_max
    else:
        lo, hi = min(a.n_min, b.n_min), max(a.n_max, b.n_max)

    pa, out_a = a.probs_on(lo, hi)
    pb, out_b = b.probs_on(lo, hi)
    tv = 0.5 * float(np.abs(pa - pb).sum()) + 0.5 * abs(out_a - out_b)
    return min(1.0, tv)


@dataclass(frozen=True)
class MonteCarloMoments:
    mean_s: EstimateWithError
    mean_t: EstimateWithError
    var_s: EstimateWithError
    var_t: EstimateWithError
    cov_st: EstimateWithError

    def to_dict(self) -> dict:
        return {name: getattr(self, name).to_dict()
                for name in ('mean_s', 'mean_t', 'var_s', 'var_t', 'cov_st')}


def _jackknife_se(leave_one_out: np.ndarray) -> float:
    n = leave_one_out.size
    spread = leave_one_out - leave_one_out.mean()
    return float(math.sqrt((n - 1) / n * float(np.dot(spread, spread))))


def _mean_estimate(x: np.ndarray) -> EstimateWithError:
    n = x.size
    loo = (x.sum() - x) / (n - 1)
    return EstimateWithError(float(x.mean()), _jackknife_se(loo), n)


def _cov_estimate(x: np.ndarray, y: np.ndarray) -> EstimateWithError:
    n = x.size
    dx = x - x.mean()
    dy = y - y.mean()
    total = float(np.dot(dx, dy))
    value = total / (n - 1)
    if n < 3:
        return EstimateWithError(value, math.inf, n)
    # leave-one-out co-moment without recomputing the means
    loo = (total - n / (n - 1) * dx * dy) / (n - 2)
    return EstimateWithError(value, _jackknife_se(loo), n)


def mc_moments(paths, s_index: int, t_index: int) -> MonteCarloMoments:
    """
    Sample moments of a batch of paths at two grid positions.

    Args:
        paths: PathBatch or 2-D array (replications × grid points)
        s_index, t_index: grid positions of s and t

    Returns:
        MonteCarloMoments with unbiased estimates and jackknife errors
    """
    values = np.asarray(getattr(paths, 'values', paths), dtype=float)
    if values.ndim != 2 or values.shape[0] < 2:
        raise ValueError("mc_moments needs at least 2 replicated paths")
    xs = values[:, s_index]
    xt = values[:, t_index]
    return MonteCarloMoments(
        mean_s=_mean_estimate(xs),
        mean_t=_mean_estimate(xt),
        var_s=_cov_estimate(xs, xs),
        var_t=_cov_estimate(xt, xt),
        cov_st=_cov_estimate(xs, xt),
    )


class DecayFit(NamedTuple):
    exponent: float
    intercept: float
    r_squared: float


def decay_fit(corr) -> DecayFit:
    """
    Least-squares fit of log value against log t.

    Args:
        corr: Sequence of (t, value) pairs with every value > 0

    Returns:
        DecayFit(exponent, intercept, r_squared); exponent is the slope
    """
    pairs = np.asarray(corr, dtype=float)
    if pairs.ndim != 2 or pairs.shape[0] < 3:
        raise ValueError("decay_fit needs at least 3 (t, value) points")
    t, value = pairs[:, 0], pairs[:, 1]
    if np.any(value <= 0) or np.any(t <= 0):
        raise ValueError("decay_fit needs positive times and correlation values")

    x, y = np.log(t), np.log(value)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(residual ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return DecayFit(float(slope), float(intercept), r_squared)
