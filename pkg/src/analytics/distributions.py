"""
Probability mass functions and generating functions of the SPoK family.

The order-1 pmf is the Bessel form, evaluated in log space. Higher orders
mix tabulated jump-sum laws over a Poisson number of jumps; the tables are
memoised per (k, λ1, λ2, window). The FSPoK pmf integrates the SPoK pmf
against the Wright kernel after the substitution u = t^α v, so the kernel
values at the quadrature nodes depend on α only and are memoised too.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import polars as pl
from cachetools import LRUCache, cached
from scipy import special

from ..estimators.monte_carlo import EstimateWithError
from ..processes import FracParams, SkellamParams
from ..specfun import log_bessel_i, mittag_leffler, wright_m
from ..subordinators import (
    GammaSubordinator,
    SubordinatorSpec,
    log_gamma_exp_moment,
    operational_draws,
)
from ..utils.errors import ConvergenceError, HypothesisViolationError
from .moments import fspok_moments, spok_moments

WRIGHT_TAIL_LOG = 46.0  # M_α beyond the cutoff is below e^{-46}
GAUSS_ORDER = 32
START_PANELS = 8
MAX_PANELS = 512
QUADRATURE_TOL = 1e-8

WINDOW_SDS = 8.0
EDGE_TOL = 1e-10
MASS_TOL = 1e-8
MAX_WIDENINGS = 12

POISSON_SDS = 12.0
POISSON_PAD = 40
CHUNK_ENTRIES = 4_000_000

SERIES_TOL = 1e-12
SERIES_TERMS = 4096
DEFAULT_MC_N = 20_000


@dataclass(frozen=True, eq=False)
class PmfTable:
    """Probabilities on [n_min, n_max] plus the mass left outside"""

    n_min: int
    n_max: int
    probs: np.ndarray
    truncation_mass: float

    fixed_window = True

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (self.n_max - self.n_min + 1,):
            raise ValueError("PmfTable probabilities must cover [n_min, n_max]")
        if np.any(probs < 0):
            raise ValueError("PmfTable probabilities must be >= 0")
        if self.truncation_mass < 0:
            raise ValueError("truncation_mass must be >= 0")
        object.__setattr__(self, 'probs', probs)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def prob(self, n: int) -> float:
        if self.n_min <= n <= self.n_max:
            return float(self.probs[n - self.n_min])
        return 0.0

    def probs_on(self, n_min: int, n_max: int) -> Tuple[np.ndarray, float]:
        if (n_min, n_max) != (self.n_min, self.n_max):
            raise ValueError(f"window mismatch: table covers [{self.n_min}, {self.n_max}]")
        return self.probs, self.truncation_mass

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame({'n': self.support, 'p': self.probs})


def _skellam_pmf(lambda1: float, lambda2: float, t, n):
    z = 2.0 * t * math.sqrt(lambda1 * lambda2)
    log_p = (-t * (lambda1 + lambda2) + 0.5 * n * (math.log(lambda1) - math.log(lambda2))
             + log_bessel_i(np.abs(n), z))
    return np.exp(log_p)


def _jump_kernel(k: int, lambda1: float, lambda2: float) -> np.ndarray:
    """Weights of the jumps −k..k (0 excluded), unnormalised"""
    return np.concatenate((np.full(k, lambda2), [0.0], np.full(k, lambda1)))


@cached(cache=LRUCache(maxsize=32))
def _jump_sum_rows(k: int, lambda1: float, lambda2: float, n_min: int, n_max: int,
                   count: int) -> np.ndarray:
    """Row N: law of the sum of N jumps ±j (j = 1..k, weights λ1 up, λ2 down) on [n_min, n_max]"""
    jump = _jump_kernel(k, lambda1, lambda2) / (k * (lambda1 + lambda2))
    rows = np.zeros((count, n_max - n_min + 1))
    law = np.ones(1)
    for jumps in range(count):
        half = k * jumps
        lo, hi = max(n_min, -half), min(n_max, half)
        if lo <= hi:
            rows[jumps, lo - n_min:hi - n_min + 1] = law[lo + half:hi + half + 1]
        law = np.convolve(law, jump)
    return rows


def _jump_count_bound(rate_t: float, reach: int) -> int:
    scale = max(rate_t, float(reach))
    return int(math.ceil(scale + POISSON_SDS * math.sqrt(scale))) + POISSON_PAD


def _order_k_pmf_range(params: SkellamParams, t_flat: np.ndarray, n_min: int,
                       n_max: int) -> np.ndarray:
    """pmf on [n_min, n_max] for each time: Poisson(k(λ1+λ2)t) mixture of jump-sum laws"""
    rate = params.k * (params.lambda1 + params.lambda2)
    count = _jump_count_bound(rate * float(t_flat.max(initial=0.0)), max(abs(n_min), abs(n_max)))
    rows = _jump_sum_rows(params.k, params.lambda1, params.lambda2, n_min, n_max, count)
    jumps = np.arange(count, dtype=float)
    log_factorials = special.gammaln(jumps + 1)
    out = np.empty((n_max - n_min + 1, t_flat.size))
    step = max(1, CHUNK_ENTRIES // count)
    for start in range(0, t_flat.size, step):
        mu = rate * t_flat[start:start + step, None]
        weights = np.exp(special.xlogy(jumps, mu) - mu - log_factorials)
        out[:, start:start + step] = (weights @ rows).T
    return out


def spok_pmf_range(params: SkellamParams, t, n_min: int, n_max: int) -> np.ndarray:
    """
    SPoK pmf for every n in [n_min, n_max] at every entry of t.

    Returns:
        Array of shape (n_max − n_min + 1,) + t.shape
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("spok_pmf needs t >= 0")
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")
    if params.k == 1:
        n = np.arange(n_min, n_max + 1).reshape((-1,) + (1,) * t.ndim)
        return _skellam_pmf(params.lambda1, params.lambda2, t[None, ...], n)
    flat = _order_k_pmf_range(params, t.ravel(), int(n_min), int(n_max))
    return flat.reshape((n_max - n_min + 1,) + t.shape)


def spok_pmf(params: SkellamParams, t, n):
    """
    SPoK pmf p(n, t); accepts broadcastable arrays for t and n.

    For k = 1 this is the Skellam law e^{-t(λ1+λ2)} (λ1/λ2)^{n/2} I_{|n|}(2t√(λ1λ2)).
    For k ≥ 2 the process is compound Poisson with rate k(λ1+λ2) and jumps
    ±j, j = 1..k, so p(n, t) mixes the laws of N-jump sums over
    N ~ Poisson(k(λ1+λ2)t).
    """
    t = np.asarray(t, dtype=float)
    n = np.asarray(n)
    if np.any(t < 0):
        raise ValueError("spok_pmf needs t >= 0")
    if params.k == 1:
        p = _skellam_pmf(params.lambda1, params.lambda2, t, n)
    else:
        t_b, n_b = np.broadcast_arrays(t, n)
        if t_b.size == 0:
            return np.zeros(t_b.shape)
        times, index = np.unique(t_b.ravel(), return_inverse=True)
        n_flat = n_b.ravel().astype(int)
        n_min, n_max = int(n_flat.min()), int(n_flat.max())
        table = _order_k_pmf_range(params, times, n_min, n_max)
        p = table[n_flat - n_min, index.ravel()].reshape(t_b.shape)
    return float(p) if p.ndim == 0 else p


def wright_cutoff(alpha: float) -> float:
    """V with M_α(v) ≲ e^{-WRIGHT_TAIL_LOG} for v > V"""
    rate = (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))
    return (WRIGHT_TAIL_LOG / rate) ** (1.0 - alpha)


@cached(cache=LRUCache(maxsize=64))
def wright_kernel_nodes(alpha: float, panels: int, order: int = GAUSS_ORDER):
    """Composite Gauss–Legendre nodes on [0, V] and weights times M_α(node)"""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, wright_cutoff(alpha), panels + 1)
    half = np.diff(edges) / 2.0
    mid = edges[:-1] + half
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    kernel = np.array([wright_m(alpha, v) for v in nodes])
    return nodes, weights * kernel


def fspok_pmf_grid(params: SkellamParams, frac: FracParams, t_values, n_values,
                   tol: float = QUADRATURE_TOL) -> np.ndarray:
    """
    FSPoK pmf on an (n, t) grid: ∫ p(n, t^α v) M_α(v) dv.

    Panels are doubled until two successive results agree to tol.

    Returns:
        Array of shape (len(n_values), len(t_values))
    """
    t = np.atleast_1d(np.asarray(t_values, dtype=float))
    n = np.atleast_1d(np.asarray(n_values)).astype(int)
    if np.any(t < 0):
        raise ValueError("fspok_pmf needs t >= 0")
    if frac.alpha == 1:
        return spok_pmf(params, t[None, :], n[:, None])

    scale = t ** frac.alpha
    lo, hi = int(n.min()), int(n.max())
    previous = None
    panels = START_PANELS
    while panels <= MAX_PANELS:
        nodes, weighted_kernel = wright_kernel_nodes(frac.alpha, panels)
        rows = max(1, CHUNK_ENTRIES // ((hi - lo + 1) * nodes.size))
        values = np.empty((n.size, t.size))
        for start in range(0, t.size, rows):
            u = scale[start:start + rows, None] * nodes[None, :]
            integrated = spok_pmf_range(params, u, lo, hi) @ weighted_kernel
            values[:, start:start + rows] = integrated[n - lo]
        if previous is not None and np.max(np.abs(values - previous)) <= tol:
            return values
        previous = values
        panels *= 2
    raise ConvergenceError(f"FSPoK quadrature did not reach {tol} with {MAX_PANELS} panels")


def fspok_pmf(params: SkellamParams, frac: FracParams, t: float, n: int) -> float:
    """FSPoK pmf p_α(n, t) by quadrature against the Wright kernel"""
    if frac.alpha == 1:
        return spok_pmf(params, t, n)
    if not t > 0:
        raise ValueError("fspok_pmf needs t > 0 for alpha < 1")
    return float(fspok_pmf_grid(params, frac, [t], [n])[0, 0])


def _tail_window(mean: float, sd: float, k: int) -> Tuple[int, int]:
    return (int(math.floor(mean - WINDOW_SDS * sd)) - k,
            int(math.ceil(mean + WINDOW_SDS * sd)) + k)


def _build_table(evaluate: Callable[[np.ndarray], np.ndarray], window: Tuple[int, int],
                 widen: bool) -> PmfTable:
    """Evaluate on a window, widening it until both edges fall below EDGE_TOL"""
    lo, hi = window
    for _ in range(MAX_WIDENINGS):
        probs = np.asarray(evaluate(np.arange(lo, hi + 1)), dtype=float)
        if not widen or (probs[0] < EDGE_TOL and probs[-1] < EDGE_TOL):
            break
        grow = max(1, (hi - lo) // 2)
        lo = lo - grow if probs[0] >= EDGE_TOL else lo
        hi = hi + grow if probs[-1] >= EDGE_TOL else hi
    else:
        raise ConvergenceError("pmf window kept growing without reaching the tail tolerance")
    mass = float(probs.sum())
    if mass > 1.0 + MASS_TOL:
        warnings.warn(f"pmf table mass {mass!r} exceeds 1 by more than {MASS_TOL}; "
                      "truncation mass reported as 0", RuntimeWarning, stacklevel=3)
    return PmfTable(lo, hi, probs, max(0.0, 1.0 - mass))


def _window(n_min, n_max, default):
    if n_min is None or n_max is None:
        return default, True
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")
    return (int(n_min), int(n_max)), False


def spok_pmf_table(params: SkellamParams, t: float, n_min: Optional[int] = None,
                   n_max: Optional[int] = None) -> PmfTable:
    report = spok_moments(params, t, t)
    window, widen = _window(n_min, n_max,
                            _tail_window(report.mean, math.sqrt(report.variance), params.k))
    return _build_table(lambda n: spok_pmf(params, t, n), window, widen)


def fspok_pmf_table(params: SkellamParams, frac: FracParams, t: float, n_min: Optional[int] = None,
                    n_max: Optional[int] = None) -> PmfTable:
    if frac.alpha == 1:
        return spok_pmf_table(params, t, n_min, n_max)
    report = fspok_moments(params, frac, t, t)
    window, widen = _window(n_min, n_max,
                            _tail_window(report.mean, math.sqrt(report.variance), params.k))
    return _build_table(lambda n: fspok_pmf_grid(params, frac, [t], n)[:, 0], window, widen)


def _pgf_exponent(params: SkellamParams, theta: float) -> float:
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    j = np.arange(1, params.k + 1)
    return float(params.k * (params.lambda1 + params.lambda2)
                 - params.lambda1 * np.sum(theta ** j) - params.lambda2 * np.sum(theta ** (-j)))


def spok_pgf(params: SkellamParams, theta: float, t: float) -> float:
    """E θ^{S(t)} for the SPoK"""
    if t < 0:
        raise ValueError("spok_pgf needs t >= 0")
    return math.exp(-t * _pgf_exponent(params, theta))


def fspok_pgf(params: SkellamParams, frac: FracParams, theta: float, t: float) -> float:
    """E θ^{S_α(t)} = E_{α,1}(-(k(λ1+λ2) − λ1Σθ^j − λ2Σθ^{-j}) t^α)"""
    if frac.alpha == 1:
        return spok_pgf(params, theta, t)
    if t < 0:
        raise ValueError("fspok_pgf needs t >= 0")
    return mittag_leffler(frac.alpha, 1.0, 1.0, -_pgf_exponent(params, theta) * t ** frac.alpha)


def pmf_pgf_sum(table: PmfTable, theta: float) -> float:
    """Σ θ^n p(n) over the table window"""
    return float(np.sum(theta ** table.support.astype(float) * table.probs))


def _gamma_series_pmf(params: SkellamParams, spec: GammaSubordinator, t: float, n_min: int,
                      n_max: int) -> np.ndarray:
    """
    Σ_N B_N(n) on [n_min, n_max], where B_N(n) is the coefficient of θ^n in
    (λ1Σθ^j + λ2Σθ^{-j})^N / N! times E(e^{-k(λ1+λ2)D(t)} D(t)^N).

    B_N is one convolution with the jump weights away from B_{N-1}, scaled by
    the gamma moment ratio (bt + N − 1)/(N(a + k(λ1+λ2))). For k = 1 the terms
    regroup Σ_x (λ1)^{n+x}(λ2)^x/((n+x)! x!) E(e^{-(λ1+λ2)D} D^{2x+n}) by N = 2x + n.
    """
    k = params.k
    c = k * (params.lambda1 + params.lambda2)
    shape = spec.b * t
    kernel = _jump_kernel(k, params.lambda1, params.lambda2)
    reach = max(abs(n_min), abs(n_max))
    term = np.array([math.exp(log_gamma_exp_moment(spec.a, spec.b, t, c, 0))])
    total = np.zeros(n_max - n_min + 1)
    quiet = 0
    for jumps in range(SERIES_TERMS):
        half = k * jumps
        lo, hi = max(n_min, -half), min(n_max, half)
        if lo <= hi:
            current = term[lo + half:hi + half + 1]
            window = total[lo - n_min:hi - n_min + 1]
            window += current
            shrinking = (shape + jumps) * c < (jumps + 1) * (spec.a + c)
            # for k = 1 every other term is exactly 0 on a fixed n
            if half >= reach and shrinking and np.all(current <= SERIES_TOL * window):
                quiet += 1
                if quiet >= 2:
                    return total
            else:
                quiet = 0
        term = np.convolve(term, kernel) * ((shape + jumps) / ((jumps + 1) * (spec.a + c)))
    raise ConvergenceError(f"pmf series on [{n_min}, {n_max}] not truncated within {SERIES_TERMS} terms")


def _mixture_estimate(params: SkellamParams, draws: np.ndarray, n) -> Tuple[np.ndarray, np.ndarray]:
    # per draw, the series sums to the SPoK pmf at the drawn operational time
    n = np.atleast_1d(n)
    values = spok_pmf(params, draws[None, :], n[:, None])
    return values.mean(axis=1), values.std(axis=1, ddof=1) / math.sqrt(draws.size)


def tc_spok_pmf(params: SkellamParams, spec: SubordinatorSpec, t: float, n: int,
                mc_n: int = DEFAULT_MC_N, rng=None) -> EstimateWithError:
    """
    p^f(n, t) = E p(n, D(t)), the SPoK pmf averaged over the operational time.

    Series in closed form for the gamma family; Monte Carlo over D(t) otherwise.
    """
    if not t > 0:
        raise ValueError("tc_spok_pmf needs t > 0")
    if isinstance(spec, GammaSubordinator):
        return EstimateWithError.exact(float(_gamma_series_pmf(params, spec, t, int(n), int(n))[0]))
    if not spec.finite_moments:
        raise HypothesisViolationError(f"{spec.label()} has infinite moments")
    if rng is None:
        raise ValueError("A random stream is needed for non-gamma families")
    mean, se = _mixture_estimate(params, operational_draws('direct', spec, t, mc_n, rng, None), n)
    return EstimateWithError(float(mean[0]), float(se[0]), mc_n)


def inverse_tc_spok_pmf(params: SkellamParams, spec: SubordinatorSpec, t: float, n: int,
                        mc_n: int = DEFAULT_MC_N, rng=None,
                        step: Optional[float] = None) -> EstimateWithError:
    """p̄^f(n, t): the same series with H_f(t) in place of D_f(t), by Monte Carlo"""
    if not t > 0:
        raise ValueError("inverse_tc_spok_pmf needs t > 0")
    if rng is None:
        raise ValueError("inverse_tc_spok_pmf needs a random stream")
    mean, se = _mixture_estimate(params, operational_draws('inverse', spec, t, mc_n, rng, step), n)
    return EstimateWithError(float(mean[0]), float(se[0]), mc_n)


def tc_spok_pmf_table(params: SkellamParams, spec: SubordinatorSpec, t: float,
                      kind: str = 'direct', mc_n: int = DEFAULT_MC_N, rng=None,
                      step: Optional[float] = None, n_min: Optional[int] = None,
                      n_max: Optional[int] = None) -> PmfTable:
    """
    Table of p^f (kind='direct') or p̄^f (kind='inverse'); Monte Carlo tables
    share one set of operational-time draws across n.
    """
    r = spok_moments(params, 1.0, 1.0)
    if kind == 'direct' and isinstance(spec, GammaSubordinator):
        mean_d, var_d = spec.b * t / spec.a, spec.b * t / spec.a ** 2

        def evaluate(n):
            return _gamma_series_pmf(params, spec, t, int(n[0]), int(n[-1]))
    else:
        if kind == 'direct' and not spec.finite_moments:
            raise HypothesisViolationError(f"{spec.label()} has infinite moments")
        if rng is None:
            raise ValueError("A random stream is needed for Monte Carlo pmf tables")
        draws = operational_draws(kind, spec, t, mc_n, rng, step)
        mean_d, var_d = float(draws.mean()), float(draws.var())

        def evaluate(n):
            return _mixture_estimate(params, draws, n)[0]

    mean = r.mean * mean_d
    sd = math.sqrt(r.variance * mean_d + r.mean ** 2 * var_d)
    window, widen = _window(n_min, n_max, _tail_window(mean, sd, params.k))
    return _build_table(evaluate, window, widen)
