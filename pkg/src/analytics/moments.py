"""
Moments, covariances, long-range dependence constants and iterated-logarithm
machinery for the SPoK family.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy import special

from ..estimators.monte_carlo import EstimateWithError, decay_fit
from ..processes import FracParams, SkellamParams
from ..specfun import gamma_fn, incomplete_beta
from ..subordinators import (
    GammaSubordinator,
    RngStream,
    Stable,
    SubordinatorSpec,
    TimeGrid,
    bernstein_inverse,
    fractional_moment,
    sample_pair,
    subordinator_liminf_constant,
)
from ..utils.errors import HypothesisViolationError


@dataclass
class MomentReport:
    mean: float
    variance: float
    cov: Optional[float] = None
    std_errors: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LrdReport:
    exponent: float
    constant_c: float
    asymptote_ratio_at_tmax: float
    r_squared: float = 1.0
    degenerate: bool = False

    @property
    def verdict(self) -> str:
        return lrd_verdict(-self.exponent)

    def to_dict(self) -> dict:
        out = asdict(self)
        out['decay_rate'] = -self.exponent
        out['verdict'] = self.verdict
        return out


def lrd_verdict(decay_rate: float) -> str:
    """LRD for correlation decay t^{-γ} with γ in (0, 1), SRD for γ in (1, 2)"""
    if 0 < decay_rate < 1:
        return "LRD"
    if 1 < decay_rate < 2:
        return "SRD"
    return "undetermined"


def _check_order(s: float, t: float, strict: bool = False):
    if s > t:
        raise ValueError(f"Times must satisfy s <= t, got s={s}, t={t}")
    if s < 0 or (strict and s <= 0):
        raise ValueError(f"s must be {'> 0' if strict else '>= 0'}, got {s}")


def r_constants(params: SkellamParams):
    """r1 = k(k+1)(λ1−λ2)/2, r2 = k(k+1)(2k+1)(λ1+λ2)/6"""
    k = params.k
    r1 = k * (k + 1) * (params.lambda1 - params.lambda2) / 2
    r2 = k * (k + 1) * (2 * k + 1) * (params.lambda1 + params.lambda2) / 6
    return r1, r2


def ppok_moments(k: int, lam: float, s: float, t: float) -> MomentReport:
    """Compound-Poisson moments of the PPoK"""
    _check_order(s, t)
    rate_mean = k * (k + 1) * lam / 2
    rate_var = k * (k + 1) * (2 * k + 1) * lam / 6
    return MomentReport(mean=rate_mean * t, variance=rate_var * t, cov=rate_var * s)


def spok_moments(params: SkellamParams, s: float, t: float) -> MomentReport:
    """Mean r1 t, variance r2 t, covariance r2 s"""
    _check_order(s, t)
    r1, r2 = r_constants(params)
    return MomentReport(mean=r1 * t, variance=r2 * t, cov=r2 * s)


def inv_stable_mean(alpha: float, t: float) -> float:
    return t ** alpha / gamma_fn(alpha + 1)


def inv_stable_mean_cov(alpha: float, s: float, t: float) -> MomentReport:
    """
    Mean t^α/Γ(α+1), variance (2/Γ(2α+1) − 1/Γ²(α+1)) t^{2α} and
    covariance (α s^{2α} B(α,α+1) + α t^{2α} B(α,α+1; s/t) − (ts)^α)/Γ²(α+1)
    of the inverse stable subordinator.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    _check_order(s, t, strict=True)
    g2 = gamma_fn(alpha + 1) ** 2
    beta_full = float(special.beta(alpha, alpha + 1))
    variance = (2.0 / gamma_fn(2 * alpha + 1) - 1.0 / g2) * t ** (2 * alpha)
    cov = (alpha * s ** (2 * alpha) * beta_full
           + alpha * t ** (2 * alpha) * incomplete_beta(alpha, alpha + 1, s / t)
           - (t * s) ** alpha) / g2
    return MomentReport(mean=inv_stable_mean(alpha, t), variance=variance, cov=cov)


def fspok_moments(params: SkellamParams, frac: FracParams, s: float, t: float) -> MomentReport:
    """Mean r1 E Y(t), variance r2 E Y(t) + r1² Var Y(t), covariance r2 E Y(s) + r1² Cov"""
    if frac.alpha == 1:
        return spok_moments(params, s, t)
    _check_order(s, t, strict=True)
    r1, r2 = r_constants(params)
    inv = inv_stable_mean_cov(frac.alpha, s, t)
    return MomentReport(
        mean=r1 * inv.mean,
        variance=r2 * inv.mean + r1 ** 2 * inv.variance,
        cov=r2 * inv_stable_mean(frac.alpha, s) + r1 ** 2 * inv.cov,
    )


def fspok_correlation(params: SkellamParams, frac: FracParams, s: float, t: float) -> float:
    at_t = fspok_moments(params, frac, s, t)
    at_s = fspok_moments(params, frac, s, s)
    return at_t.cov / math.sqrt(at_s.variance * at_t.variance)


def _grid_times(t_grid) -> np.ndarray:
    return t_grid.times if isinstance(t_grid, TimeGrid) else np.asarray(t_grid, dtype=float)


def fspok_lrd(params: SkellamParams, frac: FracParams, s: float, t_grid) -> LrdReport:
    """
    Fit the decay of Corr(S_α(s), S_α(t)) along the grid and compare it with
    the closed-form asymptote c(s) t^{-α}.

    With λ1 = λ2 the correlation is exactly (s/t)^{α/2}; that branch is
    reported as degenerate.
    """
    times = _grid_times(t_grid)
    if times.size < 3:
        raise ValueError("degenerate fit: fspok_lrd needs at least 3 grid times")
    if not (s > 0 and np.all(times > s)):
        raise ValueError("fspok_lrd needs 0 < s < every grid time")

    alpha = frac.alpha
    corr = np.array([fspok_correlation(params, frac, s, t) for t in times])
    fit = decay_fit(np.column_stack([times, corr]))
    t_max = float(times[-1])
    r1, r2 = r_constants(params)

    if r1 == 0:
        constant = s ** (alpha / 2)
        ratio = float(corr[-1] / (constant * t_max ** (-alpha / 2)))
        return LrdReport(fit.exponent, constant, ratio, fit.r_squared, degenerate=True)

    d_const = 1.0 / gamma_fn(2 * alpha) - 1.0 / (alpha * gamma_fn(alpha) ** 2)
    constant = (alpha * r2 / (gamma_fn(1 + alpha) * r1 ** 2)
                + alpha * s ** alpha / gamma_fn(1 + 2 * alpha)) / d_const
    var_s = fspok_moments(params, frac, s, s).variance
    normalizer = abs(r1) * s ** alpha * math.sqrt(d_const / alpha) / math.sqrt(var_s)
    ratio = float(corr[-1] / (constant * normalizer * t_max ** (-alpha)))
    return LrdReport(fit.exponent, constant, ratio, fit.r_squared)


class MomentSource:
    """
    Supplies E(X^p(t)) and the paired covariance term for X = D_f
    (kind='direct') or X = H_f (kind='inverse').

    Closed forms are used where they exist (gamma moments of D_f, moments of
    the inverse stable subordinator); everything else is Monte Carlo on
    successive streams of one seed.
    """

    def __init__(self, kind: str, spec: SubordinatorSpec, n: int = 20_000, seed: int = 0,
                 step: Optional[float] = None, closed_form: bool = True):
        if kind not in ('direct', 'inverse'):
            raise ValueError(f"kind must be 'direct' or 'inverse', got '{kind}'")
        self.kind = kind
        self.spec = spec
        self.n = n
        self.seed = seed
        self.step = step
        self.closed_form = closed_form
        self._calls = 0

    def _stream(self) -> RngStream:
        self._calls += 1
        return RngStream(self.seed, self._calls)

    def moment(self, power: float, t: float) -> EstimateWithError:
        spec = self.spec
        if self.closed_form and self.kind == 'direct' and isinstance(spec, GammaSubordinator):
            bt = spec.b * t
            log_value = special.gammaln(bt + power) - special.gammaln(bt) - power * math.log(spec.a)
            return EstimateWithError.exact(math.exp(log_value))
        if self.closed_form and self.kind == 'inverse' and isinstance(spec, Stable):
            beta = spec.alpha
            return EstimateWithError.exact(
                t ** (power * beta) * gamma_fn(1 + power) / gamma_fn(1 + power * beta)
            )
        return fractional_moment(self.kind, spec, power, t, self.n, self._stream(), self.step)

    def cross_term(self, alpha: float, s: float, t: float) -> EstimateWithError:
        """E(α X(t)^{2α} B(α,α+1; X(s)/X(t))) − E X(s)^α · E X(t)^α from paired draws"""
        u, v = sample_pair(self.kind, self.spec, s, t, self.n, self._stream(), self.step)
        ratio = np.divide(u, v, out=np.zeros_like(u), where=v > 0)
        x = alpha * v ** (2 * alpha) * incomplete_beta(alpha, alpha + 1, np.clip(ratio, 0.0, 1.0))
        a, c = u ** alpha, v ** alpha
        value = x.mean() - a.mean() * c.mean()
        influence = x - a.mean() * c - c.mean() * a
        return EstimateWithError(float(value), float(influence.std(ddof=1) / math.sqrt(u.size)), u.size)


def _shared_constants(params: SkellamParams, alpha: float):
    r1, r2 = r_constants(params)
    g = gamma_fn(alpha + 1)
    l1, l2 = r1 / g, r2 / g
    d = l1 ** 2 * alpha * float(special.beta(alpha, alpha + 1))
    return l1, l2, d


def _moment_pair(source: MomentSource, alpha: float, t: float):
    e1 = source.moment(alpha, t)
    e2 = source.moment(2 * alpha, t)
    if e1.diverged or e2.diverged:
        raise HypothesisViolationError(f"E(X^{2 * alpha}({t})) diverges for {source.spec.label()}")
    return e1, e2


def _subordinated_moments(params: SkellamParams, frac: FracParams, s: float, t: float,
                          source: MomentSource) -> MomentReport:
    _check_order(s, t, strict=True)
    alpha = frac.alpha
    l1, l2, d = _shared_constants(params, alpha)

    e1_t, e2_t = _moment_pair(source, alpha, t)
    mean = l1 * e1_t.value
    variance = e1_t.value * (l2 - l1 ** 2 * e1_t.value) + 2 * d * e2_t.value
    var_se = math.hypot((l2 - 2 * l1 ** 2 * e1_t.value) * e1_t.std_error, 2 * d * e2_t.std_error)

    if s == t:
        cov, cov_se = variance, var_se
    else:
        e1_s, e2_s = _moment_pair(source, alpha, s)
        cross = source.cross_term(alpha, s, t)
        cov = l2 * e1_s.value + d * e2_s.value + l1 ** 2 * cross.value
        cov_se = math.sqrt((l2 * e1_s.std_error) ** 2 + (d * e2_s.std_error) ** 2
                           + (l1 ** 2 * cross.std_error) ** 2)

    return MomentReport(
        mean=mean,
        variance=max(variance, 0.0),
        cov=cov,
        std_errors={'mean': abs(l1) * e1_t.std_error, 'variance': var_se, 'cov': cov_se},
    )


def tcfspok_moments(params: SkellamParams, frac: FracParams, spec: SubordinatorSpec, s: float,
                    t: float, moment_source: Optional[MomentSource] = None) -> MomentReport:
    """
    Mean l1 E D^α(t), variance E D^α(t)(l2 − l1² E D^α(t)) + 2d E D^{2α}(t) and
    covariance l2 E D^α(s) + d E D^{2α}(s) + l1² · cross term, with
    l1 = r1/Γ(α+1), l2 = r2/Γ(α+1), d = l1² α B(α, α+1).
    """
    if not spec.finite_moments:
        raise HypothesisViolationError(f"{spec.label()} has infinite moments")
    source = moment_source or MomentSource('direct', spec)
    if source.kind != 'direct':
        raise ValueError("tcfspok_moments needs a direct moment source")
    return _subordinated_moments(params, frac, s, t, source)


def inverse_tc_moments(params: SkellamParams, frac: FracParams, spec: SubordinatorSpec, s: float,
                       t: float, moment_source: Optional[MomentSource] = None) -> MomentReport:
    """Same forms as tcfspok_moments with moments of H_f; stable families are allowed"""
    source = moment_source or MomentSource('inverse', spec)
    if source.kind != 'inverse':
        raise ValueError("inverse_tc_moments needs an inverse moment source")
    return _subordinated_moments(params, frac, s, t, source)


def tcfspok_lrd_check(params: SkellamParams, frac: FracParams, spec: SubordinatorSpec, rho: float,
                      k1: float, k2: float, s: float, t_grid,
                      moment_source: Optional[MomentSource] = None) -> LrdReport:
    """
    Check Corr(Z(s), Z(t)) ~ c1(s) t^{-ρ} when E D^{iα}(t) ~ k_i t^{iρ}, with
    c1(s) = (l2 E D^α(s) + d E D^{2α}(s)) / sqrt(Var Z(s) (2 d k2 − k1² l1²)).
    """
    if not spec.finite_moments:
        raise HypothesisViolationError(f"{spec.label()} has infinite moments")
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if not (k1 > 0 and k2 > 0):
        raise ValueError("k1 and k2 must be > 0")
    if k2 < k1 ** 2 * (1 - 1e-12):
        raise HypothesisViolationError(f"k2 = {k2} < k1² = {k1 ** 2}")
    l1, l2, d = _shared_constants(params, frac.alpha)
    prefactor = 2 * d * k2 - k1 ** 2 * l1 ** 2
    if not prefactor > 0:
        raise HypothesisViolationError(f"2 d k2 − k1² l1² = {prefactor} must be > 0")

    times = _grid_times(t_grid)
    if times.size < 3:
        raise ValueError("degenerate fit: tcfspok_lrd_check needs at least 3 grid times")
    if not (s > 0 and np.all(times > s)):
        raise ValueError("tcfspok_lrd_check needs 0 < s < every grid time")

    source = moment_source or MomentSource('direct', spec)
    at_s = tcfspok_moments(params, frac, spec, s, s, source)
    e1_s, e2_s = _moment_pair(source, frac.alpha, s)
    constant = (l2 * e1_s.value + d * e2_s.value) / math.sqrt(at_s.variance * prefactor)

    corr = []
    for t in times:
        report = tcfspok_moments(params, frac, spec, s, float(t), source)
        corr.append(report.cov / math.sqrt(at_s.variance * report.variance))
    corr = np.array(corr)
    fit = decay_fit(np.column_stack([times, corr]))
    ratio = float(corr[-1] / (constant * times[-1] ** (-rho)))
    return LrdReport(fit.exponent, constant, ratio, fit.r_squared)


def lil_constant(params: SkellamParams, frac: FracParams, gamma_idx: float) -> float:
    """(k(k+1)/2)(λ1−λ2) γ^α (1−γ)^{α(1−γ)/γ}"""
    r1, _ = r_constants(params)
    return r1 * subordinator_liminf_constant(gamma_idx) ** frac.alpha


def lil_g(spec: SubordinatorSpec, t: float) -> float:
    """g(t) = log log t / φ(log log t / t), t > e"""
    if not t > math.e:
        raise ValueError(f"lil_g needs t > e, got {t}")
    loglog = math.log(math.log(t))
    return loglog / bernstein_inverse(spec, loglog / t)
