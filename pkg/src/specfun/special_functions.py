"""
Special functions used by the pmf, pgf and moment formulas.

Alternating power series (Mittag-Leffler, Wright) are summed with mpmath at a
working precision chosen from the size of their largest term, so cancellation
does not eat the requested digits. Everything else goes through scipy.special.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special

from ..utils.errors import ConvergenceError


@dataclass(frozen=True)
class EvalOptions:
    """Accuracy policy shared by every series evaluation"""

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_OPTIONS = EvalOptions()

GAMMA_OVERFLOW = 171.0
ML_WINDOW = (-10.0, 50.0)
WRIGHT_SERIES_LIMIT = 40.0  # on z**(1/(1-alpha))
BESSEL_LOG_SWITCH = 30.0
SMALL_TERM_RUN = 3
GUARD_DIGITS = 20
ML_CANCEL_DIGITS = 30  # series peaks beyond 10^30 switch to the integral when it applies
ML_MAX_DIGITS = 300
LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def gamma_fn(x: float) -> float:
    """Γ(x) for x > 0"""
    if not x > 0:
        raise ValueError(f"gamma_fn is defined here for x > 0, got {x}")
    if x > GAMMA_OVERFLOW:
        raise OverflowError(f"Γ({x}) overflows double precision")
    return float(special.gamma(x))


def _working_digits(peak_log10: float, options: EvalOptions) -> int:
    wanted = int(math.ceil(-math.log10(options.rel_tol)))
    return GUARD_DIGITS + wanted + int(math.ceil(max(peak_log10, 0.0)))


def _sum_series(term, peak_index: int, options: EvalOptions, name: str):
    """Add mpmath terms until SMALL_TERM_RUN consecutive small ones past the peak"""
    total = mpmath.mpf(0)
    small = 0
    for m in range(options.max_terms):
        t = term(m)
        total += t
        if m > peak_index and abs(t) <= options.rel_tol * abs(total):
            small += 1
            if small >= SMALL_TERM_RUN:
                return total
        else:
            small = 0
    raise ConvergenceError(f"{name}: no convergence within {options.max_terms} terms")


def _ml_negative_integral(alpha: float, x: float) -> float:
    """
    E_α(x) for x < 0 and 0 < α < 1 as the Laplace transform of its spectral
    density: (sin απ/π) ∫ r^{α−1} e^{−r T} / (r^{2α} + 2 r^α cos απ + 1) dr, T = (−x)^{1/α}.
    """
    scale = (-x) ** (1.0 / alpha)
    cos_a = math.cos(alpha * math.pi)

    def damped(u):
        q = (u / scale) ** alpha
        return math.exp(-u) / (q * q + 2.0 * q * cos_a + 1.0)

    # u^{α−1} at the origin goes into the algebraic weight
    head, _ = integrate.quad(damped, 0.0, 1.0, weight='alg', wvar=(alpha - 1.0, 0.0),
                             epsabs=0.0, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(lambda u: damped(u) * u ** (alpha - 1.0), 1.0, np.inf,
                             epsabs=0.0, epsrel=1e-13, limit=200)
    return math.sin(alpha * math.pi) / math.pi * scale ** (-alpha) * (head + tail)


def mittag_leffler(alpha: float, beta: float, gamma_p: float, x: float,
                   options: EvalOptions = DEFAULT_OPTIONS) -> float:
    """
    Three-parameter Mittag-Leffler function
    E^γ_{α,β}(x) = Σ_m Γ(γ+m) x^m / (m! Γ(γ) Γ(αm+β)).

    Args:
        alpha: in (0, 2]
        beta, gamma_p: > 0
        x: restricted to ML_WINDOW

    Returns:
        Value to options.rel_tol
    """
    if not 0 < alpha <= 2:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if beta <= 0 or gamma_p <= 0:
        raise ValueError(f"beta and gamma_p must be > 0, got {beta}, {gamma_p}")
    lo, hi = ML_WINDOW
    if not lo <= x <= hi:
        raise ValueError(f"mittag_leffler is evaluated on x in [{lo}, {hi}], got {x}")
    if x == 0:
        return float(mpmath.rgamma(beta))

    m = np.arange(options.max_terms, dtype=float)
    log_terms = (special.gammaln(gamma_p + m) - special.gammaln(gamma_p)
                 - special.gammaln(m + 1) - special.gammaln(alpha * m + beta)
                 + m * math.log(abs(x)))
    peak_index = int(np.argmax(log_terms))
    peak_log10 = float(log_terms[peak_index]) / math.log(10)
    if x > 0 and log_terms[peak_index] > LOG_FLOAT_MAX:
        # positive terms: the sum is at least its largest term
        raise OverflowError(f"E^{gamma_p}_{alpha},{beta}({x}) overflows double precision")
    if x < 0 and alpha < 1 and beta == 1 and gamma_p == 1 and peak_log10 > ML_CANCEL_DIGITS:
        return _ml_negative_integral(alpha, x)
    digits = _working_digits(peak_log10, options)
    if peak_index == options.max_terms - 1 or digits > ML_MAX_DIGITS:
        raise ConvergenceError(
            f"mittag_leffler: series at x={x} needs more than {options.max_terms} terms "
            f"or {ML_MAX_DIGITS} digits"
        )

    with mpmath.workdps(digits):
        xm = mpmath.mpf(x)
        a = mpmath.mpf(alpha)
        g0 = mpmath.gamma(gamma_p)

        def term(k):
            return (mpmath.gamma(gamma_p + k) / (g0 * mpmath.factorial(k))
                    * mpmath.rgamma(a * k + beta) * xm ** k)

        value = float(_sum_series(term, peak_index, options, "mittag_leffler"))
    if not math.isfinite(value):
        raise OverflowError(f"E^{gamma_p}_{alpha},{beta}({x}) overflows double precision")
    return value


def _wright_kanter(alpha: float, z: float) -> float:
    """M_α(z) from its non-oscillating integral over (0, π)"""
    expo = 1.0 / (1.0 - alpha)
    scale = z ** expo

    def integrand(phi):
        log_a = (expo * (math.log(math.sin(alpha * phi)) - math.log(math.sin(phi)))
                 + math.log(math.sin((1.0 - alpha) * phi)) - math.log(math.sin(alpha * phi)))
        if log_a > 700.0:
            return 0.0
        a_phi = math.exp(log_a)
        return math.exp(log_a - scale * a_phi)

    value, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-12, limit=400)
    return z ** (alpha * expo) * value / ((1.0 - alpha) * math.pi)


def wright_m(alpha: float, z: float, options: EvalOptions = DEFAULT_OPTIONS) -> float:
    """
    Wright M function M_α(z) = Σ_m (−z)^m / (m! Γ(1−mα−α)), z ≥ 0.

    Poles of Γ contribute exactly 0 (reciprocal-gamma convention).
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if z < 0:
        raise ValueError(f"wright_m needs z >= 0, got {z}")
    if z == 0:
        return float(mpmath.rgamma(1 - alpha))
    if z ** (1.0 / (1.0 - alpha)) > WRIGHT_SERIES_LIMIT:
        return _wright_kanter(alpha, z)

    m = np.arange(options.max_terms, dtype=float)
    with np.errstate(invalid='ignore'):
        log_terms = m * math.log(z) - special.gammaln(m + 1) - special.gammaln(1 - alpha * (m + 1))
    log_terms = np.where(np.isfinite(log_terms), log_terms, -np.inf)
    peak_index = int(np.argmax(log_terms))
    peak_log10 = float(log_terms[peak_index]) / math.log(10)

    with mpmath.workdps(_working_digits(peak_log10, options)):
        zm = mpmath.mpf(z)
        a = mpmath.mpf(alpha)

        def term(k):
            return (-zm) ** k * mpmath.rgamma(1 - a * (k + 1)) / mpmath.factorial(k)

        return float(_sum_series(term, peak_index, options, "wright_m"))


def log_bessel_i(n, z):
    """log I_n(z) through the exponentially scaled Bessel function; -inf where I_n(z) = 0"""
    n = np.asarray(n)
    z = np.asarray(z, dtype=float)
    with np.errstate(divide='ignore'):
        return np.log(special.ive(n, z)) + z


def bessel_i(n: int, z: float) -> float:
    """Modified Bessel function of the first kind I_n(z), n ≥ 0, z ≥ 0"""
    if n < 0 or int(n) != n:
        raise ValueError(f"bessel_i needs an integer n >= 0, got {n}")
    if z < 0:
        raise ValueError(f"bessel_i needs z >= 0, got {z}")
    if z <= BESSEL_LOG_SWITCH:
        return float(special.iv(n, z))
    log_value = float(log_bessel_i(n, z))
    if log_value > math.log(np.finfo(float).max):
        raise OverflowError(f"I_{n}({z}) overflows double precision")
    return math.exp(log_value)


def incomplete_beta(a, b, x):
    """Non-regularized incomplete beta B(a, b; x); accepts arrays for x"""
    if a <= 0 or b <= 0:
        raise ValueError(f"incomplete_beta needs a, b > 0, got {a}, {b}")
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr < 0) | (x_arr > 1)) or np.any(np.isnan(x_arr)):
        raise ValueError("incomplete_beta needs x in [0, 1]")
    value = special.betainc(a, b, x_arr) * special.beta(a, b)
    return float(value) if value.ndim == 0 else value


def erf(x):
    """Error function"""
    value = special.erf(x)
    return float(value) if np.ndim(value) == 0 else value
