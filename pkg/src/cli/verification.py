"""
End-to-end numerical verification.

Each criterion returns one entry with name, expected, observed, tolerance
and passed; sub-checks are kept under "details". Criteria draw from their
own stream of the run seed so any subset reproduces the full run.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import integrate

from ..analytics import (
    MomentSource,
    fspok_lrd,
    fspok_moments,
    fspok_pgf,
    fspok_pmf_table,
    fde_residual,
    inv_stable_mean_cov,
    inverse_tc_moments,
    lil_constant,
    lil_g,
    pmf_pgf_sum,
    spok_moments,
    spok_pgf,
    spok_pmf_table,
    tc_spok_pmf_table,
    tcfspok_lrd_check,
    tcfspok_moments,
    wright_cutoff,
)
from ..estimators import empirical_pmf, mc_moments, tv_distance
from ..processes import (
    FracParams,
    SkellamParams,
    sample_fspok,
    sample_inverse_tcfspok,
    sample_spok,
    sample_tcfspok,
)
from ..specfun import gamma_fn, mittag_leffler, wright_m
from ..subordinators import (
    GammaSubordinator,
    RngStream,
    Stable,
    TimeGrid,
    bernstein_inverse,
    sample_inverse_stable,
    subordinator_liminf_constant,
)
from ..utils import summarize_checks
from ..utils.errors import ConfigError

BASE = SkellamParams(2, 1.0, 0.5)
HIGH_DRIFT = SkellamParams(2, 4.0, 0.1)
MC_BAND = 3.0
TV_TOL = 0.01
PGF_WINDOW = (-150, 40)
LRD_S = 0.01


def _scaled(n: int, scale: float, floor: int = 1000) -> int:
    return max(floor, int(n * scale))


def _entry(name: str, expected, observed, tolerance, passed: bool,
           details: Optional[List[Dict]] = None) -> Dict:
    entry = {
        "name": name,
        "expected": expected,
        "observed": observed,
        "tolerance": tolerance,
        "passed": bool(passed),
    }
    if details is not None:
        entry["details"] = details
    return entry


def _detail(label: str, expected: float, observed: float, tolerance: float) -> Dict:
    return {
        "label": label,
        "expected": expected,
        "observed": observed,
        "tolerance": tolerance,
        "passed": bool(abs(observed - expected) <= tolerance),
    }


def _from_details(name: str, details: List[Dict]) -> Dict:
    worst = max(details, key=lambda d: abs(d["observed"] - d["expected"]) / max(d["tolerance"], 1e-300))
    return _entry(name, worst["expected"], worst["observed"], worst["tolerance"],
                  all(d["passed"] for d in details), details)


def _moment_details(prefix: str, report, mc, with_cov: bool = True) -> List[Dict]:
    errors = report.std_errors
    pairs = [("mean", report.mean, errors.get("mean", 0.0), mc.mean_t),
             ("variance", report.variance, errors.get("variance", 0.0), mc.var_t)]
    if with_cov:
        pairs.append(("cov", report.cov, errors.get("cov", 0.0), mc.cov_st))
    return [_detail(f"{prefix} {label}", value, estimate.value,
                    MC_BAND * math.hypot(se, estimate.std_error))
            for label, value, se, estimate in pairs]


# -- criteria ------------------------------------------------------------

def check_special_functions(rng: RngStream, scale: float) -> Dict:
    details = []
    x = np.linspace(-5, 5, 21)
    rel = max(abs(mittag_leffler(1.0, 1.0, 1.0, float(v)) - math.exp(v)) / math.exp(v) for v in x)
    details.append(_detail("E_{1,1}(x) vs exp(x), relative", 0.0, rel, 1e-10))

    z = np.linspace(0, 6, 25)
    err = max(abs(wright_m(0.5, float(v)) - math.exp(-v * v / 4) / math.sqrt(math.pi)) for v in z)
    details.append(_detail("M_{1/2}(z) vs exp(-z²/4)/√π", 0.0, err, 1e-8))

    for alpha in (0.3, 0.5, 0.7):
        mass, _ = integrate.quad(lambda v: wright_m(alpha, v), 0.0, wright_cutoff(alpha), limit=200)
        details.append(_detail(f"∫ M_{alpha}", 1.0, mass, 1e-6))
    return _from_details("special-functions", details)


def check_spok_law(rng: RngStream, scale: float) -> Dict:
    n = _scaled(100_000, scale)
    grid = TimeGrid([0.5, 1.0])
    batch = sample_spok(BASE, grid, rng, n)
    table = spok_pmf_table(BASE, 1.0)
    tv = tv_distance(table, empirical_pmf(batch.values[:, 1]))
    details = [_detail("TV(empirical, pmf) at t=1", 0.0, tv, TV_TOL)]
    details += _moment_details("SPoK", spok_moments(BASE, 0.5, 1.0), mc_moments(batch, 0, 1))
    return _from_details("spok-law", details)


def check_fspok_pmf(rng: RngStream, scale: float) -> Dict:
    n = _scaled(100_000, scale)
    frac = FracParams(0.7)
    table = fspok_pmf_table(BASE, frac, 1.0)
    batch = sample_fspok(BASE, frac, TimeGrid([1.0]), rng, n)
    tv = tv_distance(table, empirical_pmf(batch.values[:, 0]))
    details = [
        _detail("TV(empirical, pmf) at t=1", 0.0, tv, TV_TOL),
        _detail("mass on window + truncation", 1.0, float(table.probs.sum()) + table.truncation_mass, 1e-6),
        _detail("truncation mass", 0.0, table.truncation_mass, 1e-6),
    ]
    return _from_details("fspok-pmf", details)


def check_pgf_duality(rng: RngStream, scale: float) -> Dict:
    details = []
    frac = FracParams(0.7)
    spok_table = spok_pmf_table(BASE, 1.0, *PGF_WINDOW)
    fspok_table = fspok_pmf_table(BASE, frac, 1.0, *PGF_WINDOW)
    for theta in (0.3, 0.6, 0.9):
        exact = spok_pgf(BASE, theta, 1.0)
        details.append(_detail(f"SPoK pgf θ={theta}, relative", 0.0,
                               abs(pmf_pgf_sum(spok_table, theta) - exact) / exact, 1e-5))
        exact = fspok_pgf(BASE, frac, theta, 1.0)
        details.append(_detail(f"FSPoK pgf θ={theta}, relative", 0.0,
                               abs(pmf_pgf_sum(fspok_table, theta) - exact) / exact, 1e-5))
        details.append(_detail(f"α=1 reduction θ={theta}", spok_pgf(BASE, theta, 1.0),
                               fspok_pgf(BASE, FracParams(1.0), theta, 1.0), 1e-12))
    return _from_details("pgf-duality", details)


def check_fde_residual(rng: RngStream, scale: float) -> Dict:
    grid = TimeGrid.uniform(1.0, 1001)
    fractional = fde_residual(BASE, FracParams(0.7), (-10, 10), grid, relative=True)
    classical = fde_residual(SkellamParams(1, 1.0, 0.5), FracParams(1.0), (-10, 10), grid)
    details = [
        _detail("α=0.7 relative residual", 0.0, fractional, 1e-2),
        _detail("α=1 residual", 0.0, classical, 1e-4),
    ]
    return _from_details("fde-residual", details)


def check_inverse_stable_moments(rng: RngStream, scale: float) -> Dict:
    n = _scaled(1_000_000, scale)
    gen = rng.generator()
    details = []
    for alpha in (0.5, 0.7):
        for t in (0.5, 1.0, 2.0):
            draws = sample_inverse_stable(alpha, t, gen, size=n)
            mc = mc_moments(draws[:, None], 0, 0)
            exact_mean = t ** alpha / gamma_fn(alpha + 1)
            exact_var = (2 / gamma_fn(2 * alpha + 1) - 1 / gamma_fn(alpha + 1) ** 2) * t ** (2 * alpha)
            details.append(_detail(f"E Y_{alpha}({t})", exact_mean, mc.mean_t.value,
                                   MC_BAND * mc.mean_t.std_error))
            details.append(_detail(f"Var Y_{alpha}({t})", exact_var, mc.var_t.value,
                                   MC_BAND * mc.var_t.std_error))
    # the closed-form covariance reduces to the variance at s = t
    at_s = inv_stable_mean_cov(0.7, 1.0, 1.0)
    details.append(_detail("Cov Y(1), Y(1) = Var Y(1)", at_s.variance, at_s.cov, 1e-12))
    return _from_details("inverse-stable-moments", details)


def check_fspok_moments(rng: RngStream, scale: float) -> Dict:
    n = _scaled(100_000, scale)
    frac = FracParams(0.7)
    batch = sample_fspok(BASE, frac, TimeGrid([0.5, 1.0]), rng, n)
    details = _moment_details("FSPoK", fspok_moments(BASE, frac, 0.5, 1.0), mc_moments(batch, 0, 1))
    return _from_details("fspok-moments", details)


def check_lrd_fspok(rng: RngStream, scale: float) -> Dict:
    grid = TimeGrid(np.logspace(2, 5, 30))
    details = []
    for alpha in (0.3, 0.5, 0.7, 0.9):
        report = fspok_lrd(HIGH_DRIFT, FracParams(alpha), LRD_S, grid)
        details.append(_detail(f"decay rate α={alpha}", alpha, -report.exponent, 0.02))
        details.append(_detail(f"asymptote ratio α={alpha}", 1.0, report.asymptote_ratio_at_tmax, 0.05))
        details.append(_detail(f"LRD verdict α={alpha}", 1.0, float(report.verdict == "LRD"), 0.0))
    return _from_details("lrd-fspok", details)


def check_tcfspok_gamma(rng: RngStream, scale: float) -> Dict:
    n = _scaled(100_000, scale)
    frac = FracParams(0.7)
    spec = GammaSubordinator(1.0, 1.0)
    batch = sample_tcfspok(BASE, frac, spec, TimeGrid([1.0]), rng.substream(100 + rng.stream_id), n)
    report = tcfspok_moments(BASE, frac, spec, 1.0, 1.0, MomentSource("direct", spec))
    details = _moment_details("TCFSPoK", report, mc_moments(batch, 0, 0), with_cov=False)

    source = MomentSource("direct", spec, n=_scaled(20_000, scale), seed=rng.seed)
    lrd = tcfspok_lrd_check(HIGH_DRIFT, frac, spec, frac.alpha, 1.0, 1.0, 1.0,
                            TimeGrid(np.logspace(2, 4, 10)), source)
    details.append(_detail("decay rate", frac.alpha, -lrd.exponent, 0.05))
    return _from_details("tcfspok-gamma", details)


def check_series_pmf(rng: RngStream, scale: float) -> Dict:
    n = _scaled(100_000, scale)
    spec = GammaSubordinator(1.0, 1.0)
    table = tc_spok_pmf_table(BASE, spec, 1.0)
    batch = sample_tcfspok(BASE, FracParams(1.0), spec, TimeGrid([1.0]), rng, n)
    tv = tv_distance(table, empirical_pmf(batch.values[:, 0]))
    details = [
        _detail("mass on window", 1.0, float(table.probs.sum()), 1e-6),
        _detail("TV(empirical, series pmf)", 0.0, tv, TV_TOL),
    ]
    return _from_details("series-pmf", details)


def check_inverse_subordinated_moments(rng: RngStream, scale: float) -> Dict:
    n = _scaled(10_000, scale)
    frac = FracParams(0.7)
    spec = Stable(0.5)
    batch = sample_inverse_tcfspok(BASE, frac, spec, TimeGrid([1.0]), 1e-3, rng, n)
    report = inverse_tc_moments(BASE, frac, spec, 1.0, 1.0, MomentSource("inverse", spec))
    details = _moment_details("inverse TCFSPoK", report, mc_moments(batch, 0, 0), with_cov=False)
    return _from_details("inverse-subordinated-moments", details)


def check_lil_machinery(rng: RngStream, scale: float) -> Dict:
    details = []
    for alpha in (0.5, 0.7):
        spec = Stable(alpha)
        for t in (1e2, 1e3):
            loglog = math.log(math.log(t))
            closed = loglog / (loglog / t) ** (1 / alpha)
            details.append(_detail(f"g(t) relative, α={alpha}, t={t:g}", 0.0,
                                   abs(lil_g(spec, t) - closed) / closed, 1e-8))
        inverse = bernstein_inverse(spec, 0.3)
        details.append(_detail(f"φ(φ⁻¹(0.3)), α={alpha}", 0.3, inverse ** alpha, 1e-10))
    gamma_idx = 0.25
    expected = (gamma_idx * (1 - gamma_idx) ** ((1 - gamma_idx) / gamma_idx))
    details.append(_detail("liminf constant γ=0.25", expected,
                           subordinator_liminf_constant(gamma_idx), 1e-12))
    frac = FracParams(0.7)
    details.append(_detail("lil constant γ=0.25", 1.5 * expected ** 0.7,
                           lil_constant(BASE, frac, gamma_idx), 1e-12))
    return _from_details("lil-machinery", details)


CRITERIA: Dict[str, Callable[[RngStream, float], Dict]] = {
    "special-functions": check_special_functions,
    "spok-law": check_spok_law,
    "fspok-pmf": check_fspok_pmf,
    "pgf-duality": check_pgf_duality,
    "fde-residual": check_fde_residual,
    "inverse-stable-moments": check_inverse_stable_moments,
    "fspok-moments": check_fspok_moments,
    "lrd-fspok": check_lrd_fspok,
    "tcfspok-gamma": check_tcfspok_gamma,
    "series-pmf": check_series_pmf,
    "inverse-subordinated-moments": check_inverse_subordinated_moments,
    "lil-machinery": check_lil_machinery,
}


def run_verification(seed: int, only: Optional[str] = None, scale: float = 1.0) -> Dict:
    """
    Run every criterion, or just the one named by only.

    Returns:
        {"checks": [...], "summary": {...}, "passed": bool}
    """
    if only is not None and only not in CRITERIA:
        raise ConfigError([f"unknown criterion '{only}', expected one of {sorted(CRITERIA)}"])
    names = [only] if only else list(CRITERIA)
    checks = []
    for i, name in enumerate(names, 1):
        stream = RngStream(seed, list(CRITERIA).index(name) + 1)
        print(f"{i}/{len(names)} {name}...")
        entry = CRITERIA[name](stream, scale)
        print(f"    {'✓' if entry['passed'] else '✗'} observed {entry['observed']:.6g}, "
              f"expected {entry['expected']:.6g} ± {entry['tolerance']:.2g}")
        checks.append(entry)
    summary = summarize_checks(checks)
    return {"checks": checks, "summary": summary, "passed": summary["failed"] == 0}
