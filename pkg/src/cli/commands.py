"""
Command implementations behind skellam_manager.py: simulate, pmf, moments and
lrd. Each one takes a validated RunConfig, writes its files and returns the
JSON payload it wrote.
"""

import math
from typing import Callable, Dict, Optional

import numpy as np
import polars as pl

from ..analytics import (
    LrdReport,
    MomentSource,
    PmfTable,
    fspok_lrd,
    fspok_moments,
    fspok_pmf_table,
    inverse_tc_moments,
    ppok_moments,
    spok_moments,
    spok_pmf_table,
    tc_spok_pmf_table,
    tcfspok_lrd_check,
    tcfspok_moments,
)
from ..estimators import decay_fit, empirical_pmf, mc_moments, tv_distance
from ..processes import (
    sample_fspok,
    sample_inverse_tcfspok,
    sample_ppok,
    sample_spok,
    sample_tcfspok,
)
from ..subordinators import RngStream, TimeGrid
from ..utils import (
    PmfTableCache,
    paths_to_frame,
    sidecar_path,
    write_csv,
    write_json_report,
)
from .config import RunConfig

MC_BAND = 3.0  # standard errors


def _banner(title: str):
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def sample_batch(config: RunConfig, grid: TimeGrid, n_paths: int, rng: RngStream):
    """Replicated paths of the configured process on grid"""
    params, frac, spec = config.params, config.frac, config.spec
    if config.process == "ppok":
        return sample_ppok(params.k, params.lambda1, grid, rng, n_paths)
    if config.process == "spok":
        return sample_spok(params, grid, rng, n_paths)
    if config.process == "fspok":
        return sample_fspok(params, frac, grid, rng, n_paths, config.step)
    if config.process == "tcfspok":
        return sample_tcfspok(params, frac, spec, grid, rng, n_paths, config.step)
    return sample_inverse_tcfspok(params, frac, spec, grid, config.step, rng, n_paths)


def cmd_simulate(config: RunConfig) -> Dict:
    _banner(f"SIMULATE {config.process.upper()} ({config.reps} replications)")
    grid = config.grid()
    batch = sample_batch(config, grid, config.reps, RngStream(config.seed))
    frame = paths_to_frame(grid.times, batch.values)

    csv_path = write_csv(frame, config.output_path(".csv"))
    payload = {
        "command": "simulate",
        "rows": frame.height,
        "seed": config.seed,
        "csv": str(csv_path),
    }
    write_json_report(payload, config.to_dict(), sidecar_path(csv_path))
    print(f"✓ Wrote {frame.height} rows to {csv_path}")
    return payload


# -- pmf -----------------------------------------------------------------

def _analytic_table(config: RunConfig) -> PmfTable:
    params, t = config.params, config.t
    if t == 0:
        # every process in the family starts at 0
        return spok_pmf_table(params, 0.0, config.n_min, config.n_max)
    if config.process == "spok":
        return spok_pmf_table(params, t, config.n_min, config.n_max)
    if config.process == "fspok":
        return fspok_pmf_table(params, config.frac, t, config.n_min, config.n_max)
    kind = "direct" if config.process == "tcfspok" else "inverse"
    return tc_spok_pmf_table(params, config.spec, t, kind=kind, mc_n=config.mc_n,
                             rng=RngStream(config.seed, 1), step=config.step,
                             n_min=config.n_min, n_max=config.n_max)


def _pmf_cache_key(config: RunConfig) -> Dict:
    return {
        "process": config.process,
        "params": config.params.to_dict(),
        "alpha": config.alpha,
        "subordinator": config.subordinator,
        "t": config.t,
        "window": [config.n_min, config.n_max],
        "mc_n": config.mc_n,
        "seed": config.seed,
        "step": config.step,
    }


def _table_from_frame(frame: pl.DataFrame) -> PmfTable:
    n = frame["n"].to_numpy()
    probs = frame["analytic_p"].to_numpy().astype(float)
    return PmfTable(int(n[0]), int(n[-1]), probs, max(0.0, 1.0 - float(probs.sum())))


def cmd_pmf(config: RunConfig, cache: Optional[PmfTableCache] = None) -> Dict:
    _banner(f"PMF OF {config.process.upper()} AT t={config.t}")
    cache = cache or PmfTableCache()

    def compute() -> pl.DataFrame:
        table = _analytic_table(config)
        return pl.DataFrame({"n": table.support, "analytic_p": table.probs})

    frame = cache.get_or_compute(_pmf_cache_key(config), compute, use_cache=config.use_cache)
    table = _table_from_frame(frame)
    payload = {
        "command": "pmf",
        "seed": config.seed,
        "window": [table.n_min, table.n_max],
        "total_mass": float(table.probs.sum()),
        "truncation_mass": table.truncation_mass,
    }

    if config.compare_mc > 0:
        print(f"Sampling {config.compare_mc} replications for comparison...")
        batch = sample_batch(config, TimeGrid([config.t]), config.compare_mc,
                             RngStream(config.seed, 2))
        empirical = empirical_pmf(batch.values[:, 0])
        probs, outside = empirical.probs_on(table.n_min, table.n_max)
        frame = frame.with_columns(
            pl.Series("empirical_p", probs),
        ).with_columns(
            (pl.col("analytic_p") - pl.col("empirical_p")).abs().alias("abs_diff"),
        )
        payload["tv_distance"] = tv_distance(table, empirical)
        payload["empirical_mass_outside"] = outside
        print(f"    TV distance: {payload['tv_distance']:.4g}")
    else:
        frame = frame.with_columns(
            pl.lit(None, dtype=pl.Float64).alias("empirical_p"),
            pl.lit(None, dtype=pl.Float64).alias("abs_diff"),
        )

    csv_path = write_csv(frame, config.output_path(".csv"))
    payload["csv"] = str(csv_path)
    write_json_report(payload, config.to_dict(), sidecar_path(csv_path))
    print(f"✓ Wrote pmf on [{table.n_min}, {table.n_max}] to {csv_path}")
    return payload


# -- moments -------------------------------------------------------------

def analytic_moments(config: RunConfig):
    params, frac, spec, s, t = config.params, config.frac, config.spec, config.s, config.t
    if config.process == "ppok":
        return ppok_moments(params.k, params.lambda1, s, t)
    if config.process == "spok":
        return spok_moments(params, s, t)
    if config.process == "fspok":
        return fspok_moments(params, frac, s, t)
    if config.process == "tcfspok":
        source = MomentSource("direct", spec, n=config.mc_n, seed=config.seed)
        return tcfspok_moments(params, frac, spec, s, t, source)
    source = MomentSource("inverse", spec, n=config.mc_n, seed=config.seed, step=config.step)
    return inverse_tc_moments(params, frac, spec, s, t, source)


def _moment_check(name: str, analytic: float, analytic_se: float, estimate) -> Dict:
    band = MC_BAND * math.hypot(analytic_se, estimate.std_error)
    return {
        "name": name,
        "analytic": analytic,
        "analytic_se": analytic_se,
        "mc": estimate.value,
        "mc_se": estimate.std_error,
        "passed": bool(abs(analytic - estimate.value) <= band),
    }


def cmd_moments(config: RunConfig) -> Dict:
    _banner(f"MOMENTS OF {config.process.upper()} AT s={config.s}, t={config.t}")
    report = analytic_moments(config)
    grid = config.moment_grid()
    batch = sample_batch(config, grid, config.reps, RngStream(config.seed, 3))
    s_index = grid.index_of(config.s)
    t_index = grid.index_of(config.t)
    mc = mc_moments(batch, s_index, t_index)

    errors = report.std_errors
    checks = [
        _moment_check("mean_t", report.mean, errors.get("mean", 0.0), mc.mean_t),
        _moment_check("var_t", report.variance, errors.get("variance", 0.0), mc.var_t),
        _moment_check("cov_st", report.cov, errors.get("cov", 0.0), mc.cov_st),
    ]
    for check in checks:
        mark = "✓" if check["passed"] else "✗"
        print(f"  {mark} {check['name']}: analytic {check['analytic']:.6g}, "
              f"MC {check['mc']:.6g} ± {check['mc_se']:.2g}")

    payload = {
        "command": "moments",
        "seed": config.seed,
        "analytic": report.to_dict(),
        "monte_carlo": mc.to_dict(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
    write_json_report(payload, config.to_dict(), config.output_path(".json"))
    return payload


# -- lrd -----------------------------------------------------------------

def cmd_lrd(config: RunConfig, corr_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> Dict:
    """
    Correlation decay on the log-spaced lrd grid.

    corr_fn, when given, replaces the analytic correlation t ↦ Corr(s, t)
    and only the fitted exponent is reported.
    """
    _banner(f"LONG-RANGE DEPENDENCE OF {config.process.upper()}")
    grid = config.lrd_grid()
    if corr_fn is not None:
        corr = np.asarray(corr_fn(grid.times), dtype=float)
        fit = decay_fit(np.column_stack([grid.times, corr]))
        report = LrdReport(fit.exponent, math.nan, math.nan, fit.r_squared)
    elif config.process == "fspok":
        report = fspok_lrd(config.params, config.frac, config.s, grid)
    else:
        rho, k1, k2 = config.lrd_constants()
        source = MomentSource("direct", config.spec, n=config.mc_n, seed=config.seed)
        report = tcfspok_lrd_check(config.params, config.frac, config.spec, rho, k1, k2,
                                   config.s, grid, source)

    print(f"Fitted exponent: {report.exponent:.4f} (R² = {report.r_squared:.4f})")
    print(f"Verdict: {report.verdict}")
    payload = {"command": "lrd", "seed": config.seed, **report.to_dict()}
    write_json_report(payload, config.to_dict(), config.output_path(".json"))
    return payload
