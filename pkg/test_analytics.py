"""
Tests for pmfs, pgfs, moments, correlation decay and the fractional forward
equations
"""

import math
import warnings

import numpy as np
import pytest
from scipy import stats

from src.analytics import (
    MomentReport,
    MomentSource,
    PmfTable,
    caputo_derivative_gl,
    fde_residual,
    fde_residual_field,
    fspok_lrd,
    fspok_moments,
    fspok_pgf,
    fspok_pmf,
    fspok_pmf_table,
    inv_stable_mean_cov,
    inverse_tc_moments,
    inverse_tc_spok_pmf,
    lil_constant,
    lil_g,
    lrd_verdict,
    pmf_pgf_sum,
    spok_moments,
    spok_pgf,
    spok_pmf,
    spok_pmf_table,
    tc_spok_pmf,
    tc_spok_pmf_table,
    r_constants,
    tcfspok_lrd_check,
    tcfspok_moments,
)
from src.analytics.distributions import _build_table
from src.estimators import mc_moments
from src.processes import FracParams, SkellamParams, sample_tcfspok
from src.specfun import gamma_fn, mittag_leffler
from src.subordinators import (
    GammaSubordinator,
    RngStream,
    Stable,
    TemperedStable,
    TimeGrid,
)
from src.utils.errors import HypothesisViolationError

PARAMS = SkellamParams(2, 1.0, 0.5)
HIGH_DRIFT = SkellamParams(2, 4.0, 0.1)


def test_spok_pmf():
    print("=" * 60)
    print("Testing SPoK pmf")
    print("=" * 60)
    classical = SkellamParams(1, 1.3, 0.4)
    n = np.arange(-10, 15)
    assert np.allclose(spok_pmf(classical, 2.0, n), stats.skellam.pmf(n, 2.6, 0.8), rtol=1e-10, atol=0)
    print("✓ k = 1 matches the classical Skellam law")

    # order 2: S = Z1 + 2·Z2 with Z1, Z2 independent Skellam(λ1 t, λ2 t)
    m = np.arange(-40, 41)
    n = np.arange(-10, 16)
    brute = np.array([np.sum(stats.skellam.pmf(v - 2 * m, 1.0, 0.5) * stats.skellam.pmf(m, 1.0, 0.5))
                      for v in n])
    assert np.allclose(spok_pmf(PARAMS, 1.0, n), brute, rtol=1e-9, atol=0)
    grid = spok_pmf(PARAMS, np.array([[0.5], [1.0]]), n[None, :])
    assert grid.shape == (2, n.size) and np.allclose(grid[1], brute, rtol=1e-9, atol=0)
    print("✓ k = 2 matches the convolution of two Skellam components")

    table = spok_pmf_table(PARAMS, 1.0)
    assert table.truncation_mass < 1e-9
    assert math.isclose(float(np.sum(table.support * table.probs)), 1.5, rel_tol=1e-9)
    at_zero = spok_pmf_table(PARAMS, 0.0)
    assert at_zero.prob(0) == 1.0 and at_zero.prob(1) == 0.0
    assert list(table.to_frame().columns) == ['n', 'p']
    print(f"✓ Table on [{table.n_min}, {table.n_max}] with mean 1.5")
    print()


def test_fspok_pmf():
    print("=" * 60)
    print("Testing FSPoK pmf")
    print("=" * 60)
    assert fspok_pmf(PARAMS, FracParams(1.0), 1.0, 2) == spok_pmf(PARAMS, 1.0, 2)
    frac = FracParams(0.7)
    table = fspok_pmf_table(PARAMS, frac, 1.0)
    assert table.truncation_mass < 1e-6
    assert math.isclose(table.probs.sum() + table.truncation_mass, 1.0, abs_tol=1e-6)
    mean = float(np.sum(table.support * table.probs))
    assert math.isclose(mean, fspok_moments(PARAMS, frac, 1.0, 1.0).mean, rel_tol=1e-5)
    assert math.isclose(fspok_pmf(PARAMS, frac, 1.0, 0), table.prob(0), abs_tol=1e-7)
    print(f"✓ Mass {table.probs.sum():.10f}, mean {mean:.6f}")

    with pytest.raises(ValueError):
        fspok_pmf(PARAMS, frac, 0.0, 0)
    print()


def test_pgf_duality():
    print("=" * 60)
    print("Testing pgf duality")
    print("=" * 60)
    frac = FracParams(0.7)
    spok_table = spok_pmf_table(PARAMS, 1.0, -150, 40)
    fspok_table = fspok_pmf_table(PARAMS, frac, 1.0, -150, 40)
    for theta in (0.3, 0.6, 0.9):
        exact = spok_pgf(PARAMS, theta, 1.0)
        assert math.isclose(pmf_pgf_sum(spok_table, theta), exact, rel_tol=1e-5)
        exact = fspok_pgf(PARAMS, frac, theta, 1.0)
        assert math.isclose(pmf_pgf_sum(fspok_table, theta), exact, rel_tol=1e-5)
        assert fspok_pgf(PARAMS, FracParams(1.0), theta, 1.0) == spok_pgf(PARAMS, theta, 1.0)
        print(f"✓ θ={theta}: Σ θ^n p(n) matches the generating function")
    with pytest.raises(ValueError):
        spok_pgf(PARAMS, 1.0, 1.0)
    print()


def test_moment_formulas():
    print("=" * 60)
    print("Testing moment formulas")
    print("=" * 60)
    assert fspok_moments(PARAMS, FracParams(1.0), 0.5, 1.0) == spok_moments(PARAMS, 0.5, 1.0)
    inv = inv_stable_mean_cov(0.7, 1.0, 1.0)
    assert math.isclose(inv.cov, inv.variance, rel_tol=1e-12)
    assert math.isclose(inv.mean, 1 / gamma_fn(1.7))
    with pytest.raises(ValueError):
        spok_moments(PARAMS, 2.0, 1.0)
    with pytest.raises(ValueError):
        MomentReport(mean=0.0, variance=-1.0)
    print("✓ α = 1 reduction and s = t covariance")

    frac = FracParams(0.7)
    spec = GammaSubordinator(2.0, 1.5)
    report = tcfspok_moments(PARAMS, frac, spec, 1.0, 1.0)
    e1 = math.exp(math.lgamma(2.2) - math.lgamma(1.5) - 0.7 * math.log(2.0))
    assert math.isclose(report.mean, 1.5 / gamma_fn(1.7) * e1, rel_tol=1e-12)
    assert report.std_errors['mean'] == 0.0
    with pytest.raises(HypothesisViolationError):
        tcfspok_moments(PARAMS, frac, Stable(0.5), 1.0, 1.0)
    print("✓ TCFSPoK gamma moments in closed form")

    inverse = inverse_tc_moments(PARAMS, FracParams(1.0), Stable(0.5), 1.0, 1.0)
    direct = fspok_moments(PARAMS, FracParams(0.5), 1.0, 1.0)
    assert math.isclose(inverse.mean, direct.mean, rel_tol=1e-10)
    assert math.isclose(inverse.variance, direct.variance, rel_tol=1e-10)
    with pytest.raises(ValueError):
        MomentSource('sideways', spec)
    print("✓ Inverse stable time change reproduces the FSPoK")
    print()


def test_tcfspok_covariance_against_paths():
    frac = FracParams(0.7)
    spec = GammaSubordinator(2.0, 1.5)
    source = MomentSource('direct', spec, n=20_000, seed=3)
    report = tcfspok_moments(PARAMS, frac, spec, 0.5, 1.0, source)
    batch = sample_tcfspok(PARAMS, frac, spec, TimeGrid([0.5, 1.0]), RngStream(9), n_paths=20_000)
    mc = mc_moments(batch, 0, 1)
    band = 4 * math.hypot(report.std_errors['cov'], mc.cov_st.std_error)
    assert abs(report.cov - mc.cov_st.value) <= band
    print(f"✓ Covariance {report.cov:.4f} vs paths {mc.cov_st.value:.4f}")


def test_lrd():
    print("=" * 60)
    print("Testing correlation decay")
    print("=" * 60)
    grid = np.logspace(2, 5, 30)
    report = fspok_lrd(HIGH_DRIFT, FracParams(0.5), 0.01, grid)
    assert abs(report.exponent + 0.5) <= 0.02
    assert abs(report.asymptote_ratio_at_tmax - 1) <= 0.05
    assert report.verdict == "LRD" and not report.degenerate
    print(f"✓ Exponent {report.exponent:.4f}, ratio {report.asymptote_ratio_at_tmax:.4f}")

    degenerate = fspok_lrd(SkellamParams(1, 1.0, 1.0), FracParams(0.6), 1.0, grid)
    assert degenerate.degenerate
    assert math.isclose(degenerate.exponent, -0.3, abs_tol=1e-9)
    assert math.isclose(degenerate.asymptote_ratio_at_tmax, 1.0, rel_tol=1e-9)
    print("✓ Equal rates give (s/t)^{α/2}")

    assert lrd_verdict(0.5) == "LRD"
    assert lrd_verdict(1.5) == "SRD"
    assert lrd_verdict(2.5) == "undetermined"
    with pytest.raises(ValueError):
        fspok_lrd(HIGH_DRIFT, FracParams(0.5), 0.01, grid[:2])
    print()


def test_tcfspok_lrd_check():
    print("=" * 60)
    print("Testing TCFSPoK correlation decay")
    print("=" * 60)
    assert r_constants(PARAMS) == (1.5, 7.5)
    frac = FracParams(0.7)
    spec = GammaSubordinator(1.0, 1.0)
    source = MomentSource("direct", spec, n=50_000, seed=17)
    report = tcfspok_lrd_check(HIGH_DRIFT, frac, spec, 0.7, 1.0, 1.0, 1.0,
                               TimeGrid(np.logspace(2, 4, 10)), source)
    assert abs(report.exponent + 0.7) <= 0.05
    assert report.verdict == "LRD"
    print(f"✓ Gamma time change decays like t^{{{report.exponent:.3f}}}")

    grid = TimeGrid(np.logspace(2, 4, 10))
    with pytest.raises(HypothesisViolationError):
        tcfspok_lrd_check(HIGH_DRIFT, frac, spec, 0.7, 1.0, 0.5, 1.0, grid, source)
    with pytest.raises(HypothesisViolationError):
        tcfspok_lrd_check(HIGH_DRIFT, frac, Stable(0.5), 0.7, 1.0, 1.0, 1.0, grid)
    with pytest.raises(ValueError):
        tcfspok_lrd_check(HIGH_DRIFT, frac, spec, 1.2, 1.0, 1.0, 1.0, grid, source)
    with pytest.raises(ValueError):
        tcfspok_lrd_check(HIGH_DRIFT, frac, spec, 0.7, 1.0, 1.0, 1.0, [100.0, 1000.0], source)
    print("✓ Preconditions on k1, k2, ρ and the grid")
    print()


def test_series_pmf():
    print("=" * 60)
    print("Testing time-changed pmf series")
    print("=" * 60)
    spec = GammaSubordinator(1.0, 1.0)
    table = tc_spok_pmf_table(PARAMS, spec, 1.0)
    assert math.isclose(table.probs.sum(), 1.0, abs_tol=1e-6)

    gen = np.random.default_rng(21)
    draws = gen.gamma(1.0, 1.0, size=200_000)
    for n in (-1, 0, 2):
        values = spok_pmf(PARAMS, draws, n)
        se = values.std(ddof=1) / math.sqrt(values.size)
        assert abs(table.prob(n) - values.mean()) <= 4 * se
        assert tc_spok_pmf(PARAMS, spec, 1.0, n).value == pytest.approx(table.prob(n), rel=1e-10)
    print("✓ Series agrees with the pmf mixture over gamma draws")

    order_one = SkellamParams(1, 1.0, 0.5)
    order_one_table = tc_spok_pmf_table(order_one, spec, 1.0)
    singles = np.array([tc_spok_pmf(order_one, spec, 1.0, int(n)).value
                        for n in order_one_table.support])
    assert np.allclose(singles, order_one_table.probs, rtol=1e-9, atol=1e-14)
    assert math.isclose(singles.sum(), 1.0, abs_tol=1e-6)
    assert math.isclose(order_one_table.prob(0), 0.4851, abs_tol=1e-3)
    for n in (-1, 0, 1, 2):
        values = spok_pmf(order_one, draws, n)
        se = values.std(ddof=1) / math.sqrt(values.size)
        assert abs(tc_spok_pmf(order_one, spec, 1.0, n).value - values.mean()) <= 4 * se
    print("✓ k = 1: single-n series matches the table and the mixture")

    tss = TemperedStable(0.5, 1.0)
    with pytest.raises(ValueError):
        tc_spok_pmf(PARAMS, tss, 1.0, 0)
    est = tc_spok_pmf(PARAMS, tss, 1.0, 0, mc_n=5000, rng=RngStream(4))
    assert 0 < est.value < 1 and est.std_error > 0

    inverse = inverse_tc_spok_pmf(PARAMS, Stable(0.5), 1.0, 0, mc_n=50_000, rng=RngStream(5))
    assert inverse.within(fspok_pmf(PARAMS, FracParams(0.5), 1.0, 0), 4.0)
    print("✓ Monte Carlo variants")
    print()


def test_table_mass_guard():
    with pytest.warns(RuntimeWarning, match="exceeds 1"):
        table = _build_table(lambda n: np.full(n.size, 0.5), (0, 2), False)
    assert table.truncation_mass == 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        exact = _build_table(lambda n: np.array([0.25, 0.5, 0.25]), (-1, 1), False)
    assert exact.truncation_mass == 0.0
    print("✓ Mass above 1 is reported, not absorbed")


def test_caputo_derivative():
    print("=" * 60)
    print("Testing Caputo derivative")
    print("=" * 60)
    t = np.linspace(0, 1, 1001)
    dt = t[1]
    exact = t ** 0.5 / gamma_fn(1.5)
    gl = caputo_derivative_gl(t, 0.5, dt)
    assert gl[0] == 0.0
    assert np.max(np.abs(gl[100:] - exact[100:]) / exact[100:]) < 5e-3
    l1 = caputo_derivative_gl(t, 0.5, dt, scheme="l1")
    assert np.allclose(l1[1:], exact[1:], rtol=1e-9)
    print("✓ D^{1/2} t = t^{1/2}/Γ(3/2) with both schemes")

    f = np.array([mittag_leffler(0.5, 1.0, 1.0, -x ** 0.5) for x in t])
    eigen = caputo_derivative_gl(f, 0.5, dt)
    assert np.max(np.abs(eigen[100:] + f[100:])) < 5e-3
    print("✓ Mittag-Leffler eigenfunction")

    assert np.allclose(caputo_derivative_gl(t ** 2, 1.0, dt), 2 * t)
    with pytest.warns(RuntimeWarning):
        caputo_derivative_gl(np.linspace(0, 1, 11) ** 2, 0.5, 0.1)
    with pytest.raises(ValueError):
        caputo_derivative_gl([0.0, 1.0], 0.5, dt)
    with pytest.raises(ValueError):
        caputo_derivative_gl(t, 0.5, dt, scheme="euler")
    print()


def test_forward_equations():
    print("=" * 60)
    print("Testing forward-equation residuals")
    print("=" * 60)
    grid = TimeGrid.uniform(1.0, 1001)
    classical = fde_residual(SkellamParams(1, 1.0, 0.5), FracParams(1.0), (-10, 10), grid)
    assert classical < 1e-4
    order_two = fde_residual(PARAMS, FracParams(1.0), (-10, 10), grid)
    assert order_two < 1e-4
    fractional = fde_residual(PARAMS, FracParams(0.7), (-10, 10), grid, relative=True)
    assert fractional < 1e-2
    print(f"✓ Residuals {classical:.2e} (α=1) and {fractional:.2e} (α=0.7)")

    n_values, t_values, field = fde_residual_field(PARAMS, FracParams(0.7), (-3, 3), grid)
    assert field.shape == (7, 901) and t_values[0] == grid.times[100]
    assert list(n_values) == list(range(-3, 4))
    with pytest.raises(ValueError):
        fde_residual(PARAMS, FracParams(0.7), (-3, 3), TimeGrid.uniform(1.0, 11))
    with pytest.raises(ValueError):
        fde_residual(PARAMS, FracParams(0.7), (0, 1), grid)
    print()


def test_lil_machinery():
    for alpha in (0.5, 0.7):
        for t in (1e2, 1e3):
            loglog = math.log(math.log(t))
            closed = loglog / (loglog / t) ** (1 / alpha)
            assert math.isclose(lil_g(Stable(alpha), t), closed, rel_tol=1e-8)
    with pytest.raises(ValueError):
        lil_g(Stable(0.5), 2.0)
    assert math.isclose(lil_constant(PARAMS, FracParams(0.7), 0.5), 1.5 * 0.25 ** 0.7)
    print("✓ g(t) for stable subordinators and the liminf constant")


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("ANALYTICS TESTS")
    print("=" * 60 + "\n")

    results = []
    for name, test in [("SPoK pmf", test_spok_pmf),
                       ("FSPoK pmf", test_fspok_pmf),
                       ("pgf duality", test_pgf_duality),
                       ("Moments", test_moment_formulas),
                       ("TC covariance", test_tcfspok_covariance_against_paths),
                       ("LRD", test_lrd),
                       ("TC decay", test_tcfspok_lrd_check),
                       ("Series pmf", test_series_pmf),
                       ("Table mass", test_table_mass_guard),
                       ("Caputo", test_caputo_derivative),
                       ("Forward equations", test_forward_equations),
                       ("LIL", test_lil_machinery)]:
        try:
            test()
            results.append((name, True))
        except AssertionError as e:
            print(f"✗ {name}: {e}")
            results.append((name, False))

    print("=" * 60)
    print("TEST SUMMARY")
    print("=" * 60)
    for name, passed in results:
        status = "✓ PASSED" if passed else "✗ FAILED"
        print(f"{name:20s} {status}")
    print()
