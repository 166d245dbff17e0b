"""
Tests for the special functions: Mittag-Leffler, Wright M, Bessel,
incomplete beta and gamma
"""

import math

import numpy as np
import pytest
from scipy import integrate, special

from src.analytics import wright_cutoff
from src.specfun import (
    DEFAULT_OPTIONS,
    EvalOptions,
    bessel_i,
    erf,
    gamma_fn,
    incomplete_beta,
    log_bessel_i,
    mittag_leffler,
    wright_m,
)
from src.utils.errors import ConvergenceError


def test_mittag_leffler_closed_forms():
    print("=" * 60)
    print("Testing Mittag-Leffler closed forms")
    print("=" * 60)
    for x in np.linspace(-5, 5, 11):
        value = mittag_leffler(1.0, 1.0, 1.0, float(x))
        assert math.isclose(value, math.exp(x), rel_tol=1e-10)
    print("✓ E_{1,1}(x) = exp(x)")

    for x in np.linspace(0, 3, 7):
        assert math.isclose(mittag_leffler(2.0, 1.0, 1.0, float(-x * x)), math.cos(x), abs_tol=1e-10)
    print("✓ E_{2,1}(-x²) = cos(x)")

    for z in (0.5, 1.0, 2.0):
        expected = math.exp(z * z) * (1 - erf(z))
        assert math.isclose(mittag_leffler(0.5, 1.0, 1.0, -z), expected, rel_tol=1e-10)
    print("✓ E_{1/2,1}(-z) = exp(z²) erfc(z)")

    assert math.isclose(mittag_leffler(1.0, 1.0, 2.0, 1.5), 2.5 * math.exp(1.5), rel_tol=1e-10)
    assert math.isclose(mittag_leffler(0.7, 2.0, 1.0, 0.0), 1.0, rel_tol=1e-15)
    print("✓ Three-parameter case and x = 0")
    print()


def test_mittag_leffler_limits():
    with pytest.raises(ValueError):
        mittag_leffler(0.5, 1.0, 1.0, -11.0)
    with pytest.raises(ValueError):
        mittag_leffler(2.5, 1.0, 1.0, 1.0)
    with pytest.raises(ConvergenceError):
        mittag_leffler(1.0, 1.0, 1.0, 5.0, EvalOptions(max_terms=3))
    with pytest.raises(ValueError):
        EvalOptions(rel_tol=0.0)
    print("✓ Window, parameter and term-cap errors")


def test_wright_m():
    print("=" * 60)
    print("Testing Wright M function")
    print("=" * 60)
    for z in (0.0, 0.5, 1.0, 3.0, 6.0, 8.0):
        expected = math.exp(-z * z / 4) / math.sqrt(math.pi)
        assert math.isclose(wright_m(0.5, z), expected, rel_tol=1e-8)
    print("✓ M_{1/2}(z) = exp(-z²/4)/√π on both evaluation branches")

    for alpha in (0.3, 0.7):
        assert math.isclose(wright_m(alpha, 0.0), 1 / gamma_fn(1 - alpha), rel_tol=1e-12)
    for alpha in (0.3, 0.5, 0.7):
        mass, _ = integrate.quad(lambda v: wright_m(alpha, v), 0.0, wright_cutoff(alpha), limit=200)
        assert math.isclose(mass, 1.0, abs_tol=1e-6)
    with pytest.raises(ValueError):
        wright_m(0.5, -1.0)
    with pytest.raises(ValueError):
        wright_m(1.0, 1.0)
    print("✓ Value at 0, unit mass and argument checks")
    print()


def test_bessel_and_gamma():
    print("=" * 60)
    print("Testing Bessel, gamma, beta and erf")
    print("=" * 60)
    assert math.isclose(bessel_i(0, 1.0), special.i0(1.0), rel_tol=1e-14)
    assert math.isclose(bessel_i(3, 50.0), special.iv(3, 50.0), rel_tol=1e-12)
    assert math.isclose(float(log_bessel_i(2, 800.0)), float(np.log(special.ive(2, 800.0)) + 800.0))
    assert np.isneginf(log_bessel_i(400, 1e-3))
    with pytest.raises(OverflowError):
        bessel_i(0, 1000.0)
    print("✓ I_n(z) direct, log-scaled and overflow")

    assert math.isclose(gamma_fn(5.0), 24.0)
    with pytest.raises(ValueError):
        gamma_fn(0.0)
    with pytest.raises(OverflowError):
        gamma_fn(200.0)

    assert math.isclose(incomplete_beta(0.7, 1.7, 1.0), special.beta(0.7, 1.7), rel_tol=1e-14)
    assert np.allclose(incomplete_beta(1.0, 1.0, np.array([0.1, 0.5])), [0.1, 0.5])
    with pytest.raises(ValueError):
        incomplete_beta(1.0, 1.0, 1.5)
    assert math.isclose(erf(1.0), 0.8427007929497149, rel_tol=1e-14)
    print("✓ Gamma, incomplete beta and erf")
    print()


def test_mittag_leffler_against_longer_series():
    print("=" * 60)
    print("Testing Mittag-Leffler against a longer, tighter series")
    print("=" * 60)
    oracle_options = EvalOptions(rel_tol=1e-15, max_terms=2 * DEFAULT_OPTIONS.max_terms)
    for alpha in (0.3, 0.5, 0.7, 0.9):
        for x in np.linspace(-3, 3, 13):
            value = mittag_leffler(alpha, 1.0, 1.0, float(x))
            oracle = mittag_leffler(alpha, 1.0, 1.0, float(x), oracle_options)
            assert math.isclose(value, oracle, rel_tol=1e-10, abs_tol=1e-10)
        print(f"✓ α={alpha} on [-3, 3]")
    print()


def test_mittag_leffler_large_negative():
    print("=" * 60)
    print("Testing Mittag-Leffler far into the negative axis")
    print("=" * 60)
    for z in (5.0, 8.0, 9.5, 10.0):
        assert math.isclose(mittag_leffler(0.5, 1.0, 1.0, -z), special.erfcx(z), rel_tol=1e-10)
    print("✓ E_{1/2,1}(-z) = erfcx(z) across the series and integral branches")

    # E_α(-x) ~ -Σ_k (-x)^{-k} / Γ(1 - αk)
    alpha, x = 0.3, 10.0
    expansion = -sum((-x) ** (-k) * special.rgamma(1 - alpha * k) for k in range(1, 9))
    value = mittag_leffler(alpha, 1.0, 1.0, -x)
    assert math.isclose(value, expansion, abs_tol=1e-7)
    assert 0 < mittag_leffler(0.3, 1.0, 1.0, -10.0) < mittag_leffler(0.3, 1.0, 1.0, -3.0)
    print(f"✓ E_0.3(-10) = {value:.6f} from the asymptotic expansion")

    for x in (10.0, 30.0):
        with pytest.raises(OverflowError):
            mittag_leffler(0.3, 1.0, 1.0, x)
    with pytest.raises(ConvergenceError):
        mittag_leffler(0.3, 2.0, 1.0, -10.0)
    print("✓ Overflow and cancellation reported up front")
    print()


def test_density_and_recurrences():
    print("=" * 60)
    print("Testing Wright positivity, Bessel recurrence, beta monotonicity")
    print("=" * 60)
    for alpha in (0.3, 0.5, 0.7):
        values = [wright_m(alpha, float(z)) for z in np.linspace(0, 20, 81)]
        assert min(values) >= 0
    print("✓ M_α ≥ 0 on [0, 20]")

    for n in range(1, 11):
        for z in np.linspace(0.5, 10, 20):
            lhs = bessel_i(n - 1, z) - bessel_i(n + 1, z)
            assert math.isclose(lhs, 2 * n / z * bessel_i(n, z), rel_tol=1e-12, abs_tol=1e-9)
    print("✓ I_{n-1} - I_{n+1} = (2n/z) I_n")

    x = np.linspace(0, 1, 201)
    for a, b in ((0.7, 1.7), (2.0, 3.0), (0.5, 0.5)):
        values = incomplete_beta(a, b, x)
        assert np.all(np.diff(values) >= 0)
        assert math.isclose(values[-1], special.beta(a, b), rel_tol=1e-10)
    print("✓ Incomplete beta nondecreasing up to B(a, b)")
    print()


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("SPECIAL FUNCTION TESTS")
    print("=" * 60 + "\n")

    results = []
    for name, test in [("Mittag-Leffler", test_mittag_leffler_closed_forms),
                       ("ML limits", test_mittag_leffler_limits),
                       ("Wright M", test_wright_m),
                       ("Bessel / gamma", test_bessel_and_gamma),
                       ("ML long series", test_mittag_leffler_against_longer_series),
                       ("ML negative axis", test_mittag_leffler_large_negative),
                       ("Invariants", test_density_and_recurrences)]:
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
