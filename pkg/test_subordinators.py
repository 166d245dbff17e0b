"""
Tests for subordinator families, samplers, first-passage times and random
streams
"""

import math

import numpy as np
import pytest
from scipy import stats

from src.subordinators import (
    GammaSubordinator,
    InverseGaussian,
    RngStream,
    Stable,
    TemperedStable,
    TimeGrid,
    bernstein_eval,
    bernstein_inverse,
    first_passage_times,
    fractional_moment,
    gamma_exp_moment,
    parse_subordinator,
    sample_inverse_path,
    sample_inverse_stable,
    sample_path,
    sample_path_batch,
    sample_stable,
    subordinator_increments,
    subordinator_liminf_constant,
)
from src.specfun import gamma_fn

SPECS = [Stable(0.6), TemperedStable(0.5, 1.0), GammaSubordinator(2.0, 1.5), InverseGaussian(1.0, 2.0)]


def _within(sample, expected, n_se=4.0):
    sample = np.asarray(sample, dtype=float)
    se = sample.std(ddof=1) / math.sqrt(sample.size)
    return abs(sample.mean() - expected) <= n_se * se


def test_parse_and_bernstein():
    print("=" * 60)
    print("Testing subordinator families")
    print("=" * 60)
    assert parse_subordinator("gamma:2,1.5") == GammaSubordinator(2.0, 1.5)
    assert parse_subordinator("stable:0.6") == Stable(0.6)
    assert parse_subordinator(" TSS:0.5,1") == TemperedStable(0.5, 1.0)
    assert parse_subordinator("ig:1,2").label() == "ig:1,2"
    for bad in ("weibull:1", "gamma:1", "gamma:a,b", "stable:1.5"):
        with pytest.raises(ValueError):
            parse_subordinator(bad)
    print("✓ family:p1,p2 parsing")

    s = 0.8
    assert math.isclose(bernstein_eval(Stable(0.6), s), s ** 0.6)
    assert math.isclose(bernstein_eval(TemperedStable(0.5, 1.0), s), (1 + s) ** 0.5 - 1)
    assert math.isclose(bernstein_eval(GammaSubordinator(2.0, 1.5), s), 1.5 * math.log(1 + s / 2))
    assert math.isclose(bernstein_eval(InverseGaussian(1.0, 2.0), s), math.sqrt(2 * s + 4) - 2)
    assert math.isclose(bernstein_eval(TemperedStable(0.5, 1.0), 1e-12), 0.5e-12, rel_tol=1e-6)
    print("✓ Bernstein functions")

    for spec in SPECS:
        y = 0.7
        assert math.isclose(bernstein_eval(spec, bernstein_inverse(spec, y)), y, rel_tol=1e-10)
    assert not Stable(0.6).finite_moments
    assert all(spec.finite_moments for spec in SPECS[1:])
    print("✓ Inverse Bernstein functions and moment hypothesis")
    print()


def test_constants():
    assert math.isclose(subordinator_liminf_constant(0.5), 0.25)
    with pytest.raises(ValueError):
        subordinator_liminf_constant(1.0)
    assert math.isclose(gamma_exp_moment(1.0, 1.0, 1.0, 0.0, 2), 2.0)
    assert math.isclose(gamma_exp_moment(1.0, 2.0, 1.0, 1.0, 0), 0.25)
    print("✓ liminf constant and gamma exponential moments")


def test_increment_laws():
    print("=" * 60)
    print("Testing subordinator increments")
    print("=" * 60)
    gen = RngStream(7, 1).generator()
    n = 100_000

    draws = sample_stable(0.6, 1.0, gen, size=n)
    assert _within(np.exp(-draws), math.exp(-1.0))
    assert _within(np.exp(-2.0 * draws), math.exp(-(2.0 ** 0.6)))
    print("✓ Stable Laplace transform")

    t = 2.0
    gamma_draws = subordinator_increments(GammaSubordinator(2.0, 1.5), np.full(n, t), gen)
    assert _within(gamma_draws, 1.5 * t / 2.0)
    ig_draws = subordinator_increments(InverseGaussian(1.0, 2.0), np.full(n, t), gen)
    assert _within(ig_draws, t / 2.0)
    tss_draws = subordinator_increments(TemperedStable(0.5, 1.0), np.full(n, t), gen)
    assert _within(tss_draws, 0.5 * t)
    assert _within(np.exp(-tss_draws), math.exp(-t * (math.sqrt(2.0) - 1)))
    print("✓ Gamma, inverse Gaussian and tempered-stable means")

    zero = subordinator_increments(InverseGaussian(1.0, 2.0), np.array([0.0, 1.0]), gen)
    assert zero[0] == 0.0
    with pytest.raises(ValueError):
        subordinator_increments(GammaSubordinator(1.0, 1.0), np.array([-1.0]), gen)
    print()


def test_inverse_stable():
    print("=" * 60)
    print("Testing inverse stable subordinator")
    print("=" * 60)
    gen = RngStream(7, 2).generator()
    for alpha, t in ((0.5, 1.0), (0.7, 2.0)):
        draws = sample_inverse_stable(alpha, t, gen, size=200_000)
        assert _within(draws, t ** alpha / gamma_fn(alpha + 1))
        assert _within(draws ** 2, 2 * t ** (2 * alpha) / gamma_fn(2 * alpha + 1))
        print(f"✓ α={alpha}, t={t}: mean and second moment")
    assert sample_inverse_stable(0.5, 0.0, gen) == 0.0

    lattice = first_passage_times(Stable(0.6), np.full((20_000, 1), 1.0), 1e-3, gen)[:, 0]
    se = lattice.std(ddof=1) / math.sqrt(lattice.size)
    assert abs(lattice.mean() - 1 / gamma_fn(1.6)) <= 4 * se + 1e-3
    print("✓ First-passage lattice matches the exact inverse stable mean")
    print()


def test_first_passage_shape():
    gen = RngStream(3).generator()
    targets = np.array([[0.0, 0.5, 1.0], [0.0, 0.0, 2.0]])
    hits = first_passage_times(GammaSubordinator(1.0, 1.0), targets, 0.01, gen)
    assert hits.shape == (2, 3)
    assert hits[0, 0] == 0.0 and hits[1, 1] == 0.0
    assert np.all(np.diff(hits, axis=1) >= 0)
    assert np.allclose(hits / 0.01, np.round(hits / 0.01))
    with pytest.raises(ValueError):
        first_passage_times(GammaSubordinator(1.0, 1.0), targets, 0.0, gen)

    grid = TimeGrid.uniform(1.0, 5)
    path = sample_inverse_path(GammaSubordinator(1.0, 1.0), grid, None, RngStream(3))
    assert path.values[0] == 0.0 and np.all(np.diff(path.values) >= 0)
    direct = sample_path(GammaSubordinator(1.0, 1.0), grid, RngStream(3))
    assert direct.values[0] == 0.0 and np.all(np.diff(direct.values) >= 0)
    print("✓ First-passage times are lattice points, zero at t = 0 and nondecreasing")


def test_fractional_moment():
    spec = GammaSubordinator(2.0, 1.5)
    est = fractional_moment('direct', spec, 0.7, 1.0, 50_000, RngStream(5))
    expected = math.exp(math.lgamma(1.5 + 0.7) - math.lgamma(1.5) - 0.7 * math.log(2.0))
    assert est.within(expected, 4.0)
    diverged = fractional_moment('direct', Stable(0.5), 0.6, 1.0, 1000, RngStream(5))
    assert diverged.diverged and not diverged.within(1.0)
    with pytest.raises(ValueError):
        fractional_moment('direct', spec, 0.7, 1.0, 10, RngStream(5))
    with pytest.raises(ValueError):
        fractional_moment('sideways', spec, 0.7, 1.0, 1000, RngStream(5))
    print("✓ Fractional moments, divergence flag and argument checks")


def test_streams_and_grids():
    a = RngStream(42, 1).generator().random(5)
    b = RngStream(42, 1).generator().random(5)
    c = RngStream(42, 2).generator().random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert not np.array_equal(RngStream(42, 1).chunk_generator(0).random(5), a)
    with pytest.raises(ValueError):
        RngStream(-1)

    grid = TimeGrid([0.0, 0.5, 1.0])
    assert grid.is_uniform() and grid.index_of(0.5) == 1 and grid.t_max == 1.0
    with pytest.raises(ValueError):
        grid.index_of(0.3)
    for bad in ([1.0, 0.5], [-1.0, 1.0], []):
        with pytest.raises(ValueError):
            TimeGrid(bad)
    print("✓ Reproducible streams and validated grids")


def test_laplace_transform_law():
    print("=" * 60)
    print("Testing E exp(-s D(1)) = exp(-f(s))")
    print("=" * 60)
    gen = RngStream(12).generator()
    for spec in SPECS:
        values = sample_path_batch(spec, TimeGrid([1.0]), 100_000, gen)[:, 0]
        for s in (0.5, 1.0, 2.0):
            assert _within(np.exp(-s * values), math.exp(-bernstein_eval(spec, s)))
        print(f"✓ {spec.label()}")
    print()


def test_inverse_path_law():
    gen = RngStream(13).generator()
    grid = TimeGrid([1.0])
    lattice = np.array([sample_inverse_path(Stable(0.6), grid, 1e-3, gen).values[0]
                        for _ in range(4000)])
    exact = sample_inverse_stable(0.6, 1.0, gen, size=100_000)
    result = stats.ks_2samp(lattice, exact)
    assert result.statistic < 0.03
    print(f"✓ Lattice inverse stable vs exact draws, KS {result.statistic:.4f}")


if __name__ == "__main__":
    print("\n" + "=" * 60)
    print("SUBORDINATOR TESTS")
    print("=" * 60 + "\n")

    results = []
    for name, test in [("Families", test_parse_and_bernstein),
                       ("Constants", test_constants),
                       ("Increments", test_increment_laws),
                       ("Inverse stable", test_inverse_stable),
                       ("First passage", test_first_passage_shape),
                       ("Fractional moments", test_fractional_moment),
                       ("Streams / grids", test_streams_and_grids),
                       ("Laplace law", test_laplace_transform_law),
                       ("Inverse path law", test_inverse_path_law)]:
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
