"""
Samplers for subordinators, their inverses (first-passage times) and
fractional moments.
"""

import math
from typing import Optional, Tuple

import numpy as np

from ..estimators.monte_carlo import EstimateWithError
from ..utils.errors import ConvergenceError
from .levy_subordinators import (
    GammaSubordinator,
    InverseGaussian,
    SamplePath,
    Stable,
    SubordinatorSpec,
    TemperedStable,
    TimeGrid,
    as_generator,
)

# Tempered-stable pieces are split so the acceptance rate e^{-Δt η^ν} stays above 1e-4
MAX_LOG_REJECTION = math.log(1e4)
MAX_REJECTION_ROUNDS = 100_000

PASSAGE_ROWS = 4096
PASSAGE_BLOCK = 256
MAX_LATTICE_STEPS = 10_000_000
DEFAULT_STEP_FRACTION = 1e-3


def _stable_variates(alpha: float, size, gen: np.random.Generator) -> np.ndarray:
    """One-sided α-stable variates with Laplace transform e^{-s^α}"""
    u = math.pi * (1.0 - gen.random(size))  # (0, π]
    w = gen.standard_exponential(size)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))


def sample_stable(alpha: float, t, rng, size=None):
    """
    Draw D_α(t) = t^{1/α} D_α(1).

    Args:
        alpha: Stability index in (0, 1)
        t: Time(s) > 0, broadcast against size
        rng: RngStream or numpy Generator
        size: Optional output shape

    Returns:
        Positive draw(s)
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("sample_stable needs t >= 0")
    gen = as_generator(rng)
    shape = t.shape if size is None else size
    draws = t ** (1.0 / alpha) * _stable_variates(alpha, shape, gen)
    return float(draws) if np.ndim(draws) == 0 else draws


def sample_inverse_stable(alpha: float, t, rng, size=None):
    """
    Draw Y_α(t) through self-similarity: Y_α(t) = t^α D_α(1)^{-α}; 0 at t = 0.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("sample_inverse_stable needs t >= 0")
    gen = as_generator(rng)
    shape = t.shape if size is None else size
    draws = t ** alpha * _stable_variates(alpha, shape, gen) ** (-alpha)
    draws = np.where(np.broadcast_to(t, np.shape(draws)) == 0, 0.0, draws)
    return float(draws) if np.ndim(draws) == 0 else draws


def _tempered_stable_increments(nu: float, eta: float, dt: np.ndarray,
                                gen: np.random.Generator) -> np.ndarray:
    """Exponentially tilted stable increments by rejection from a stable proposal"""
    flat = dt.ravel()
    if flat.size == 0:
        return np.zeros(dt.shape)
    pieces = np.maximum(1, np.ceil(flat * eta ** nu / MAX_LOG_REJECTION)).astype(np.int64)
    piece_dt = np.repeat(flat / pieces, pieces)

    draws = np.empty(piece_dt.size)
    pending = np.arange(piece_dt.size)
    for _ in range(MAX_REJECTION_ROUNDS):
        if pending.size == 0:
            break
        x = piece_dt[pending] ** (1.0 / nu) * _stable_variates(nu, pending.size, gen)
        accept = gen.random(pending.size) < np.exp(-eta * x)
        draws[pending[accept]] = x[accept]
        pending = pending[~accept]
    else:
        if pending.size:
            raise ConvergenceError(
                f"Tempered-stable rejection exceeded {MAX_REJECTION_ROUNDS} rounds"
            )

    starts = np.concatenate(([0], np.cumsum(pieces)[:-1]))
    return np.add.reduceat(draws, starts).reshape(dt.shape)


def subordinator_increments(spec: SubordinatorSpec, dt, rng) -> np.ndarray:
    """
    Independent increments D(r+Δt) − D(r) for an array of Δt ≥ 0.
    """
    gen = as_generator(rng)
    dt = np.asarray(dt, dtype=float)
    if np.any(dt < 0):
        raise ValueError("Increments need nonnegative time steps")

    if isinstance(spec, Stable):
        return dt ** (1.0 / spec.alpha) * _stable_variates(spec.alpha, dt.shape, gen)
    if isinstance(spec, GammaSubordinator):
        return gen.gamma(shape=spec.b * dt, scale=1.0 / spec.a)
    if isinstance(spec, InverseGaussian):
        out = np.zeros(dt.shape)
        mask = dt > 0
        out[mask] = gen.wald(spec.delta * dt[mask] / spec.gamma_p, (spec.delta * dt[mask]) ** 2)
        return out
    if isinstance(spec, TemperedStable):
        return _tempered_stable_increments(spec.nu, spec.eta, dt, gen)
    raise TypeError(f"Unsupported subordinator spec {spec!r}")


def _grid_steps(times: np.ndarray) -> np.ndarray:
    return np.diff(np.concatenate(([0.0], times)))


def sample_path(spec: SubordinatorSpec, grid: TimeGrid, rng) -> SamplePath:
    """
    Sample D_f on the grid by summing independent increments.
    """
    values = np.cumsum(subordinator_increments(spec, _grid_steps(grid.times), rng))
    return SamplePath(grid, values)


def sample_path_batch(spec: SubordinatorSpec, grid: TimeGrid, n_paths: int, rng) -> np.ndarray:
    """n_paths independent subordinator paths as an (n_paths, len(grid)) array"""
    dt = np.broadcast_to(_grid_steps(grid.times), (n_paths, len(grid)))
    return np.cumsum(subordinator_increments(spec, dt, rng), axis=1)


def default_step(times) -> float:
    return DEFAULT_STEP_FRACTION * float(np.max(times))


def _first_passage_rows(spec, targets, steps, gen):
    n_rows, n_targets = targets.shape
    hits = np.full((n_rows, n_targets), -1, dtype=np.int64)
    hits[targets <= 0] = 0
    level = np.zeros(n_rows)
    active = np.flatnonzero((hits < 0).any(axis=1))
    offset = 0
    while active.size:
        if offset >= MAX_LATTICE_STEPS:
            raise ConvergenceError(
                f"First passage not reached within {MAX_LATTICE_STEPS} lattice steps"
            )
        dt = np.repeat(steps[active][:, None], PASSAGE_BLOCK, axis=1)
        cum = level[active][:, None] + np.cumsum(subordinator_increments(spec, dt, gen), axis=1)
        for g in range(n_targets):
            target = targets[active, g]
            rows = (hits[active, g] < 0) & (cum[:, -1] > target)
            if rows.any():
                first = np.argmax(cum[rows] > target[rows][:, None], axis=1)
                hits[active[rows], g] = offset + first + 1
        level[active] = cum[:, -1]
        offset += PASSAGE_BLOCK
        active = active[(hits[active] < 0).any(axis=1)]
    return hits * steps[:, None]


def first_passage_times(spec: SubordinatorSpec, targets, steps, rng) -> np.ndarray:
    """
    Lattice first-passage times H(t) = inf{r : D(r) > t}.

    Args:
        spec: Subordinator family
        targets: (n_paths, n_targets) levels, nondecreasing along each row
        steps: Operational-time step per path (scalar or (n_paths,))
        rng: RngStream or numpy Generator

    Returns:
        (n_paths, n_targets) array; the first lattice point r with D(r) > t,
        exactly 0 for t = 0
    """
    gen = as_generator(rng)
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    steps = np.broadcast_to(np.asarray(steps, dtype=float), (targets.shape[0],)).copy()
    if np.any(steps <= 0):
        raise ValueError("First-passage step must be > 0")
    out = np.empty(targets.shape)
    for start in range(0, targets.shape[0], PASSAGE_ROWS):
        rows = slice(start, start + PASSAGE_ROWS)
        out[rows] = _first_passage_rows(spec, targets[rows], steps[rows], gen)
    return out


def sample_inverse_path(spec: SubordinatorSpec, grid: TimeGrid, step: Optional[float], rng) -> SamplePath:
    """
    Sample H_f on the grid from one lattice path of D_f.

    The reported value overshoots the true first-passage time by at most step.
    """
    step = default_step(grid.times) if step is None else step
    values = first_passage_times(spec, grid.times[None, :], step, rng)[0]
    return SamplePath(grid, values)


def sample_pair(kind: str, spec: SubordinatorSpec, s: float, t: float, n: int, rng,
                step: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Joint draws (X(s), X(t)) of D_f (kind='direct') or H_f (kind='inverse')"""
    gen = as_generator(rng)
    if kind == 'direct':
        u = subordinator_increments(spec, np.full(n, s), gen)
        v = u + subordinator_increments(spec, np.full(n, t - s), gen)
        return u, v
    if kind == 'inverse':
        step = default_step([t]) if step is None else step
        targets = np.tile([s, t], (n, 1))
        hits = first_passage_times(spec, targets, step, gen)
        return hits[:, 0], hits[:, 1]
    raise ValueError(f"kind must be 'direct' or 'inverse', got '{kind}'")


def operational_draws(kind: str, spec: SubordinatorSpec, t: float, n: int, rng,
                      step: Optional[float] = None) -> np.ndarray:
    """n independent draws of D_f(t) (kind='direct') or H_f(t) (kind='inverse')"""
    gen = as_generator(rng)
    if kind == 'direct':
        return subordinator_increments(spec, np.full(n, t), gen)
    if isinstance(spec, Stable):
        return sample_inverse_stable(spec.alpha, t, gen, size=n)
    step = default_step([t]) if step is None else step
    return first_passage_times(spec, np.full((n, 1), t), step, gen)[:, 0]


def fractional_moment(kind: str, spec: SubordinatorSpec, power: float, t: float, n: int, rng,
                      step: Optional[float] = None) -> EstimateWithError:
    """
    Monte Carlo estimate of E(D_f^power(t)) or E(H_f^power(t)).

    Direct stable moments of order >= α are infinite and come back flagged
    as diverged.
    """
    if kind not in ('direct', 'inverse'):
        raise ValueError(f"kind must be 'direct' or 'inverse', got '{kind}'")
    if n < 100:
        raise ValueError(f"fractional_moment needs n >= 100 replications, got {n}")
    if not (power > 0 and t > 0):
        raise ValueError("fractional_moment needs power > 0 and t > 0")
    if kind == 'direct' and isinstance(spec, Stable) and power >= spec.alpha:
        return EstimateWithError(math.inf, math.inf, n, diverged=True)

    return EstimateWithError.from_sample(operational_draws(kind, spec, t, n, rng, step) ** power)
