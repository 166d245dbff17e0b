"""
Samplers for the Poisson process of order k (PPoK), the Skellam process of
order k (SPoK), its fractional version (FSPoK) and the versions further
time-changed by a subordinator (TCFSPoK) or by an inverse subordinator.

Every replication shares one operational-time path across all grid points,
and counts are advanced by independent increments between consecutive
operational times.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..subordinators import (
    DEFAULT_STEP_FRACTION,
    RngStream,
    Stable,
    SubordinatorSpec,
    TimeGrid,
    default_step,
    first_passage_times,
    sample_inverse_stable,
    sample_path_batch,
)
from ..utils.errors import HypothesisViolationError


@dataclass(frozen=True)
class SkellamParams:
    k: int
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"order k must be an integer >= 1, got {self.k}")
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise ValueError(f"rates must be > 0, got {self.lambda1}, {self.lambda2}")

    def to_dict(self) -> dict:
        return {'k': self.k, 'lambda1': self.lambda1, 'lambda2': self.lambda2}


@dataclass(frozen=True)
class FracParams:
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def is_identity(self) -> bool:
        return self.alpha == 1


@dataclass(frozen=True, eq=False)
class IntPath:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (len(self.grid),):
            raise ValueError("Path values must match the grid length")
        if not np.issubdtype(values.dtype, np.integer):
            raise ValueError(f"Path values must be integers, got dtype {values.dtype}")
        object.__setattr__(self, 'values', values)


@dataclass(frozen=True, eq=False)
class PathBatch:
    """Replicated paths: values has shape (replications, len(grid))"""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2 or values.shape[1] != len(self.grid):
            raise ValueError("Batch values must have shape (replications, len(grid))")
        if not np.issubdtype(values.dtype, np.integer):
            raise ValueError(f"Batch values must be integers, got dtype {values.dtype}")
        object.__setattr__(self, 'values', values)

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    def path(self, i: int) -> IntPath:
        return IntPath(self.grid, self.values[i])

    def at(self, t: float) -> np.ndarray:
        return self.values[:, self.grid.index_of(t)]


REPLICATION_CHUNK = 10_000


def _ppok_increments(k: int, lam: float, dt: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    # compound Poisson with rate kλ and uniform jumps on {1..k} splits into k thinned streams
    total = np.zeros(dt.shape, dtype=np.int64)
    for j in range(1, k + 1):
        total += j * gen.poisson(lam * dt)
    return total


def _spok_at(params: SkellamParams, times: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    dt = np.diff(times, axis=1, prepend=0.0)
    up = _ppok_increments(params.k, params.lambda1, dt, gen)
    down = _ppok_increments(params.k, params.lambda2, dt, gen)
    return np.cumsum(up - down, axis=1)


def _inverse_stable_at(alpha: float, times: np.ndarray, gen, step: Optional[float]) -> np.ndarray:
    if times.shape[1] == 1:
        return sample_inverse_stable(alpha, times[:, 0], gen)[:, None]
    if step is None:
        row_max = times.max(axis=1)
        steps = np.where(row_max > 0, DEFAULT_STEP_FRACTION * row_max, 1.0)
    else:
        steps = step
    return first_passage_times(Stable(alpha), times, steps, gen)


def _fspok_at(params: SkellamParams, alpha: float, times: np.ndarray, gen,
              step: Optional[float]) -> np.ndarray:
    if alpha == 1:
        return _spok_at(params, times, gen)
    return _spok_at(params, _inverse_stable_at(alpha, times, gen, step), gen)


def _replicate(draw: Callable[[int, np.random.Generator], np.ndarray], grid: TimeGrid,
               n_paths: Optional[int], rng):
    """Run draw over fixed chunks, each on its own random stream"""
    if n_paths is None:
        gen = rng.generator() if isinstance(rng, RngStream) else rng
        return IntPath(grid, draw(1, gen)[0])
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")

    chunks = []
    for i, start in enumerate(range(0, n_paths, REPLICATION_CHUNK)):
        size = min(REPLICATION_CHUNK, n_paths - start)
        gen = rng.chunk_generator(i) if isinstance(rng, RngStream) else rng
        chunks.append(draw(size, gen))
    return PathBatch(grid, np.concatenate(chunks, axis=0))


def _tiled(grid: TimeGrid, n: int) -> np.ndarray:
    return np.tile(grid.times, (n, 1))


def sample_ppok(k: int, lam: float, grid: TimeGrid, rng, n_paths: Optional[int] = None):
    """
    Sample the Poisson process of order k: event rate kλ, jumps uniform on {1..k}.

    Returns:
        IntPath, or PathBatch when n_paths is given
    """
    if int(k) != k or k < 1 or not lam > 0:
        raise ValueError(f"sample_ppok needs k >= 1 and λ > 0, got {k}, {lam}")

    def draw(n, gen):
        dt = np.diff(_tiled(grid, n), axis=1, prepend=0.0)
        return np.cumsum(_ppok_increments(int(k), lam, dt, gen), axis=1)

    return _replicate(draw, grid, n_paths, rng)


def sample_spok(params: SkellamParams, grid: TimeGrid, rng, n_paths: Optional[int] = None):
    """Sample the SPoK as the difference of two independent PPoK"""
    return _replicate(lambda n, gen: _spok_at(params, _tiled(grid, n), gen), grid, n_paths, rng)


def sample_fspok(params: SkellamParams, frac: FracParams, grid: TimeGrid, rng,
                 n_paths: Optional[int] = None, step: Optional[float] = None):
    """
    Sample S(Y_α(t)) with one inverse-stable path per replication.

    A single grid time uses the exact self-similar draw of Y_α; longer grids
    use the first-passage lattice with the given operational step.
    """
    return _replicate(lambda n, gen: _fspok_at(params, frac.alpha, _tiled(grid, n), gen, step),
                      grid, n_paths, rng)


def _require_finite_moments(spec: SubordinatorSpec):
    if not spec.finite_moments:
        raise HypothesisViolationError(
            f"{spec.label()} has infinite moments; the time change needs a family "
            "with E(D^r(t)) < ∞ for all r (tss, gamma or ig)"
        )


def sample_tcfspok(params: SkellamParams, frac: FracParams, spec: SubordinatorSpec, grid: TimeGrid,
                   rng, n_paths: Optional[int] = None, step: Optional[float] = None):
    """Sample S_α(D_f(t)) for a subordinator with all moments finite"""
    _require_finite_moments(spec)

    def draw(n, gen):
        operational = sample_path_batch(spec, grid, n, gen)
        return _fspok_at(params, frac.alpha, operational, gen, step)

    return _replicate(draw, grid, n_paths, rng)


def sample_inverse_tcfspok(params: SkellamParams, frac: FracParams, spec: SubordinatorSpec,
                           grid: TimeGrid, step: Optional[float], rng,
                           n_paths: Optional[int] = None):
    """Sample S_α(H_f(t)) with H_f from the first-passage lattice"""
    step = default_step(grid.times) if step is None else step

    def draw(n, gen):
        operational = first_passage_times(spec, _tiled(grid, n), step, gen)
        return _fspok_at(params, frac.alpha, operational, gen, None)

    return _replicate(draw, grid, n_paths, rng)
