"""
Subordinator families, their Bernstein functions, random streams and
time grids.
"""

import math
from dataclasses import dataclass
from typing import ClassVar, Dict, Tuple, Type

import numpy as np
from scipy import optimize, special

from ..utils.errors import ConvergenceError


class SubordinatorSpec:
    """Base of the driftless subordinator families"""

    family: ClassVar[str] = ""
    n_params: ClassVar[int] = 0

    def bernstein(self, s):
        raise NotImplementedError

    @property
    def finite_moments(self) -> bool:
        """Whether E(D_f^r(t)) is finite for every r > 0"""
        return True

    def params(self) -> Tuple[float, ...]:
        raise NotImplementedError

    def label(self) -> str:
        return f"{self.family}:" + ",".join(f"{p:g}" for p in self.params())

    def to_dict(self) -> dict:
        return {'family': self.family, 'params': list(self.params())}


@dataclass(frozen=True)
class Stable(SubordinatorSpec):
    alpha: float
    family: ClassVar[str] = "stable"
    n_params: ClassVar[int] = 1

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"stable alpha must lie in (0, 1), got {self.alpha}")

    def bernstein(self, s):
        return np.power(s, self.alpha)

    @property
    def finite_moments(self) -> bool:
        return False

    def params(self):
        return (self.alpha,)


@dataclass(frozen=True)
class TemperedStable(SubordinatorSpec):
    nu: float
    eta: float
    family: ClassVar[str] = "tss"
    n_params: ClassVar[int] = 2

    def __post_init__(self):
        if not 0 < self.nu < 1:
            raise ValueError(f"tempered-stable nu must lie in (0, 1), got {self.nu}")
        if not self.eta > 0:
            raise ValueError(f"tempered-stable eta must be > 0, got {self.eta}")

    def bernstein(self, s):
        # (η+s)^ν − η^ν without cancellation for small s
        return self.eta ** self.nu * np.expm1(self.nu * np.log1p(np.asarray(s) / self.eta))

    def params(self):
        return (self.nu, self.eta)


@dataclass(frozen=True)
class GammaSubordinator(SubordinatorSpec):
    a: float
    b: float
    family: ClassVar[str] = "gamma"
    n_params: ClassVar[int] = 2

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"gamma a and b must be > 0, got {self.a}, {self.b}")

    def bernstein(self, s):
        return self.b * np.log1p(np.asarray(s) / self.a)

    def params(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class InverseGaussian(SubordinatorSpec):
    delta: float
    gamma_p: float
    family: ClassVar[str] = "ig"
    n_params: ClassVar[int] = 2

    def __post_init__(self):
        if not (self.delta > 0 and self.gamma_p > 0):
            raise ValueError(
                f"inverse-Gaussian delta and gamma must be > 0, got {self.delta}, {self.gamma_p}"
            )

    def bernstein(self, s):
        s = np.asarray(s)
        return self.delta * 2 * s / (np.sqrt(2 * s + self.gamma_p ** 2) + self.gamma_p)

    def params(self):
        return (self.delta, self.gamma_p)


FAMILIES: Dict[str, Type[SubordinatorSpec]] = {
    cls.family: cls for cls in (Stable, TemperedStable, GammaSubordinator, InverseGaussian)
}


def parse_subordinator(text: str) -> SubordinatorSpec:
    """
    Parse the `family:p1,p2` syntax, e.g. `gamma:1.0,1.0` or `stable:0.5`.
    """
    family, _, raw = text.partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        raise ValueError(f"Unknown subordinator family '{family}' (expected one of {sorted(FAMILIES)})")
    cls = FAMILIES[family]
    try:
        values = [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"Subordinator parameters must be numbers: '{raw}'")
    if len(values) != cls.n_params:
        raise ValueError(f"'{family}' takes {cls.n_params} parameter(s), got {len(values)}")
    return cls(*values)


def bernstein_eval(spec: SubordinatorSpec, s: float) -> float:
    """Bernstein function f(s) of the family, s > 0"""
    if not s > 0:
        raise ValueError(f"bernstein_eval needs s > 0, got {s}")
    return float(spec.bernstein(s))


BRACKET_DOUBLINGS = 2000


def bernstein_inverse(spec: SubordinatorSpec, y: float) -> float:
    """
    Inverse φ(y) of the Bernstein function, found by bracketed root search.
    """
    if not y > 0:
        raise ValueError(f"bernstein_inverse needs y > 0, got {y}")

    def excess(s):
        return float(spec.bernstein(s)) - y

    lo = hi = 1.0
    for _ in range(BRACKET_DOUBLINGS):
        if excess(hi) >= 0:
            break
        lo, hi = hi, hi * 2.0
    else:
        raise ConvergenceError(f"Could not bracket φ({y}) for {spec.label()}")
    for _ in range(BRACKET_DOUBLINGS):
        if excess(lo) <= 0:
            break
        lo, hi = lo / 2.0, lo
    else:
        raise ConvergenceError(f"Could not bracket φ({y}) for {spec.label()}")
    if not math.isfinite(hi):
        raise ConvergenceError(f"φ({y}) exceeds double range for {spec.label()}")
    if excess(lo) == 0:
        return lo

    try:
        return optimize.brentq(excess, lo, hi, xtol=max(lo * 1e-15, 1e-300), rtol=4 * np.finfo(float).eps,
                               maxiter=500)
    except RuntimeError as e:
        raise ConvergenceError(str(e))


def regular_variation_index(spec: SubordinatorSpec) -> float:
    """Index of regular variation of f at 0+"""
    if isinstance(spec, Stable):
        return spec.alpha
    return 1.0


def subordinator_liminf_constant(gamma_idx: float) -> float:
    """γ(1−γ)^{(1−γ)/γ}, the liminf constant of a subordinator with index γ"""
    if not 0 < gamma_idx < 1:
        raise ValueError(f"gamma_idx must lie in (0, 1), got {gamma_idx}")
    return gamma_idx * (1 - gamma_idx) ** ((1 - gamma_idx) / gamma_idx)


def log_gamma_exp_moment(a: float, b: float, t: float, c: float, m):
    """log E(e^{−c D(t)} D(t)^m) for the gamma subordinator; m may be an array"""
    m = np.asarray(m, dtype=float)
    bt = b * t
    return (bt * (math.log(a) - math.log(a + c)) + special.gammaln(bt + m)
            - special.gammaln(bt) - m * math.log(a + c))


def gamma_exp_moment(a: float, b: float, t: float, c: float, m: int) -> float:
    """
    E(e^{−c D(t)} D(t)^m) = (a/(a+c))^{bt} Γ(bt+m) / (Γ(bt) (a+c)^m)
    for the gamma subordinator.
    """
    if not (a > 0 and b > 0 and t > 0):
        raise ValueError("gamma_exp_moment needs a, b, t > 0")
    if c < 0 or m < 0 or int(m) != m:
        raise ValueError("gamma_exp_moment needs c >= 0 and an integer m >= 0")
    log_value = float(log_gamma_exp_moment(a, b, t, c, m))
    if log_value > math.log(np.finfo(float).max):
        raise OverflowError(f"gamma_exp_moment overflows for bt+m = {b * t + m}")
    return math.exp(log_value)


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id; one stream maps to one reproducible numpy Generator"""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ('seed', 'stream_id'):
            value = getattr(self, name)
            if not 0 <= value < 2 ** 64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(seq)

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)

    def chunk_generator(self, chunk: int) -> np.random.Generator:
        """Generator for one replication chunk of this stream"""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, chunk))
        return np.random.default_rng(seq)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    raise TypeError(f"Expected RngStream or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing nonnegative times"""

    times: np.ndarray

    def __post_init__(self):
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        if times.ndim != 1 or times.size == 0:
            raise ValueError("A time grid needs at least one time")
        if not np.all(np.isfinite(times)) or times[0] < 0:
            raise ValueError("Grid times must be finite and nonnegative")
        if np.any(np.diff(times) <= 0):
            raise ValueError("Grid times must be strictly increasing")
        object.__setattr__(self, 'times', times)

    @classmethod
    def uniform(cls, t_max: float, points: int) -> "TimeGrid":
        if points < 2:
            raise ValueError("A uniform grid needs at least 2 points")
        return cls(np.linspace(0.0, t_max, points))

    def __len__(self) -> int:
        return self.times.size

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self) > 1 else 0.0

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        if len(self) < 2:
            return False
        steps = np.diff(self.times)
        return bool(np.allclose(steps, steps[0], rtol=rtol, atol=0))

    def index_of(self, t: float) -> int:
        idx = int(np.argmin(np.abs(self.times - t)))
        if not math.isclose(self.times[idx], t, rel_tol=1e-12, abs_tol=1e-15):
            raise ValueError(f"t={t} is not a grid time")
        return idx


@dataclass(frozen=True, eq=False)
class SamplePath:
    """A realization on a time grid"""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (len(self.grid),):
            raise ValueError("Path values must match the grid length")
        object.__setattr__(self, 'values', values)
