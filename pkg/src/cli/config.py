"""
Run configuration: built from command-line arguments, validated as a whole
before any computation.
"""

import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..processes import FracParams, SkellamParams
from ..subordinators import (
    GammaSubordinator,
    SubordinatorSpec,
    TimeGrid,
    parse_subordinator,
)
from ..utils.errors import ConfigError, HypothesisViolationError

PROCESSES = ("ppok", "spok", "fspok", "tcfspok", "inv-tcfspok")
COMMANDS = ("simulate", "pmf", "moments", "lrd", "verify")
SEED_ENV_VAR = "SPOK_SEED"
FALLBACK_SEED = 20240601


def default_seed() -> int:
    """Seed from SPOK_SEED when set, otherwise a fixed fallback"""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return FALLBACK_SEED
    try:
        return int(raw)
    except ValueError:
        raise ConfigError([f"{SEED_ENV_VAR} must be an integer, got '{raw}'"])


@dataclass
class RunConfig:
    command: str = "simulate"
    process: str = "spok"
    k: int = 2
    lambda1: float = 1.0
    lambda2: float = 0.5
    alpha: float = 1.0
    subordinator: Optional[str] = None
    t_max: float = 1.0
    points: int = 11
    times: Optional[List[float]] = None
    reps: int = 1000
    seed: Optional[int] = None
    output: Optional[str] = None
    step: Optional[float] = None
    s: float = 0.5
    t: float = 1.0
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    compare_mc: int = 0
    mc_n: int = 20_000
    lrd_t_min: float = 1e2
    lrd_t_max: float = 1e5
    lrd_points: int = 30
    rho: Optional[float] = None
    k1: Optional[float] = None
    k2: Optional[float] = None
    only: Optional[str] = None
    scale: float = 1.0
    use_cache: bool = True

    def __post_init__(self):
        if self.seed is None:
            self.seed = default_seed()

    # -- derived objects -------------------------------------------------

    @property
    def params(self) -> SkellamParams:
        return SkellamParams(self.k, self.lambda1, self.lambda2)

    @property
    def frac(self) -> FracParams:
        return FracParams(self.alpha)

    @property
    def spec(self) -> Optional[SubordinatorSpec]:
        return parse_subordinator(self.subordinator) if self.subordinator else None

    def grid(self) -> TimeGrid:
        if self.times:
            return TimeGrid(np.array(self.times, dtype=float))
        return TimeGrid.uniform(self.t_max, self.points)

    def moment_grid(self) -> TimeGrid:
        return TimeGrid([self.t]) if self.s == self.t else TimeGrid([self.s, self.t])

    def lrd_grid(self) -> TimeGrid:
        return TimeGrid(np.logspace(np.log10(self.lrd_t_min), np.log10(self.lrd_t_max),
                                    self.lrd_points))

    def lrd_constants(self):
        """(ρ, k1, k2), defaulting to ρ = α and k_i = (b/a)^{iα} for gamma"""
        spec = self.spec
        if None not in (self.rho, self.k1, self.k2):
            return self.rho, self.k1, self.k2
        ratio = spec.b / spec.a
        return self.alpha, ratio ** self.alpha, ratio ** (2 * self.alpha)

    def output_path(self, suffix: str) -> Path:
        if self.output:
            return Path(self.output)
        return Path("results") / f"{self.command}_{self.process}{suffix}"

    def to_dict(self) -> dict:
        return asdict(self)

    # -- validation ------------------------------------------------------

    def problems(self) -> List[str]:
        """Every invalid setting, in one list"""
        problems = []
        if self.command not in COMMANDS:
            problems.append(f"command must be one of {COMMANDS}, got '{self.command}'")
        if self.process not in PROCESSES:
            problems.append(f"process must be one of {PROCESSES}, got '{self.process}'")
        if int(self.k) != self.k or self.k < 1:
            problems.append(f"k must be an integer >= 1, got {self.k}")
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            problems.append(f"lambda1 and lambda2 must be > 0, got {self.lambda1}, {self.lambda2}")
        if not 0 < self.alpha <= 1:
            problems.append(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0 <= self.seed < 2 ** 64:
            problems.append(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.step is not None and not self.step > 0:
            problems.append(f"step must be > 0, got {self.step}")
        if not self.scale > 0:
            problems.append(f"scale must be > 0, got {self.scale}")

        spec = None
        if self.process in ("tcfspok", "inv-tcfspok"):
            if not self.subordinator:
                problems.append(f"--subordinator is required for process '{self.process}'")
            else:
                try:
                    spec = self.spec
                except ValueError as e:
                    problems.append(str(e))

        if self.command == "simulate":
            problems += self._grid_problems()
            if self.reps < 1:
                problems.append(f"reps must be >= 1, got {self.reps}")
        elif self.command == "pmf":
            problems += self._pmf_problems(spec)
        elif self.command == "moments":
            problems += self._moment_problems()
        elif self.command == "lrd":
            problems += self._lrd_problems(spec)
        return problems

    def _grid_problems(self) -> List[str]:
        try:
            self.grid()
        except ValueError as e:
            return [f"invalid time grid: {e}"]
        return []

    def _pmf_problems(self, spec) -> List[str]:
        problems = []
        if self.t < 0:
            problems.append(f"t must be >= 0, got {self.t}")
        if (self.n_min is None) != (self.n_max is None):
            problems.append("n_min and n_max must be given together")
        elif self.n_min is not None and self.n_max < self.n_min:
            problems.append(f"n_max ({self.n_max}) must be >= n_min ({self.n_min})")
        if self.compare_mc < 0:
            problems.append(f"compare_mc must be >= 0, got {self.compare_mc}")
        if self.process == "ppok":
            problems.append("no analytic pmf is available for ppok")
        if self.process in ("tcfspok", "inv-tcfspok") and self.alpha != 1:
            problems.append(f"the analytic pmf of {self.process} is available for alpha = 1 only")
        return problems

    def _moment_problems(self) -> List[str]:
        problems = []
        if self.s > self.t:
            problems.append(f"s must be <= t, got s={self.s}, t={self.t}")
        lower = 0 if self.process in ("ppok", "spok") or self.alpha == 1 and self.process == "fspok" else None
        if lower is None and not self.s > 0:
            problems.append(f"s must be > 0 for process '{self.process}', got {self.s}")
        if self.s < 0:
            problems.append(f"s must be >= 0, got {self.s}")
        if self.reps < 2:
            problems.append(f"reps must be >= 2 for moment estimates, got {self.reps}")
        if self.mc_n < 100:
            problems.append(f"mc_n must be >= 100, got {self.mc_n}")
        return problems

    def _lrd_problems(self, spec) -> List[str]:
        problems = []
        if self.process not in ("fspok", "tcfspok"):
            problems.append(f"lrd supports fspok and tcfspok, got '{self.process}'")
        if not 0 < self.s < self.lrd_t_min < self.lrd_t_max:
            problems.append("lrd needs 0 < s < lrd_t_min < lrd_t_max")
        if self.lrd_points < 3:
            problems.append(f"lrd_points must be >= 3, got {self.lrd_points}")
        if self.process == "fspok" and self.alpha == 1:
            problems.append("fspok lrd needs alpha < 1")
        if self.process == "tcfspok" and spec is not None:
            given = [v is not None for v in (self.rho, self.k1, self.k2)]
            if any(given) and not all(given):
                problems.append("rho, k1 and k2 must be given together")
            elif not all(given) and not isinstance(spec, GammaSubordinator):
                problems.append("rho, k1 and k2 are required for non-gamma subordinators")
        return problems

    def validate(self) -> "RunConfig":
        """Raise one ConfigError listing every problem, or a hypothesis violation"""
        problems = self.problems()
        if problems:
            raise ConfigError(problems)
        spec = self.spec
        if self.process == "tcfspok" and spec is not None and not spec.finite_moments:
            raise HypothesisViolationError(
                f"{spec.label()} has infinite moments of order >= {spec.params()[0]}; "
                "tcfspok needs a subordinator with all moments finite (tss, gamma or ig)"
            )
        return self


def config_from_args(args) -> RunConfig:
    """Build a RunConfig from an argparse namespace"""
    fields = RunConfig.__dataclass_fields__
    values = {name: getattr(args, name) for name in fields if getattr(args, name, None) is not None}
    if getattr(args, "no_cache", False):
        values["use_cache"] = False
    return RunConfig(**values)
