"""
Exceptions shared by the numerics, samplers and the command layer.
"""

from typing import Iterable


class ConvergenceError(RuntimeError):
    """A series, quadrature, root search or rejection loop hit its cap"""


class HypothesisViolationError(ValueError):
    """A formula was requested outside the conditions it is valid under"""


class ConfigError(ValueError):
    """Aggregated report of every invalid setting in a run configuration"""

    def __init__(self, problems: Iterable[str]):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"Invalid configuration ({len(self.problems)} problem(s)):\n{lines}")
