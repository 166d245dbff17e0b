"""Command-line layer: run configuration, commands and verification"""

from .config import PROCESSES, RunConfig, config_from_args, default_seed
from .commands import (
    analytic_moments,
    cmd_lrd,
    cmd_moments,
    cmd_pmf,
    cmd_simulate,
    sample_batch,
)
from .verification import CRITERIA, run_verification

__all__ = [
    'PROCESSES',
    'RunConfig',
    'config_from_args',
    'default_seed',
    'analytic_moments',
    'cmd_lrd',
    'cmd_moments',
    'cmd_pmf',
    'cmd_simulate',
    'sample_batch',
    'CRITERIA',
    'run_verification',
]
