"""Errors, report writers and the pmf table cache"""

from .errors import ConfigError, ConvergenceError, HypothesisViolationError
from .report_writer import (
    SCHEMA_VERSION,
    paths_to_frame,
    write_csv,
    write_json_report,
    sidecar_path,
    summarize_checks,
)
from .table_cache import PmfTableCache

__all__ = [
    'ConfigError',
    'ConvergenceError',
    'HypothesisViolationError',
    'SCHEMA_VERSION',
    'paths_to_frame',
    'write_csv',
    'write_json_report',
    'sidecar_path',
    'summarize_checks',
    'PmfTableCache',
]
