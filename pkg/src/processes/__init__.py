"""Samplers for PPoK, SPoK, FSPoK and their subordinated versions"""

from .skellam_processes import (
    SkellamParams,
    FracParams,
    IntPath,
    PathBatch,
    REPLICATION_CHUNK,
    sample_ppok,
    sample_spok,
    sample_fspok,
    sample_tcfspok,
    sample_inverse_tcfspok,
)

__all__ = [
    'SkellamParams',
    'FracParams',
    'IntPath',
    'PathBatch',
    'REPLICATION_CHUNK',
    'sample_ppok',
    'sample_spok',
    'sample_fspok',
    'sample_tcfspok',
    'sample_inverse_tcfspok',
]
