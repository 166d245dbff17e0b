"""Lévy subordinators, inverse subordinators and random streams"""

from .levy_subordinators import (
    SubordinatorSpec,
    Stable,
    TemperedStable,
    GammaSubordinator,
    InverseGaussian,
    FAMILIES,
    parse_subordinator,
    bernstein_eval,
    bernstein_inverse,
    regular_variation_index,
    subordinator_liminf_constant,
    gamma_exp_moment,
    log_gamma_exp_moment,
    RngStream,
    as_generator,
    TimeGrid,
    SamplePath,
)
from .sampling import (
    sample_stable,
    sample_inverse_stable,
    subordinator_increments,
    sample_path,
    sample_path_batch,
    first_passage_times,
    sample_inverse_path,
    sample_pair,
    operational_draws,
    default_step,
    DEFAULT_STEP_FRACTION,
    fractional_moment,
)

__all__ = [
    'SubordinatorSpec',
    'Stable',
    'TemperedStable',
    'GammaSubordinator',
    'InverseGaussian',
    'FAMILIES',
    'parse_subordinator',
    'bernstein_eval',
    'bernstein_inverse',
    'regular_variation_index',
    'subordinator_liminf_constant',
    'gamma_exp_moment',
    'log_gamma_exp_moment',
    'RngStream',
    'as_generator',
    'TimeGrid',
    'SamplePath',
    'sample_stable',
    'sample_inverse_stable',
    'subordinator_increments',
    'sample_path',
    'sample_path_batch',
    'first_passage_times',
    'sample_inverse_path',
    'sample_pair',
    'operational_draws',
    'default_step',
    'DEFAULT_STEP_FRACTION',
    'fractional_moment',
]
