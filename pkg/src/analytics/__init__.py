"""Closed-form and quadrature evaluators for pmfs, pgfs, moments and LRD"""

from .moments import (
    MomentReport,
    LrdReport,
    MomentSource,
    lrd_verdict,
    r_constants,
    ppok_moments,
    spok_moments,
    inv_stable_mean,
    inv_stable_mean_cov,
    fspok_moments,
    fspok_correlation,
    fspok_lrd,
    tcfspok_moments,
    inverse_tc_moments,
    tcfspok_lrd_check,
    lil_constant,
    lil_g,
)
from .distributions import (
    PmfTable,
    spok_pmf,
    spok_pmf_range,
    fspok_pmf,
    fspok_pmf_grid,
    wright_cutoff,
    wright_kernel_nodes,
    spok_pmf_table,
    fspok_pmf_table,
    spok_pgf,
    fspok_pgf,
    pmf_pgf_sum,
    tc_spok_pmf,
    inverse_tc_spok_pmf,
    tc_spok_pmf_table,
)
from .fractional_calculus import (
    gl_weights,
    caputo_derivative_gl,
    fde_residual_field,
    fde_residual,
)

__all__ = [
    'MomentReport',
    'LrdReport',
    'MomentSource',
    'lrd_verdict',
    'r_constants',
    'ppok_moments',
    'spok_moments',
    'inv_stable_mean',
    'inv_stable_mean_cov',
    'fspok_moments',
    'fspok_correlation',
    'fspok_lrd',
    'tcfspok_moments',
    'inverse_tc_moments',
    'tcfspok_lrd_check',
    'lil_constant',
    'lil_g',
    'PmfTable',
    'spok_pmf',
    'spok_pmf_range',
    'fspok_pmf',
    'fspok_pmf_grid',
    'wright_cutoff',
    'wright_kernel_nodes',
    'spok_pmf_table',
    'fspok_pmf_table',
    'spok_pgf',
    'fspok_pgf',
    'pmf_pgf_sum',
    'tc_spok_pmf',
    'inverse_tc_spok_pmf',
    'tc_spok_pmf_table',
    'gl_weights',
    'caputo_derivative_gl',
    'fde_residual_field',
    'fde_residual',
]
