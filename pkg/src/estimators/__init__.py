"""Monte Carlo estimators and comparison machinery"""

from .monte_carlo import (
    EstimateWithError,
    EmpiricalPmf,
    MonteCarloMoments,
    DecayFit,
    empirical_pmf,
    tv_distance,
    mc_moments,
    decay_fit,
)

__all__ = [
    'EstimateWithError',
    'EmpiricalPmf',
    'MonteCarloMoments',
    'DecayFit',
    'empirical_pmf',
    'tv_distance',
    'mc_moments',
    'decay_fit',
]
