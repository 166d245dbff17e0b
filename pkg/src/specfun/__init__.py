"""Special functions with explicit accuracy contracts"""

from .special_functions import (
    EvalOptions,
    DEFAULT_OPTIONS,
    gamma_fn,
    mittag_leffler,
    wright_m,
    bessel_i,
    log_bessel_i,
    incomplete_beta,
    erf,
)

__all__ = [
    'EvalOptions',
    'DEFAULT_OPTIONS',
    'gamma_fn',
    'mittag_leffler',
    'wright_m',
    'bessel_i',
    'log_bessel_i',
    'incomplete_beta',
    'erf',
]
