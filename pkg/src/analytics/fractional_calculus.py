"""
Caputo derivatives on uniform grids and the residual of the fractional
forward equations satisfied by the FSPoK pmf.
"""

import math
import warnings
from typing import Tuple

import numpy as np

from ..processes import FracParams, SkellamParams
from ..subordinators import TimeGrid
from .distributions import fspok_pmf_grid, spok_pmf_range

COARSE_DT = 0.01
SKIP_INITIAL = 100  # first-order schemes are inaccurate in an O(Δt) initial layer
MAX_RELATIVE_DT = 1e-3


def gl_weights(alpha: float, count: int) -> np.ndarray:
    """Grünwald–Letnikov weights w_j = (−1)^j C(α, j)"""
    j = np.arange(1, count)
    return np.concatenate(([1.0], np.cumprod(1.0 - (alpha + 1.0) / j)))


def l1_weights(alpha: float, count: int) -> np.ndarray:
    j = np.arange(count, dtype=float)
    return (j + 1) ** (1 - alpha) - j ** (1 - alpha)


def _causal_convolution(signal: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Σ_j w_j x_{n−j} along the last axis via FFT"""
    m = signal.shape[-1]
    size = 1 << int(math.ceil(math.log2(2 * m)))
    spectrum = np.fft.rfft(signal, size, axis=-1) * np.fft.rfft(weights, size)
    return np.fft.irfft(spectrum, size, axis=-1)[..., :m]


def caputo_derivative_gl(series, alpha: float, dt: float, scheme: str = "gl") -> np.ndarray:
    """
    Caputo derivative of samples on a uniform grid starting at t = 0.

    Args:
        series: Values f(t_0 = 0), f(t_1), ...; 2-D input is differentiated row-wise
        alpha: Order in (0, 1]; α = 1 returns central differences
        dt: Grid spacing
        scheme: "gl" (Grünwald–Letnikov on f − f(0)) or "l1"

    Returns:
        Array of the same shape; the entry at t = 0 is 0
    """
    f = np.asarray(series, dtype=float)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if f.shape[-1] < 3:
        raise ValueError("caputo_derivative_gl needs at least 3 samples")
    if dt > COARSE_DT:
        warnings.warn(f"Grid spacing {dt} > {COARSE_DT}: Caputo derivative will be inaccurate",
                      RuntimeWarning, stacklevel=2)
    if alpha == 1:
        return np.gradient(f, dt, axis=-1, edge_order=2)

    m = f.shape[-1]
    if scheme == "gl":
        shifted = f - f[..., :1]
        out = _causal_convolution(shifted, gl_weights(alpha, m)) / dt ** alpha
        out[..., 0] = 0.0
        return out
    if scheme == "l1":
        jumps = np.zeros_like(f)
        jumps[..., 1:] = np.diff(f, axis=-1)
        out = _causal_convolution(jumps, l1_weights(alpha, m))
        out[..., 0] = 0.0
        return out / (math.gamma(2 - alpha) * dt ** alpha)
    raise ValueError(f"Unknown scheme '{scheme}' (expected 'gl' or 'l1')")


def fde_residual_field(params: SkellamParams, frac: FracParams, n_window: Tuple[int, int],
                       t_grid: TimeGrid, skip_initial: int = SKIP_INITIAL):
    """
    ∂_t^α p(n, t) − [−k(λ1+λ2) p(n) + λ1 Σ_j p(n−j) + λ2 Σ_j p(n+j)] on the window.

    Returns:
        (n_values, t_values, field) with field of shape (len(n_values), len(t_values));
        for α < 1 the first skip_initial steps are left out
    """
    times = t_grid.times
    if times[0] != 0 or not t_grid.is_uniform():
        raise ValueError("fde_residual needs a uniform grid starting at t = 0")
    dt = t_grid.spacing
    if dt > MAX_RELATIVE_DT * t_grid.t_max * (1 + 1e-9):
        raise ValueError(f"fde_residual needs dt <= {MAX_RELATIVE_DT}·max(t), got dt = {dt}")
    n_lo, n_hi = n_window
    k = params.k
    if n_hi - n_lo + 1 < 2 * k + 1:
        raise ValueError(f"window too small: needs at least 2k+1 = {2 * k + 1} values of n")

    extended = np.arange(n_lo - k, n_hi + k + 1)
    if frac.alpha == 1:
        pmf = spok_pmf_range(params, times, int(extended[0]), int(extended[-1]))
    else:
        pmf = fspok_pmf_grid(params, frac, times, extended)

    rows = n_hi - n_lo + 1
    inner = pmf[k:k + rows]
    rhs = -k * (params.lambda1 + params.lambda2) * inner
    for j in range(1, k + 1):
        rhs += params.lambda1 * pmf[k - j:k - j + rows] + params.lambda2 * pmf[k + j:k + j + rows]

    field = caputo_derivative_gl(inner, frac.alpha, dt) - rhs
    skip = 0 if frac.alpha == 1 else skip_initial
    return extended[k:k + rows], times[skip:], field[:, skip:]


def fde_residual(params: SkellamParams, frac: FracParams, n_window: Tuple[int, int],
                 t_grid: TimeGrid, relative: bool = False,
                 skip_initial: int = SKIP_INITIAL) -> float:
    """
    Largest absolute residual of the forward equations; relative=True divides
    by the largest pmf value on the window.
    """
    n_values, _, field = fde_residual_field(params, frac, n_window, t_grid, skip_initial)
    residual = float(np.max(np.abs(field)))
    if not relative:
        return residual
    if frac.alpha == 1:
        pmf = spok_pmf_range(params, t_grid.times, int(n_values[0]), int(n_values[-1]))
    else:
        pmf = fspok_pmf_grid(params, frac, t_grid.times, n_values)
    return residual / float(np.max(pmf))
