"""Discrete fractional-calculus operators on uniform time grids.

Caputo derivatives use the L1 scheme, fractional integrals use product
integration that is exact on piecewise-linear interpolants, and the
backward (terminal-anchored) operators are realized by conjugating the
forward ones with time reversal.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grids import TimeGrid, TimeSeries
from .special_functions import gamma_fn

__all__ = [
    "caputo_derivative",
    "caputo_columns",
    "backward_rl_derivative",
    "backward_integral",
    "forward_rl_integral_columns",
    "time_reverse",
]


def _check_order(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"order must lie in (0, 1), got {alpha}")


@lru_cache(maxsize=128)
def _l1_weights(alpha: float, n: int) -> np.ndarray:
    """b_m = (m+1)^(1-a) - m^(1-a), m = 0..n-1 (read-only, shared)."""
    m = np.arange(n, dtype=float)
    b = (m + 1.0) ** (1.0 - alpha) - m ** (1.0 - alpha)
    b.setflags(write=False)
    return b


@lru_cache(maxsize=128)
def _pi_weights(nu: float, n: int):
    """Product-integration weights for the order-nu fractional integral.

    I(t_n) = dt^nu / Gamma(nu+2) * (sum_{j>=1} c_{n-j} h_j + a0_n h_0); the
    rule integrates the piecewise-linear interpolant of h exactly.
    """
    m = np.arange(n + 1, dtype=float)
    c = np.empty(n + 1)
    c[0] = 1.0
    if n >= 1:
        mm = m[1:]
        c[1:] = (mm + 1.0) ** (nu + 1.0) + (mm - 1.0) ** (nu + 1.0) - 2.0 * mm ** (
            nu + 1.0
        )
    a0 = np.zeros(n + 1)
    nn = m[1:]
    a0[1:] = (nn - 1.0) ** (nu + 1.0) - nn**nu * (nn - nu - 1.0)
    c.setflags(write=False)
    a0.setflags(write=False)
    return c, a0


def time_reverse(h: TimeSeries) -> TimeSeries:
    """Reflect a series through t -> T - t (an involution on the node set)."""
    return TimeSeries(h.grid, h.values[::-1].copy())


def caputo_derivative(u: TimeSeries, alpha: float) -> TimeSeries:
    """L1 approximation of the Caputo derivative; node 0 is set to 0."""
    _check_order(alpha)
    grid = u.grid
    n = grid.N
    du = np.diff(u.values)
    b = _l1_weights(alpha, n)
    scale = 1.0 / (gamma_fn(2.0 - alpha) * grid.dt**alpha)
    out = np.zeros(n + 1)
    out[1:] = scale * np.convolve(du, b)[:n]
    return TimeSeries(grid, out)


def caputo_columns(values: np.ndarray, alpha: float, tgrid: TimeGrid) -> np.ndarray:
    """L1 Caputo along the time axis of an (M+1, N+1) array of node values."""
    _check_order(alpha)
    n = tgrid.N
    du = np.diff(values, axis=1)
    b = _l1_weights(alpha, n)
    scale = 1.0 / (gamma_fn(2.0 - alpha) * tgrid.dt**alpha)
    from scipy.signal import fftconvolve

    conv = fftconvolve(du, b[None, :], axes=1)[:, :n]
    out = np.zeros_like(values)
    out[:, 1:] = scale * conv
    return out


def _forward_integral_values(h: np.ndarray, nu: float, dt: float) -> np.ndarray:
    n = h.size - 1
    c, a0 = _pi_weights(nu, n)
    scale = dt**nu / gamma_fn(nu + 2.0)
    # sum_{j=1..n} c_{n-j} h_j = conv(h, c)[n] - c_n h_0
    conv = np.convolve(h, c)[: n + 1]
    out = scale * (conv - c * h[0] + a0 * h[0])
    out[0] = 0.0
    return out


def backward_integral(h: TimeSeries, nu: float) -> TimeSeries:
    """Fractional integral from t to T of order nu (product integration)."""
    if not nu > 0.0:
        raise ValueError(f"integral order must be positive, got {nu}")
    rev = h.values[::-1]
    vals = _forward_integral_values(rev, nu, h.grid.dt)
    return TimeSeries(h.grid, vals[::-1].copy())


def forward_rl_integral_columns(values: np.ndarray, nu: float, tgrid: TimeGrid) -> np.ndarray:
    """Order-nu integral from 0 to t along the time axis of an array."""
    if not nu > 0.0:
        raise ValueError(f"integral order must be positive, got {nu}")
    n = tgrid.N
    c, a0 = _pi_weights(nu, n)
    scale = tgrid.dt**nu / gamma_fn(nu + 2.0)
    from scipy.signal import fftconvolve

    conv = fftconvolve(values, c[None, :], axes=1)[:, : n + 1]
    out = scale * (conv - np.outer(values[:, 0], c) + np.outer(values[:, 0], a0))
    out[:, 0] = 0.0
    return out


def _derivative_second_order(vals: np.ndarray, dt: float) -> np.ndarray:
    """d/dt with centered interior stencils and one-sided 3-point ends."""
    out = np.empty_like(vals)
    out[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * dt)
    out[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * dt)
    out[-1] = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * dt)
    return out


def backward_rl_derivative(h: TimeSeries, alpha: float) -> TimeSeries:
    """Backward Riemann-Liouville derivative of order alpha.

    Realized as time_reverse . forward-RL-derivative . time_reverse, where
    the forward derivative differentiates the product-integrated order
    (1-alpha) integral with second-order stencils.  The value at t = T
    (node 0 after reversal) is the one-sided extrapolation.
    """
    _check_order(alpha)
    rev = h.values[::-1]
    j = _forward_integral_values(rev, 1.0 - alpha, h.grid.dt)
    d = _derivative_second_order(j, h.grid.dt)
    return TimeSeries(h.grid, d[::-1].copy())
