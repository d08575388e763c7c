"""Uniform grids on (0,T) and (0,L) and the containers living on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError

__all__ = [
    "TimeGrid",
    "SpatialGrid",
    "TimeSeries",
    "BoundaryData",
    "SpaceTimeField",
]


@dataclass(frozen=True)
class TimeGrid:
    """Nodes t_n = n*dt, n = 0..N, with dt = T/N."""

    T: float
    N: int

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError(f"horizon must be positive, got {self.T}")
        if self.N < 2:
            raise ValueError(f"need at least 2 steps, got {self.N}")

    @property
    def dt(self) -> float:
        return self.T / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.N + 1)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.N + 1, self.dt)
        w[0] = w[-1] = 0.5 * self.dt
        return w


@dataclass(frozen=True)
class SpatialGrid:
    """Nodes x_j = j*h, j = 0..M, with h = L/M; x_0 and x_M form the boundary."""

    L: float
    M: int

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValueError(f"interval length must be positive, got {self.L}")
        if self.M < 3:
            raise ValueError(f"need at least 3 cells, got {self.M}")

    @property
    def h(self) -> float:
        return self.L / self.M

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.M + 1)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.M + 1, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass
class TimeSeries:
    """Nodal values of a scalar function of time."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.N + 1,):
            raise GridMismatchError(
                f"series of length {self.values.shape} on a grid with N={self.grid.N}"
            )

    def l2_norm(self) -> float:
        """L2(0,T) norm by the trapezoid rule."""
        return float(np.sqrt(self.values**2 @ self.grid.trapezoid_weights()))

    def same_grid(self, other: "TimeSeries") -> None:
        if self.grid != other.grid:
            raise GridMismatchError("time series live on different grids")


@dataclass
class BoundaryData:
    """Dirichlet datum as left/right endpoint time series."""

    tgrid: TimeGrid
    left: TimeSeries
    right: TimeSeries

    def __post_init__(self):
        if self.left.grid != self.tgrid or self.right.grid != self.tgrid:
            raise GridMismatchError("boundary series must share the declared grid")

    @classmethod
    def from_arrays(cls, tgrid: TimeGrid, left, right) -> "BoundaryData":
        return cls(tgrid, TimeSeries(tgrid, left), TimeSeries(tgrid, right))

    def l2_norm(self) -> float:
        """L2 norm over both endpoints (the d=1 boundary cylinder)."""
        return float(np.sqrt(self.left.l2_norm() ** 2 + self.right.l2_norm() ** 2))

    def scaled(self, factor: float) -> "BoundaryData":
        return BoundaryData.from_arrays(
            self.tgrid, factor * self.left.values, factor * self.right.values
        )


@dataclass
class SpaceTimeField:
    """Nodal values u[j, n] = u(x_j, t_n) on the space-time grid."""

    sgrid: SpatialGrid
    tgrid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        want = (self.sgrid.M + 1, self.tgrid.N + 1)
        if self.values.shape != want:
            raise GridMismatchError(
                f"field shape {self.values.shape} does not match grids {want}"
            )

    @classmethod
    def zeros(cls, sgrid: SpatialGrid, tgrid: TimeGrid) -> "SpaceTimeField":
        return cls(sgrid, tgrid, np.zeros((sgrid.M + 1, tgrid.N + 1)))

    @classmethod
    def from_function(cls, sgrid: SpatialGrid, tgrid: TimeGrid, f) -> "SpaceTimeField":
        x = sgrid.nodes[:, None]
        t = tgrid.nodes[None, :]
        return cls(sgrid, tgrid, np.asarray(f(x, t), dtype=float))

    def same_grids(self, other: "SpaceTimeField") -> None:
        if self.sgrid != other.sgrid or self.tgrid != other.tgrid:
            raise GridMismatchError("fields live on different grids")

    def l2_norm(self) -> float:
        """L2(Q) norm by the tensor trapezoid rule."""
        wx = self.sgrid.trapezoid_weights()
        wt = self.tgrid.trapezoid_weights()
        return float(np.sqrt(wx @ self.values**2 @ wt))

    def inner(self, other: "SpaceTimeField") -> float:
        """L2(Q) inner product by the tensor trapezoid rule."""
        self.same_grids(other)
        wx = self.sgrid.trapezoid_weights()
        wt = self.tgrid.trapezoid_weights()
        return float(wx @ (self.values * other.values) @ wt)

    def boundary_trace(self) -> BoundaryData:
        return BoundaryData.from_arrays(
            self.tgrid, self.values[0, :], self.values[-1, :]
        )
