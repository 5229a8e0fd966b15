"""Periodic midpoint grid on the torus [-pi, pi) and quadrature primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, GridMismatchError

DEFAULT_N = 512


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PeriodicGrid:
    """Midpoint discretization of the torus with ``n`` equal cells.

    Node ``i`` sits at ``-pi + (i + 1/2) * dx`` with ``dx = 2 pi / n``.
    """

    n: int
    dx: float = field(init=False, repr=False)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ConfigurationError(f"grid_n must be an integer, got {self.n!r}")
        n = int(self.n)
        if n < 8 or n % 2:
            raise ConfigurationError(f"grid_n must be even and >= 8, got {n}")
        object.__setattr__(self, "n", n)
        dx = 2.0 * math.pi / n
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "nodes", _frozen(-math.pi + (np.arange(n) + 0.5) * dx))

    def field(self, values) -> "GridField":
        return GridField(self, values)


def build_grid(n: int = DEFAULT_N) -> PeriodicGrid:
    return PeriodicGrid(n)


@dataclass(frozen=True)
class GridField:
    """A real function sampled at the grid nodes."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ConfigurationError(
                f"field has shape {v.shape}, expected ({self.grid.n},)"
            )
        if not np.all(np.isfinite(v)):
            raise ConfigurationError("field contains non-finite values")
        object.__setattr__(self, "values", _frozen(v))

    def __add__(self, other):
        return GridField(self.grid, self.values + _vals(other, self.grid))

    def __sub__(self, other):
        return GridField(self.grid, self.values - _vals(other, self.grid))

    def __mul__(self, other):
        return GridField(self.grid, self.values * _vals(other, self.grid))

    __rmul__ = __mul__

    def __neg__(self):
        return GridField(self.grid, -self.values)


def _vals(other, grid: PeriodicGrid):
    if isinstance(other, GridField):
        check_same_grid(grid, other.grid)
        return other.values
    return other


def check_same_grid(a: PeriodicGrid, b: PeriodicGrid) -> None:
    if a.n != b.n:
        raise GridMismatchError(f"grid mismatch: n={a.n} vs n={b.n}")


def quadrature(f: GridField) -> float:
    """Midpoint rule, ``sum_i f_i dx``."""
    return float(np.sum(f.values) * f.grid.dx)


def oscillation(f: GridField) -> float:
    """``max f - min f`` over the nodes."""
    return float(np.max(f.values) - np.min(f.values))


def sup_norm(f: GridField) -> float:
    return float(np.max(np.abs(f.values)))


def spectral_derivative(f: GridField) -> GridField:
    """Derivative by Fourier differentiation; the Nyquist mode is dropped."""
    n = f.grid.n
    coef = np.fft.rfft(f.values)
    k = np.arange(coef.size, dtype=float)
    # the grid starts at -pi + dx/2, but the phase shift cancels in d/dx
    dcoef = 1j * k * coef
    dcoef[-1] = 0.0
    return GridField(f.grid, np.fft.irfft(dcoef, n=n))
