"""Finite-volume semi-discretization and RK4 integration of the SHK and Langevin PDEs.

Both dynamics share the transport operator ``div(grad rho + rho grad V)``; the SHK
flow adds the centered birth-death reaction ``-alpha * rho`` with
``alpha = log(rho/pi) - E_rho[log(rho/pi)]``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from ._io import fmt
from .errors import ConfigurationError, MassDriftError, PositivityError
from .grid import GridField, PeriodicGrid, check_same_grid
from .potentials import GibbsTarget, PotentialSpec, eval_potential, gibbs_target

MASS_TOL = 1e-10
CFL_FACTOR = 0.2


class Dynamics(str, enum.Enum):
    SHK = "SHK"
    LANGEVIN = "LANGEVIN"


class Flux(str, enum.Enum):
    # fitted: dx*G = rho_{i+1} e^{du/2} - rho_i e^{-du/2}; stationary on exp(-V) exactly
    FITTED = "fitted"
    # central: dx*G = (rho_{i+1} - rho_i) + (rho_i + rho_{i+1}) du / 2
    CENTRAL = "central"


@dataclass(frozen=True)
class DensityField:
    """Strictly positive probability density on the grid, with cached logs."""

    grid: PeriodicGrid
    values: np.ndarray
    log_values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        lv = np.array(self.log_values, dtype=float)
        n = self.grid.n
        if v.shape != (n,) or lv.shape != (n,):
            raise ConfigurationError(f"density must have {n} values")
        if not (np.all(np.isfinite(lv)) and np.all(v > 0)):
            raise ConfigurationError("density must be finite and strictly positive")
        mass = float(np.sum(v) * self.grid.dx)
        if abs(mass - 1.0) > MASS_TOL:
            raise ConfigurationError(f"density integrates to {mass!r}, not 1")
        v.setflags(write=False)
        lv.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "log_values", lv)

    @classmethod
    def from_values(cls, grid: PeriodicGrid, values, normalize: bool = False) -> "DensityField":
        v = np.asarray(values, dtype=float)
        if np.any(~(v > 0)):
            raise ConfigurationError("density must be strictly positive")
        if normalize:
            v = v / (np.sum(v) * grid.dx)
        return cls(grid, v, np.log(v))

    @classmethod
    def from_log_values(cls, grid: PeriodicGrid, log_values) -> "DensityField":
        lv = np.asarray(log_values, dtype=float)
        return cls(grid, np.exp(lv), lv)

    @classmethod
    def uniform(cls, grid: PeriodicGrid) -> "DensityField":
        return cls.from_log_values(grid, np.full(grid.n, -math.log(2.0 * math.pi)))

    @classmethod
    def von_mises(cls, grid: PeriodicGrid, kappa: float, loc: float = 0.0) -> "DensityField":
        """Density proportional to ``exp(kappa cos(x - loc))``, normalized on the grid."""
        return gibbs_target(GridField(grid, -kappa * np.cos(grid.nodes - loc))).density

    def as_field(self) -> GridField:
        return GridField(self.grid, self.values)

    @property
    def mass(self) -> float:
        return float(np.sum(self.values) * self.grid.dx)


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_final: float
    record_every: int = 1
    dynamics: Dynamics = Dynamics.SHK
    positivity_floor: float = 1e-300
    flux: Flux = Flux.FITTED

    def __post_init__(self):
        object.__setattr__(self, "dynamics", Dynamics(self.dynamics))
        object.__setattr__(self, "flux", Flux(self.flux))
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not self.t_final > 0:
            raise ConfigurationError(f"t_final must be positive, got {self.t_final!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigurationError(f"record_every must be an integer >= 1, got {self.record_every!r}")

    @property
    def nsteps(self) -> int:
        return max(1, math.ceil(self.t_final / self.dt - 1e-9))

    @property
    def step(self) -> float:
        """Step actually taken: ``dt`` shrunk so that ``nsteps * step == t_final``."""
        return self.t_final / self.nsteps

    def validate(self, grid: PeriodicGrid) -> None:
        limit = CFL_FACTOR * grid.dx**2
        if self.dt > limit * (1 + 1e-12):
            raise ConfigurationError(
                f"dt={self.dt!r} exceeds the stability limit {CFL_FACTOR}*dx^2={limit!r} for n={grid.n}"
            )

    @classmethod
    def for_grid(
        cls,
        grid: PeriodicGrid,
        t_final: float,
        record_dt: float = 0.05,
        dynamics: Dynamics = Dynamics.SHK,
        dt: float | None = None,
        **kw,
    ) -> "SolverConfig":
        """Largest admissible step with records every ``record_dt`` and one at ``t_final``."""
        dt_max = CFL_FACTOR * grid.dx**2 if dt is None else dt
        n_rec = max(1, math.ceil(t_final / record_dt - 1e-9))
        per_rec = math.ceil(t_final / n_rec / dt_max - 1e-9)
        step = t_final / (n_rec * per_rec)
        return cls(dt=step, t_final=t_final, record_every=per_rec, dynamics=dynamics, **kw)


@dataclass(frozen=True)
class Diagnostics:
    mass: np.ndarray
    kl_to_target: np.ndarray
    osc_log_ratio: np.ndarray
    # Lebesgue average of log(rho/pi) over the torus
    mean_log_ratio: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    snapshots: tuple[DensityField, ...]
    diagnostics: Diagnostics
    target: GibbsTarget = field(repr=False)
    dynamics: Dynamics = Dynamics.SHK

    @property
    def final(self) -> DensityField:
        return self.snapshots[-1]

    def write_csv(self, path) -> Path:
        path = Path(path)
        d = self.diagnostics
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "mass", "kl_to_target", "osc_log_ratio", "mean_log_ratio"])
            for row in zip(self.times, d.mass, d.kl_to_target, d.osc_log_ratio, d.mean_log_ratio):
                w.writerow([fmt(x) for x in row])
        return path

    def write_snapshots(self, directory) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for k, snap in enumerate(self.snapshots):
            p = directory / f"rho_t{k}.csv"
            with p.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["theta", "rho"])
                for x, r in zip(snap.grid.nodes, snap.values):
                    w.writerow([fmt(x), fmt(r)])
            paths.append(p)
        return paths


def _flux_coefficients(V: GridField, flux: Flux) -> tuple[np.ndarray, np.ndarray]:
    du = np.roll(V.values, -1) - V.values
    if flux is Flux.FITTED:
        return np.exp(0.5 * du), np.exp(-0.5 * du)
    return 1.0 + 0.5 * du, 1.0 - 0.5 * du


def transport_rhs(rho: DensityField, V: GridField, flux: Flux = Flux.FITTED) -> GridField:
    """Discrete ``div(grad rho + rho grad V)`` as a flux difference over each cell."""
    check_same_grid(rho.grid, V.grid)
    cp, cm = _flux_coefficients(V, Flux(flux))
    r = rho.values
    g = (np.roll(r, -1) * cp - r * cm) / rho.grid.dx
    return GridField(rho.grid, (g - np.roll(g, 1)) / rho.grid.dx)


def reaction_rate(rho: DensityField, target: GibbsTarget) -> GridField:
    check_same_grid(rho.grid, target.density.grid)
    s = rho.log_values - target.log_density.values
    # normalized expectation, so sum(alpha * rho) vanishes even off unit mass
    mean = np.sum(s * rho.values) / np.sum(rho.values)
    return GridField(rho.grid, s - mean)


def rhs(
    rho: DensityField,
    V: GridField,
    target: GibbsTarget,
    dynamics: Dynamics = Dynamics.SHK,
    flux: Flux = Flux.FITTED,
) -> GridField:
    out = transport_rhs(rho, V, flux)
    if Dynamics(dynamics) is Dynamics.SHK:
        out = out - reaction_rate(rho, target) * rho.values
    return out


def _diagnose(rho: np.ndarray, logrho: np.ndarray, logpi: np.ndarray, dx: float):
    s = logrho - logpi
    mass = float(np.sum(rho) * dx)
    kl = max(float(np.sum(rho * s) * dx), 0.0)
    return mass, kl, float(np.max(s) - np.min(s)), float(np.mean(s))


def integrate(
    rho0: DensityField,
    V: PotentialSpec | GridField,
    config: SolverConfig,
    target: GibbsTarget | None = None,
) -> Trajectory:
    """Integrate from ``rho0`` to ``config.t_final`` with classical RK4.

    Raises :class:`PositivityError` if any cell drops below the floor and
    :class:`MassDriftError` if the recorded mass leaves ``1 +- 1e-10``.
    """
    grid = rho0.grid
    config.validate(grid)
    if isinstance(V, PotentialSpec):
        V = eval_potential(V, grid)
    check_same_grid(grid, V.grid)
    if target is None:
        target = gibbs_target(V)
    cp, cm = _flux_coefficients(V, config.flux)
    logpi = np.ascontiguousarray(target.log_density.values)
    shk = config.dynamics is Dynamics.SHK

    rho = np.array(rho0.values)
    logrho = np.array(rho0.log_values)
    dt = config.step
    nsteps = config.nsteps
    fail = np.zeros(2, dtype=np.int64)

    times = [0.0]
    snaps = [rho0]
    diag = [_diagnose(rho, logrho, logpi, grid.dx)]
    done = 0
    while done < nsteps:
        chunk = min(config.record_every, nsteps - done)
        status = _kernels.rk4_advance(
            rho, logrho, cp, cm, logpi, grid.dx, dt, chunk, shk, config.positivity_floor, fail
        )
        if status != _kernels.OK:
            t_bad = (done + int(fail[0]) + 1) * dt
            raise PositivityError(t_bad, int(fail[1]), float(rho[int(fail[1])]))
        done += chunk
        t = done * dt if done < nsteps else config.t_final
        d = _diagnose(rho, logrho, logpi, grid.dx)
        if abs(d[0] - 1.0) > MASS_TOL:
            raise MassDriftError(t, d[0] - 1.0)
        times.append(t)
        snaps.append(DensityField(grid, rho.copy(), logrho.copy()))
        diag.append(d)

    cols = np.array(diag).T
    return Trajectory(
        times=np.array(times),
        snapshots=tuple(snaps),
        diagnostics=Diagnostics(*[np.array(c) for c in cols]),
        target=target,
        dynamics=config.dynamics,
    )


def integrate_pair(
    rho0: DensityField,
    potentials: Sequence[PotentialSpec | GridField],
    config: SolverConfig,
) -> list[Trajectory]:
    """Integrate the same initial density under several potentials."""
    return [integrate(rho0, V, config) for V in potentials]
