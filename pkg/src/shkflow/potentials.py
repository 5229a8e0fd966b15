"""Potentials, Gibbs targets and the sensitivity scalars of a potential pair."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigurationError
from .grid import (
    GridField,
    PeriodicGrid,
    check_same_grid,
    oscillation,
    spectral_derivative,
    sup_norm,
)

if TYPE_CHECKING:
    from .flow import DensityField


def _harmonics(d: Mapping | None, name: str) -> dict[int, float]:
    out: dict[int, float] = {}
    for k, a in (d or {}).items():
        try:
            kk = int(k)
        except (TypeError, ValueError):
            raise ConfigurationError(f"{name} harmonic key {k!r} is not an integer") from None
        if kk < 1 or str(kk) != str(k).strip():
            raise ConfigurationError(f"{name} harmonic must be an integer >= 1, got {k!r}")
        out[kk] = float(a)
    return out


@dataclass(frozen=True)
class PotentialSpec:
    """A trigonometric polynomial ``c + sum a_k cos kx + sum b_k sin kx``.

    If ``tabulated`` is given it replaces the closed form entirely, and gradients
    are taken spectrally.
    """

    constant: float = 0.0
    cos: Mapping[int, float] = field(default_factory=dict)
    sin: Mapping[int, float] = field(default_factory=dict)
    tabulated: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "cos", _harmonics(self.cos, "cos"))
        object.__setattr__(self, "sin", _harmonics(self.sin, "sin"))
        if self.tabulated is not None:
            tab = np.array(self.tabulated, dtype=float)
            if tab.ndim != 1 or not np.all(np.isfinite(tab)):
                raise ConfigurationError("tabulated potential must be a finite 1-D list")
            tab.setflags(write=False)
            object.__setattr__(self, "tabulated", tab)

    @property
    def max_harmonic(self) -> int:
        return max([0, *self.cos, *self.sin])

    @classmethod
    def from_json(cls, obj: Mapping) -> "PotentialSpec":
        allowed = {"constant", "cos", "sin", "tabulated"}
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigurationError(f"unknown potential keys: {sorted(unknown)}")
        if "tabulated" in obj and len(set(obj) - {"tabulated"}):
            raise ConfigurationError("a tabulated potential cannot also have closed-form terms")
        return cls(
            constant=obj.get("constant", 0.0),
            cos=obj.get("cos"),
            sin=obj.get("sin"),
            tabulated=obj.get("tabulated"),
        )

    def to_json(self) -> dict:
        if self.tabulated is not None:
            return {"tabulated": [float(v) for v in self.tabulated]}
        return {
            "constant": self.constant,
            "cos": {str(k): v for k, v in sorted(self.cos.items())},
            "sin": {str(k): v for k, v in sorted(self.sin.items())},
        }

    def shifted(self, c: float) -> "PotentialSpec":
        if self.tabulated is not None:
            return PotentialSpec(tabulated=self.tabulated + c)
        return PotentialSpec(self.constant + c, self.cos, self.sin)

    def __add__(self, other: "PotentialSpec") -> "PotentialSpec":
        if self.tabulated is not None or other.tabulated is not None:
            raise ConfigurationError("cannot add tabulated potentials symbolically")
        cos = dict(self.cos)
        sin = dict(self.sin)
        for k, a in other.cos.items():
            cos[k] = cos.get(k, 0.0) + a
        for k, b in other.sin.items():
            sin[k] = sin.get(k, 0.0) + b
        return PotentialSpec(self.constant + other.constant, cos, sin)


def _check_spec(spec: PotentialSpec, grid: PeriodicGrid) -> None:
    if spec.tabulated is not None:
        if spec.tabulated.shape != (grid.n,):
            raise ConfigurationError(
                f"tabulated potential has {spec.tabulated.size} values, grid has {grid.n}"
            )
    elif spec.max_harmonic > grid.n // 4:
        raise ConfigurationError(
            f"harmonic {spec.max_harmonic} exceeds the anti-aliasing limit n/4 = {grid.n // 4}"
        )


def eval_potential(spec: PotentialSpec, grid: PeriodicGrid) -> GridField:
    _check_spec(spec, grid)
    if spec.tabulated is not None:
        return GridField(grid, spec.tabulated)
    x = grid.nodes
    v = np.full(grid.n, spec.constant)
    for k, a in sorted(spec.cos.items()):
        v += a * np.cos(k * x)
    for k, b in sorted(spec.sin.items()):
        v += b * np.sin(k * x)
    return GridField(grid, v)


def eval_gradient(spec: PotentialSpec, grid: PeriodicGrid) -> GridField:
    _check_spec(spec, grid)
    if spec.tabulated is not None:
        return spectral_derivative(GridField(grid, spec.tabulated))
    x = grid.nodes
    g = np.zeros(grid.n)
    for k, a in sorted(spec.cos.items()):
        g -= a * k * np.sin(k * x)
    for k, b in sorted(spec.sin.items()):
        g += b * k * np.cos(k * x)
    return GridField(grid, g)


@dataclass(frozen=True)
class GibbsTarget:
    """Discrete Gibbs density ``pi_i = exp(-V_i) / sum_j exp(-V_j) dx``."""

    density: "DensityField"
    log_density: GridField
    log_z: float


def gibbs_target(V: GridField) -> GibbsTarget:
    from .flow import DensityField

    grid = V.grid
    # log Z = logsumexp(-V) + log dx, max-shifted inside logsumexp
    log_z = float(logsumexp(-V.values) + math.log(grid.dx))
    logpi = -V.values - log_z
    density = DensityField.from_log_values(grid, logpi)
    return GibbsTarget(density=density, log_density=GridField(grid, logpi), log_z=log_z)


@dataclass(frozen=True)
class SensitivityReport:
    delta_pot: float
    delta_osc: float
    delta_gradpot: float
    s_tar_exact: float
    log_z_ratio: float

    def as_dict(self) -> dict:
        return {
            "delta_pot": self.delta_pot,
            "delta_osc": self.delta_osc,
            "delta_gradpot": self.delta_gradpot,
            "s_tar_exact": self.s_tar_exact,
            "log_z_ratio": self.log_z_ratio,
        }


def sensitivity_report(V: PotentialSpec, Vp: PotentialSpec, grid: PeriodicGrid) -> SensitivityReport:
    v, vp = eval_potential(V, grid), eval_potential(Vp, grid)
    g, gp = eval_gradient(V, grid), eval_gradient(Vp, grid)
    return sensitivity_from_fields(v, vp, g, gp)


def sensitivity_from_fields(v: GridField, vp: GridField, g: GridField, gp: GridField) -> SensitivityReport:
    check_same_grid(v.grid, vp.grid)
    h = v - vp
    t, tp = gibbs_target(v), gibbs_target(vp)
    return SensitivityReport(
        delta_pot=sup_norm(h),
        delta_osc=oscillation(h),
        delta_gradpot=sup_norm(g - gp),
        s_tar_exact=float(np.max(np.abs(t.log_density.values - tp.log_density.values))),
        log_z_ratio=t.log_z - tp.log_z,
    )
