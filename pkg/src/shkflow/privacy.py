"""Exponential-mechanism potentials on the torus and DP / utility certificates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ._io import fmt, write_columns
from .bounds import BoundParams
from .errors import ConfigurationError
from .flow import DensityField
from .grid import GridField, PeriodicGrid, check_same_grid
from .potentials import PotentialSpec

DEFAULT_SEED = 20240925


def wrap(x):
    """Map angles into ``[-pi, pi)``."""
    y = np.mod(np.asarray(x, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    # mod can round up to exactly 2 pi for tiny negative inputs
    return np.where(y >= math.pi, y - 2.0 * math.pi, y)


@dataclass(frozen=True)
class TorusDataset:
    observations: np.ndarray
    label: str = "D"

    def __post_init__(self):
        obs = np.atleast_1d(np.array(self.observations, dtype=float))
        if obs.ndim != 1 or obs.size == 0:
            raise ConfigurationError("dataset must contain at least one observation")
        if not np.all(np.isfinite(obs)):
            raise ConfigurationError("dataset observations must be finite")
        obs = wrap(obs)
        obs.setflags(write=False)
        object.__setattr__(self, "observations", obs)

    @property
    def n(self) -> int:
        return int(self.observations.size)

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("".join(fmt(y) + "\n" for y in self.observations))
        return path

    @classmethod
    def read_csv(cls, path, label: str = "D") -> "TorusDataset":
        lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
        return cls(np.array([float(ln) for ln in lines if ln]), label)


def make_dataset(
    n: int = 100, center: float = 0.25, scale: float = 0.05, seed: int = DEFAULT_SEED, label: str = "D"
) -> TorusDataset:
    """``center + scale * N(0, 1)`` draws from a Philox counter-based stream."""
    rng = np.random.Generator(np.random.Philox(seed))
    return TorusDataset(center + scale * rng.standard_normal(n), label)


def neighboring(dataset: TorusDataset, index: int, new_value: float, label: str | None = None) -> TorusDataset:
    if not 0 <= index < dataset.n:
        raise ConfigurationError(f"index {index} out of range for a dataset of size {dataset.n}")
    obs = np.array(dataset.observations)
    obs[index] = new_value
    return TorusDataset(obs, label if label is not None else dataset.label + "'")


class LossKind(str, enum.Enum):
    COSINE_MEAN = "COSINE_MEAN"


@dataclass(frozen=True)
class ExpMechSpec:
    beta: float
    loss_kind: LossKind = LossKind.COSINE_MEAN

    def __post_init__(self):
        if not self.beta > 0:
            raise ConfigurationError(f"beta must be > 0, got {self.beta!r}")
        object.__setattr__(self, "loss_kind", LossKind(self.loss_kind))


def mech_loss(dataset: TorusDataset, grid: PeriodicGrid) -> GridField:
    """Mean cosine loss ``(1/n) sum_j (1 - cos(x - y_j))`` at every node."""
    x = grid.nodes[:, None]
    y = dataset.observations[None, :]
    return GridField(grid, np.mean(1.0 - np.cos(x - y), axis=1))


def mech_potential(dataset: TorusDataset, spec: ExpMechSpec, grid: PeriodicGrid):
    return PotentialSpec(tabulated=spec.beta * mech_loss(dataset, grid).values)


class PureMode(str, enum.Enum):
    A1 = "A1"
    A1P = "A1P"


def pure_dp_epsilon(t: float, params: BoundParams, mode: PureMode = PureMode.A1) -> float:
    """Pure-DP level of the time-``t`` marginal for a dataset-independent start."""
    if not t >= 0:
        raise ConfigurationError(f"time must be >= 0, got {t!r}")
    floor = 2.0 * params.delta_pot if PureMode(mode) is PureMode.A1 else params.delta_osc
    return floor + 2.0 * params.b * math.exp(-t)


def approx_dp_delta(eps: float, h_bar: float) -> float:
    if not eps > 0:
        raise ConfigurationError(f"eps must be > 0, got {eps!r}")
    if not h_bar >= 0:
        raise ConfigurationError(f"KL bound must be >= 0, got {h_bar!r}")
    return h_bar / eps


@dataclass(frozen=True)
class ApproxDp:
    eps: float
    delta: float


def dp_from_tv(delta: float) -> ApproxDp:
    """A TV distance ``delta`` is a two-sided ``(0, delta)`` guarantee."""
    if not delta >= 0:
        raise ConfigurationError(f"delta must be >= 0, got {delta!r}")
    return ApproxDp(0.0, float(delta))


@dataclass(frozen=True)
class UtilityFloor:
    bound: float
    exact: float
    m_alpha: float
    alpha: float
    beta: float

    @property
    def m(self) -> float:
        return 2.0 * math.pi


def _gibbs_mean(f: np.ndarray, beta: float) -> float:
    w = np.exp(-beta * (f - f.min()))
    return float(np.sum(f * w) / np.sum(w))


def utility_floor(f: GridField, beta: float, alpha: float) -> UtilityFloor:
    """Suboptimality bound of the exponential mechanism, plus its exact value on the grid."""
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha!r}")
    if not beta > 0:
        raise ConfigurationError(f"beta must be > 0, got {beta!r}")
    v = f.values
    fstar = float(v.min())
    m_alpha = int(np.count_nonzero(v <= fstar + alpha)) * f.grid.dx
    if m_alpha <= 0:
        raise ConfigurationError(f"no grid cell has f <= f* + {alpha}; increase alpha")
    bound = alpha + (math.log(2.0 * math.pi / m_alpha) + 1.0) / beta
    return UtilityFloor(bound, _gibbs_mean(v, beta) - fstar, m_alpha, alpha, beta)


@dataclass(frozen=True)
class UtilityBound:
    value: float
    t_star: float
    floor: float
    transient: float


def utility_t_star(t0: float, m_cap: float, delta: float) -> float:
    return t0 + math.log(m_cap / delta) + math.log(1.0 / delta) / (1.0 - 2.0 * delta)


def utility_bound(
    t: float,
    t0: float,
    h_t0: float,
    m_cap: float,
    delta: float,
    f_sup: float,
    floor_terms: tuple[float, float, float, float],
) -> UtilityBound:
    """Finite-time utility bound: exponential-mechanism floor plus a decaying sampling term.

    ``floor_terms`` is ``(alpha, beta, m, m_alpha)``.
    """
    if not 0 <= h_t0 <= 1:
        raise ConfigurationError(f"KL at t0 must lie in [0, 1], got {h_t0!r}")
    if not m_cap >= 1:
        raise ConfigurationError(f"ratio floor constant M must be >= 1, got {m_cap!r}")
    if not 0 < delta < 0.25:
        raise ConfigurationError(f"delta must lie in (0, 1/4), got {delta!r}")
    if not f_sup >= 0:
        raise ConfigurationError(f"sup norm of f must be >= 0, got {f_sup!r}")
    alpha, beta, m, m_alpha = floor_terms
    if not (alpha > 0 and beta > 0 and 0 < m_alpha <= m):
        raise ConfigurationError("floor terms need alpha > 0, beta > 0 and 0 < m_alpha <= m")
    t_star = utility_t_star(t0, m_cap, delta)
    if t < t_star:
        raise ConfigurationError(f"t={t!r} is before the burn-in time t*={t_star!r}")
    floor = alpha + (math.log(m / m_alpha) + 1.0) / beta
    transient = 2.0 * f_sup * math.sqrt(h_t0 / 2.0) * math.exp(-(2.0 - 3.0 * delta) / 2.0 * (t - t_star))
    return UtilityBound(floor + transient, t_star, floor, transient)


def empirical_utility(rho: DensityField, f: GridField) -> float:
    check_same_grid(rho.grid, f.grid)
    return float(np.sum(f.values * rho.values) * rho.grid.dx) - float(f.values.min())


@dataclass(frozen=True)
class DpCertificate:
    times: np.ndarray
    pure_eps_a1: np.ndarray
    pure_eps_a1p: np.ndarray
    empirical_eps: np.ndarray
    kl_pair: np.ndarray
    tv_pair: np.ndarray
    hockey_sym: Mapping[float, np.ndarray]
    # eps -> delta from the KL bound, for each recorded time
    approx: Mapping[float, np.ndarray]
    utility: np.ndarray
    utility_floor: float
    tv_certificates: Sequence[ApproxDp] = field(default_factory=tuple)

    def columns(self) -> dict:
        cols = {
            "t": self.times,
            "eps_pure_a1": self.pure_eps_a1,
            "eps_pure_a1p": self.pure_eps_a1p,
            "eps_empirical": self.empirical_eps,
            "kl_pair": self.kl_pair,
            "tv_pair": self.tv_pair,
        }
        for e, v in self.hockey_sym.items():
            cols[f"hs_sym@{fmt(e)}"] = v
        for e, v in self.approx.items():
            cols[f"delta_at_{fmt(e)}"] = v
        cols["utility"] = self.utility
        cols["utility_floor"] = np.full(len(self.times), self.utility_floor)
        return cols

    def write_csv(self, path) -> Path:
        return write_columns(path, self.columns())
