"""Divergences and pointwise-ratio statistics between densities on a shared grid."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigurationError
from .flow import DensityField
from .grid import GridField, check_same_grid

KL_CLAMP = 1e-12
# Largest |log p - log q| we are willing to exponentiate.
MAX_LOG_RATIO = 30.0

DEFAULT_ALPHAS = (2.0, 3.0, 5.0, 10.0)
DEFAULT_EPS = (0.15,)


def _pair(p: DensityField, q: DensityField) -> np.ndarray:
    check_same_grid(p.grid, q.grid)
    return p.log_values - q.log_values


def kl(p: DensityField, q: DensityField) -> float:
    """``sum p (log p - log q) dx``; tiny negative roundoff is clamped to zero."""
    r = _pair(p, q)
    val = float(np.sum(p.values * r) * p.grid.dx)
    if -KL_CLAMP <= val < 0.0:
        return 0.0
    return val


def renyi(alpha: float, p: DensityField, q: DensityField) -> float:
    """Order-``alpha`` Renyi divergence, evaluated in log space."""
    if not (alpha > 1.0 and math.isfinite(alpha)):
        raise ConfigurationError(f"Renyi order must be finite and > 1, got {alpha!r}")
    check_same_grid(p.grid, q.grid)
    terms = alpha * p.log_values + (1.0 - alpha) * q.log_values + math.log(p.grid.dx)
    return max(float(logsumexp(terms)) / (alpha - 1.0), 0.0)


def tv(p: DensityField, q: DensityField) -> float:
    check_same_grid(p.grid, q.grid)
    return 0.5 * float(np.sum(np.abs(p.values - q.values)) * p.grid.dx)


def hockey_stick(eps: float, p: DensityField, q: DensityField) -> float:
    """``sum max(p - e^eps q, 0) dx``."""
    if not eps >= 0:
        raise ConfigurationError(f"hockey-stick eps must be >= 0, got {eps!r}")
    r = _pair(p, q)
    if np.max(r) > MAX_LOG_RATIO:
        raise ConfigurationError("log density ratio exceeds 30; refusing to exponentiate")
    # p - e^eps q = q (e^r - e^eps); factored form keeps eps = 0 equal to tv
    if eps == 0.0:
        diff = p.values - q.values
    else:
        diff = q.values * (np.exp(r) - math.exp(eps))
    return float(np.sum(np.maximum(diff, 0.0)) * p.grid.dx)


def hockey_stick_symmetric(eps: float, p: DensityField, q: DensityField) -> float:
    return max(hockey_stick(eps, p, q), hockey_stick(eps, q, p))


def hockey_stick_bruteforce(eps: float, p: DensityField, q: DensityField) -> float:
    """Supremum over all index subsets ``S`` of ``P(S) - e^eps Q(S)``; exponential in n."""
    check_same_grid(p.grid, q.grid)
    n = p.grid.n
    if n > 20:
        raise ConfigurationError("brute-force hockey-stick is limited to n <= 20")
    a = p.values * p.grid.dx
    b = math.exp(eps) * q.values * q.grid.dx
    best = 0.0
    for mask in itertools.product((False, True), repeat=n):
        idx = np.flatnonzero(mask)
        best = max(best, float(np.sum(a[idx]) - np.sum(b[idx])))
    return best


def sup_log_ratio(p: DensityField, q: DensityField) -> float:
    return float(np.max(np.abs(_pair(p, q))))


def moment_stats(f: GridField, rho: DensityField) -> tuple[float, float]:
    """Mean and variance of ``f`` under ``rho``."""
    check_same_grid(f.grid, rho.grid)
    dx = rho.grid.dx
    mean = float(np.sum(f.values * rho.values) * dx)
    var = float(np.sum((f.values - mean) ** 2 * rho.values) * dx)
    return mean, var


def covariance(f: GridField, g: GridField, rho: DensityField) -> float:
    check_same_grid(f.grid, rho.grid)
    check_same_grid(g.grid, rho.grid)
    dx = rho.grid.dx
    mf = float(np.sum(f.values * rho.values) * dx)
    mg = float(np.sum(g.values * rho.values) * dx)
    return float(np.sum((f.values - mf) * (g.values - mg) * rho.values) * dx)


@dataclass(frozen=True)
class DivergenceReport:
    t: float
    kl: float
    tv: float
    sup_log_ratio: float
    renyi: Mapping[float, float] = field(default_factory=dict)
    hockey: Mapping[float, float] = field(default_factory=dict)

    def row(self) -> dict:
        out = {"t": self.t, "kl": self.kl, "tv": self.tv, "sup_log_ratio": self.sup_log_ratio}
        for a, v in self.renyi.items():
            out[f"renyi_{_label(a)}"] = v
        for e, v in self.hockey.items():
            out[f"hs_{_label(e)}"] = v
        return out


def _label(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def divergence_report(
    t: float,
    p: DensityField,
    q: DensityField,
    alphas: Iterable[float] = DEFAULT_ALPHAS,
    eps_list: Iterable[float] = DEFAULT_EPS,
    symmetric: bool = True,
) -> DivergenceReport:
    hs = hockey_stick_symmetric if symmetric else hockey_stick
    return DivergenceReport(
        t=float(t),
        kl=kl(p, q),
        tv=tv(p, q),
        sup_log_ratio=sup_log_ratio(p, q),
        renyi={float(a): renyi(a, p, q) for a in alphas},
        hockey={float(e): hs(e, p, q) for e in eps_list},
    )


def pair_reports(
    times: Sequence[float],
    ps: Sequence[DensityField],
    qs: Sequence[DensityField],
    alphas: Iterable[float] = DEFAULT_ALPHAS,
    eps_list: Iterable[float] = DEFAULT_EPS,
) -> list[DivergenceReport]:
    alphas, eps_list = tuple(alphas), tuple(eps_list)
    return [divergence_report(t, p, q, alphas, eps_list) for t, p, q in zip(times, ps, qs)]
