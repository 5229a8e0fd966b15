"""Theoretical envelopes for paired flows: log-ratio, linear KL and LSI-driven KL bounds.

Also hosts the Holley-Strook constant, the closed-form KL rate between two
flows and the relative Fisher information used to audit the LSI step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .divergence import covariance, moment_stats
from .errors import ConfigurationError
from .flow import DensityField
from .grid import GridField, check_same_grid, oscillation, spectral_derivative
from .potentials import PotentialSpec, eval_gradient, eval_potential, gibbs_target, sensitivity_from_fields

RESONANCE_TOL = 1e-8


class StarMode(str, enum.Enum):
    """Which target-sensitivity scalar feeds the envelopes."""

    TWO_DELTA_POT = "TWO_DELTA_POT"
    DELTA_OSC = "DELTA_OSC"
    EXACT = "EXACT"


class EnvelopeKind(str, enum.Enum):
    LOGRATIO_A1 = "LOGRATIO_A1"
    LOGRATIO_A1P = "LOGRATIO_A1P"
    LOGRATIO_EXACT_FLOOR = "LOGRATIO_EXACT_FLOOR"
    KL_LINEAR = "KL_LINEAR"
    KL_LSI_CLOSED = "KL_LSI_CLOSED"
    KL_LSI_GRONWALL = "KL_LSI_GRONWALL"


@dataclass(frozen=True)
class BoundParams:
    """Scalars shared by every envelope.

    ``s_tar_exact`` is the measured ``sup |log pi - log pi'|``; ``s_tar`` picks the
    value named by ``s_tar_mode``.
    """

    delta_pot: float
    delta_osc: float
    delta_gradpot: float
    r0: float
    r0_prime: float
    b: float | None = None
    s_tar_exact: float = 0.0
    s_tar_mode: StarMode = StarMode.EXACT
    lambda_gibbs: float = 1.0
    c: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "s_tar_mode", StarMode(self.s_tar_mode))
        if self.b is None:
            object.__setattr__(self, "b", max(self.r0, self.r0_prime))
        for name in ("delta_pot", "delta_osc", "delta_gradpot", "r0", "r0_prime", "b", "s_tar_exact"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise ConfigurationError(f"{name} must be finite and >= 0, got {v!r}")
        if self.b < max(self.r0, self.r0_prime):
            raise ConfigurationError(f"b={self.b!r} must be >= max(r0, r0_prime)")
        if not 0.0 < self.c < 1.0:
            raise ConfigurationError(f"Young parameter c must lie in (0, 1), got {self.c!r}")
        if not self.lambda_gibbs > 0:
            raise ConfigurationError(f"lambda_gibbs must be > 0, got {self.lambda_gibbs!r}")

    @property
    def s_tar(self) -> float:
        if self.s_tar_mode is StarMode.TWO_DELTA_POT:
            return 2.0 * self.delta_pot
        if self.s_tar_mode is StarMode.DELTA_OSC:
            return self.delta_osc
        return self.s_tar_exact

    @property
    def kappa(self) -> float:
        return 2.0 * (1.0 - self.c) * math.exp(-self.b) * self.lambda_gibbs

    def with_(self, **kw) -> "BoundParams":
        return replace(self, **kw)

    @classmethod
    def from_pair(
        cls,
        V: PotentialSpec | GridField,
        Vp: PotentialSpec | GridField,
        rho0: DensityField,
        rho0_prime: DensityField | None = None,
        c: float = 0.5,
        lambda_gibbs: float | None = None,
        s_tar_mode: StarMode = StarMode.EXACT,
    ) -> "BoundParams":
        """Measure every scalar from the potentials and the initial densities."""
        grid = rho0.grid
        rho0_prime = rho0 if rho0_prime is None else rho0_prime
        v, g = _field_and_gradient(V, grid)
        vp, gp = _field_and_gradient(Vp, grid)
        rep = sensitivity_from_fields(v, vp, g, gp)
        r0 = initial_radius(rho0, v)
        r0p = initial_radius(rho0_prime, vp)
        if lambda_gibbs is None:
            lambda_gibbs = default_lambda_gibbs(v, vp)
        return cls(
            delta_pot=rep.delta_pot,
            delta_osc=rep.delta_osc,
            delta_gradpot=rep.delta_gradpot,
            r0=r0,
            r0_prime=r0p,
            s_tar_exact=rep.s_tar_exact,
            s_tar_mode=s_tar_mode,
            lambda_gibbs=lambda_gibbs,
            c=c,
        )


def _field_and_gradient(V, grid) -> tuple[GridField, GridField]:
    if isinstance(V, PotentialSpec):
        return eval_potential(V, grid), eval_gradient(V, grid)
    check_same_grid(V.grid, grid)
    return V, spectral_derivative(V)


def initial_radius(rho0: DensityField, V: GridField) -> float:
    """Oscillation of ``log(rho0 / pi)`` for the Gibbs target of ``V``.

    Both densities have unit mass, so the log-ratio changes sign and its sup
    norm never exceeds this value.
    """
    target = gibbs_target(V)
    return oscillation(GridField(rho0.grid, rho0.log_values - target.log_density.values))


def holley_strook(lambda_base: float, osc: float) -> float:
    """LSI constant after a bounded perturbation of oscillation ``osc``."""
    if not lambda_base > 0:
        raise ConfigurationError(f"lambda_base must be > 0, got {lambda_base!r}")
    if not osc >= 0:
        raise ConfigurationError(f"oscillation must be >= 0, got {osc!r}")
    return lambda_base * math.exp(-osc)


def default_lambda_gibbs(V: GridField, Vp: GridField, lambda_base: float = 1.0) -> float:
    """Conservative LSI constant valid for both Gibbs targets.

    Starts from the unit constant of the uniform measure on the circle and
    perturbs by the larger of the two potential oscillations.
    """
    return holley_strook(lambda_base, max(oscillation(V), oscillation(Vp)))


@dataclass(frozen=True)
class EnvelopeSeries:
    times: np.ndarray
    values: np.ndarray
    kind: EnvelopeKind

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.shape != v.shape:
            raise ConfigurationError("envelope times and values differ in length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ConfigurationError("envelope times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "kind", EnvelopeKind(self.kind))


def _check_t(t: float) -> None:
    if not t >= 0:
        raise ConfigurationError(f"time must be >= 0, got {t!r}")


def logratio_envelope(t: float, params: BoundParams, kind: EnvelopeKind = EnvelopeKind.LOGRATIO_A1) -> float:
    """Sup-norm bound on ``log(rho_t / rho'_t)``; the floor depends on ``kind``."""
    _check_t(t)
    kind = EnvelopeKind(kind)
    transient = math.exp(-t) * (params.r0 + params.r0_prime)
    if kind is EnvelopeKind.LOGRATIO_A1:
        return 2.0 * params.delta_pot + transient
    if kind is EnvelopeKind.LOGRATIO_A1P:
        return params.delta_osc + transient
    if kind is EnvelopeKind.LOGRATIO_EXACT_FLOOR:
        return params.s_tar_exact + transient
    raise ConfigurationError(f"{kind.value} is not a log-ratio envelope")


def kl_rate_majorant(s: np.ndarray | float, params: BoundParams):
    """Upper bound on dH/dt without the LSI contraction."""
    s = np.asarray(s, dtype=float)
    return (
        0.25 * params.delta_gradpot**2
        + params.r0_prime**2 / 16.0 * np.exp(-2.0 * s)
        + (params.s_tar * params.r0 / 2.0 + 2.0 * params.r0_prime) * np.exp(-s)
    )


def kl_bound_linear(t: float, params: BoundParams) -> float:
    """Time integral of :func:`kl_rate_majorant`; grows linearly when gradients differ."""
    _check_t(t)
    return (
        0.25 * params.delta_gradpot**2 * t
        - params.r0_prime**2 / 32.0 * math.expm1(-2.0 * t)
        - (params.s_tar * params.r0 / 2.0 + 2.0 * params.r0_prime) * math.expm1(-t)
    )


def lsi_coefficients(params: BoundParams) -> tuple[float, float, float, float]:
    """``(A1, A2, A3, kappa)`` of the closed-form LSI bound."""
    kappa = params.kappa
    if not kappa > 0:
        raise ConfigurationError(f"contraction rate kappa must be > 0, got {kappa!r}")
    a1 = params.delta_gradpot**2 / (4.0 * params.c)
    a2 = params.b * (params.s_tar / 2.0 + 2.0)
    a3 = params.b**2 / 16.0
    return a1, a2, a3, kappa


def _exp_diff_ratio(a: float, b: float, t: float) -> float:
    """``(e^{-a t} - e^{-b t}) / (b - a)``, with a series about ``t e^{-a t}`` near ``a = b``."""
    d = b - a
    if abs(d) < RESONANCE_TOL:
        x = d * t
        return t * math.exp(-a * t) * (1.0 - x / 2.0 + x * x / 6.0)
    # e^{-at} (1 - e^{-(b-a)t}) / (b - a), cancellation-free via expm1
    return -math.exp(-a * t) * math.expm1(-(b - a) * t) / (b - a)


def kl_bound_lsi(t: float, params: BoundParams) -> float:
    """Closed form of ``int_0^t e^{-kappa (t-s)} (A1 + A2 e^{-s} + A3 e^{-2s}) ds``."""
    _check_t(t)
    a1, a2, a3, kappa = lsi_coefficients(params)
    return (
        a1 * _exp_diff_ratio(0.0, kappa, t)
        + a2 * _exp_diff_ratio(1.0, kappa, t)
        + a3 * _exp_diff_ratio(2.0, kappa, t)
    )


def lsi_plateau(params: BoundParams) -> float:
    a1, _, _, kappa = lsi_coefficients(params)
    return a1 / kappa


def gronwall_integral(
    t: float,
    contraction: Callable[[np.ndarray], np.ndarray],
    forcing: Callable[[np.ndarray], np.ndarray],
    per_unit: int = 400,
    min_intervals: int = 64,
) -> float:
    """``int_0^t exp(-int_s^t contraction(u) du) forcing(s) ds`` by composite Simpson.

    The inner integral is tabulated once with a cumulative Simpson rule on the
    same nodes as the outer one.
    """
    _check_t(t)
    if t == 0.0:
        return 0.0
    m = max(min_intervals, math.ceil(t * per_unit))
    m += m % 2
    s = np.linspace(0.0, t, m + 1)
    inner = cumulative_simpson(np.asarray(contraction(s), dtype=float) * np.ones_like(s), x=s, initial=0.0)
    integrand = np.exp(-(inner[-1] - inner)) * forcing(s)
    return float(simpson(integrand, x=s))


def kl_bound_gronwall(t_grid: Sequence[float], params: BoundParams, per_unit: int = 400) -> EnvelopeSeries:
    """LSI bound keeping the time-dependent factor ``exp(-B e^{-u})`` inside the integral."""
    t_grid = np.asarray(t_grid, dtype=float)
    a1, a2, a3, _ = lsi_coefficients(params)
    k = 2.0 * (1.0 - params.c) * params.lambda_gibbs
    b = params.b

    def contraction(u):
        return k * np.exp(-b * np.exp(-u))

    def forcing(s):
        return a1 + a2 * np.exp(-s) + a3 * np.exp(-2.0 * s)

    vals = [gronwall_integral(t, contraction, forcing, per_unit) for t in t_grid]
    return EnvelopeSeries(t_grid, np.array(vals), EnvelopeKind.KL_LSI_GRONWALL)


def envelope_series(t_grid: Sequence[float], params: BoundParams, kind: EnvelopeKind) -> EnvelopeSeries:
    kind = EnvelopeKind(kind)
    t_grid = np.asarray(t_grid, dtype=float)
    if kind is EnvelopeKind.KL_LSI_GRONWALL:
        return kl_bound_gronwall(t_grid, params)
    if kind is EnvelopeKind.KL_LINEAR:
        fn = kl_bound_linear
    elif kind is EnvelopeKind.KL_LSI_CLOSED:
        fn = kl_bound_lsi
    else:
        return EnvelopeSeries(t_grid, np.array([logratio_envelope(t, params, kind) for t in t_grid]), kind)
    return EnvelopeSeries(t_grid, np.array([fn(t, params) for t in t_grid]), kind)


def fisher_information(rho: DensityField, rho_prime: DensityField) -> float:
    """``int |d/dx log(rho/rho')|^2 rho`` with a spectral derivative."""
    check_same_grid(rho.grid, rho_prime.grid)
    w = GridField(rho.grid, rho.log_values - rho_prime.log_values)
    dw = spectral_derivative(w).values
    return float(np.sum(dw * dw * rho.values) * rho.grid.dx)


def kl_rate_decomposition(
    rho: DensityField,
    rho_prime: DensityField,
    V: PotentialSpec | GridField,
    Vp: PotentialSpec | GridField,
    terms: bool = False,
):
    """Instantaneous ``d/dt KL(rho_t || rho'_t)`` for two SHK flows, as six closed-form terms.

    With ``terms=True`` the individual terms are returned in order: dissipation,
    drift mismatch, self variance, cross covariance, potential covariance and
    the reaction-mean mismatch.
    """
    grid = rho.grid
    check_same_grid(grid, rho_prime.grid)
    v, g = _field_and_gradient(V, grid)
    vp, gp = _field_and_gradient(Vp, grid)
    pi, pip = gibbs_target(v), gibbs_target(vp)
    dx = grid.dx
    r = rho.values

    w = GridField(grid, rho.log_values - rho_prime.log_values)
    dw = spectral_derivative(w).values
    s = GridField(grid, rho.log_values - pi.log_density.values)
    sp = GridField(grid, rho_prime.log_values - pip.log_density.values)

    dissipation = -float(np.sum(dw * dw * r) * dx)
    drift = float(np.sum((gp.values - g.values) * dw * r) * dx)
    _, var_s = moment_stats(s, rho)
    cross = covariance(s, sp, rho)
    pot = covariance(s, vp - v, rho)
    mean_gap = moment_stats(sp, rho)[0] - moment_stats(sp, rho_prime)[0]
    parts = (dissipation, drift, -var_s, cross, -pot, mean_gap)
    if terms:
        return parts
    return float(sum(parts))
