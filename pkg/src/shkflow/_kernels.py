"""Compiled RK4 stepper for the semi-discrete transport(-reaction) system.

The interface flux is written as ``dx * G_{i+1/2} = rho_{i+1} * cp[i] - rho[i] * cm[i]``
so both flux variants share one kernel. Loops are kept branch-free so they
vectorize; reductions run left to right and are reproducible.
"""

import math

import numba as nb
import numpy as np

OK = 0
NEGATIVE = 1

# log(rho + d) is taken as log(rho) + log1p(d / rho); below this |d / rho| a
# degree-5 series is exact to ~1e-19, above it we call log directly.
_SERIES_CUTOFF = 1e-3


@nb.njit(cache=True, error_model="numpy")
def stage_rhs(rho, logrho, cp, cm, logpi, inv_dx2, shk, g, out):
    n = rho.shape[0]
    for i in range(n - 1):
        g[i] = rho[i + 1] * cp[i] - rho[i] * cm[i]
    g[n - 1] = rho[0] * cp[n - 1] - rho[n - 1] * cm[n - 1]
    out[0] = (g[0] - g[n - 1]) * inv_dx2
    for i in range(1, n):
        out[i] = (g[i] - g[i - 1]) * inv_dx2
    if shk:
        mean = 0.0
        mass = 0.0
        for i in range(n):
            mean += (logrho[i] - logpi[i]) * rho[i]
            mass += rho[i]
        mean /= mass
        for i in range(n):
            out[i] -= (logrho[i] - logpi[i] - mean) * rho[i]


@nb.njit(cache=True, error_model="numpy")
def _series_log(logr, x):
    return logr + x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2))))


@nb.njit(cache=True, error_model="numpy")
def _update(rho, logrho, k, h, floor, tmp, logtmp):
    """Fill ``tmp = rho + h k`` and its log; return the first cell below floor or -1."""
    n = rho.shape[0]
    # integer OR-reductions vectorize where float min/max would not
    low = 0
    far = 0
    for i in range(n):
        d = h * k[i]
        x = d / rho[i]
        v = rho[i] + d
        tmp[i] = v
        logtmp[i] = _series_log(logrho[i], x)
        low |= not (v >= floor)
        far |= abs(x) >= _SERIES_CUTOFF
    if low:
        for i in range(n):
            if not tmp[i] >= floor:
                return i
    if far:
        for i in range(n):
            if abs(tmp[i] - rho[i]) >= _SERIES_CUTOFF * rho[i]:
                logtmp[i] = math.log(tmp[i])
    return -1


@nb.njit(cache=True, error_model="numpy")
def rk4_advance(rho, logrho, cp, cm, logpi, dx, dt, nsteps, shk, floor, fail):
    """Advance ``rho`` in place by ``nsteps`` classical RK4 steps.

    Returns OK, or NEGATIVE with ``fail = [step, cell]`` filled in.
    """
    n = rho.shape[0]
    inv_dx2 = 1.0 / (dx * dx)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    g = np.empty(n)
    tmp = np.empty(n)
    logtmp = np.empty(n)
    h2 = 0.5 * dt
    w = dt / 6.0
    for step in range(nsteps):
        stage_rhs(rho, logrho, cp, cm, logpi, inv_dx2, shk, g, k1)
        bad = _update(rho, logrho, k1, h2, floor, tmp, logtmp)
        if bad < 0:
            stage_rhs(tmp, logtmp, cp, cm, logpi, inv_dx2, shk, g, k2)
            bad = _update(rho, logrho, k2, h2, floor, tmp, logtmp)
        if bad < 0:
            stage_rhs(tmp, logtmp, cp, cm, logpi, inv_dx2, shk, g, k3)
            bad = _update(rho, logrho, k3, dt, floor, tmp, logtmp)
        if bad >= 0:
            fail[0] = step
            fail[1] = bad
            return NEGATIVE
        stage_rhs(tmp, logtmp, cp, cm, logpi, inv_dx2, shk, g, k4)
        for i in range(n):
            k1[i] = w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        bad = _update(rho, logrho, k1, 1.0, floor, tmp, logtmp)
        if bad >= 0:
            fail[0] = step
            fail[1] = bad
            return NEGATIVE
        rho[:] = tmp
        logrho[:] = logtmp
    # drop the rounding accumulated by the series updates
    for i in range(n):
        logrho[i] = math.log(rho[i])
    return OK
