import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shkflow.divergence import (
    covariance,
    divergence_report,
    hockey_stick,
    hockey_stick_bruteforce,
    hockey_stick_symmetric,
    kl,
    moment_stats,
    renyi,
    sup_log_ratio,
    tv,
)
from shkflow.errors import ConfigurationError, GridMismatchError
from shkflow.flow import DensityField
from shkflow.grid import GridField, build_grid
from shkflow.potentials import PotentialSpec, eval_potential, gibbs_target

logs = arrays(float, 8, elements=st.floats(-3.0, 3.0))


def _dens(grid, logv):
    return DensityField.from_values(grid, np.exp(np.asarray(logv)), normalize=True)


def _gibbs(spec, n):
    return gibbs_target(eval_potential(spec, build_grid(n))).density


def test_identical_pairs_give_zero():
    g = build_grid(32)
    p = _dens(g, np.sin(g.nodes))
    assert kl(p, p) == 0.0 and tv(p, p) == 0.0 and sup_log_ratio(p, p) == 0.0
    for a in (2.0, 3.0, 10.0):
        assert abs(renyi(a, p, p)) <= 1e-12
    for e in (0.0, 0.15, 1.0):
        assert hockey_stick(e, p, p) == 0.0
    u = DensityField.uniform(g)
    assert abs(kl(u, _gibbs(PotentialSpec(constant=4.2), 32))) <= 1e-12


def test_kl_uniform_against_gibbs_converges_under_refinement():
    V = PotentialSpec(constant=4.0, cos={1: -4.0})
    vals = []
    for n in (64, 640):
        g = build_grid(n)
        v = eval_potential(V, g).values
        q = gibbs_target(eval_potential(V, g))
        got = kl(DensityField.uniform(g), q.density)
        # KL(u || pi) = E_u[V] + log Z - log(2 pi), written out directly
        direct = np.mean(v) + q.log_z - math.log(2 * math.pi)
        assert got == pytest.approx(direct, abs=1e-12)
        vals.append(got)
    assert vals[0] == pytest.approx(vals[1], abs=1e-8)


def test_renyi_matches_direct_sum():
    g = build_grid(64)
    p = _dens(g, 0.8 * np.cos(g.nodes))
    q = _dens(g, 0.5 * np.sin(2 * g.nodes))
    for a in (2.0, 3.5, 10.0):
        direct = math.log(np.sum(p.values**a * q.values ** (1 - a)) * g.dx) / (a - 1)
        assert renyi(a, p, q) == pytest.approx(direct, rel=1e-12)
    with pytest.raises(ConfigurationError):
        renyi(1.0, p, q)
    with pytest.raises(ConfigurationError):
        renyi(math.inf, p, q)


def test_hockey_stick_examples_and_guards():
    g = build_grid(16)
    p = _dens(g, np.cos(g.nodes))
    q = _dens(g, -np.cos(g.nodes))
    assert hockey_stick(0.0, p, q) == pytest.approx(tv(p, q), abs=1e-12)
    with pytest.raises(ConfigurationError):
        hockey_stick(-0.1, p, q)
    far = _dens(g, -40 * np.cos(g.nodes))
    with pytest.raises(ConfigurationError):
        hockey_stick(0.1, p, far)
    with pytest.raises(ConfigurationError):
        hockey_stick_bruteforce(0.1, _dens(build_grid(32), np.zeros(32)), _dens(build_grid(32), np.zeros(32)))
    with pytest.raises(GridMismatchError):
        kl(p, DensityField.uniform(build_grid(32)))


def test_near_disjoint_bumps_have_tv_close_to_one():
    g = build_grid(256)
    p = _dens(g, 60 * np.cos(g.nodes))
    q = _dens(g, -60 * np.cos(g.nodes))
    assert tv(p, q) >= 0.99


def test_moments_examples():
    g = build_grid(32)
    rho = _dens(g, np.cos(g.nodes))
    assert moment_stats(GridField(g, np.full(32, 2.0)), rho)[1] == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=80, deadline=None)
@given(logs, logs, st.floats(0.0, 2.0))
def test_divergence_inequalities(lp, lq, eps):
    g = build_grid(8)
    p, q = _dens(g, lp), _dens(g, lq)
    k = kl(p, q)
    assert k >= 0.0
    assert tv(p, q) <= math.sqrt(k / 2) + 1e-12
    r = [renyi(a, p, q) for a in (2.0, 3.0, 5.0, 10.0)]
    assert all(x <= y + 1e-12 for x, y in zip(r, r[1:]))
    assert k <= r[0] + 1e-12
    assert r[-1] <= sup_log_ratio(p, q) + 1e-12
    hs = [hockey_stick(e, p, q) for e in (0.0, eps, eps + 0.5)]
    assert hs[0] >= hs[1] - 1e-15 >= hs[2] - 2e-15
    if eps > 0:
        assert hockey_stick(eps, p, q) <= k / eps + 1e-15
    assert hockey_stick(eps, p, q) == pytest.approx(hockey_stick_bruteforce(eps, p, q), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(logs, logs, st.integers(1, 7))
def test_rotation_invariance(lp, lq, shift):
    g = build_grid(8)
    p, q = _dens(g, lp), _dens(g, lq)
    pr, qr = _dens(g, np.roll(lp, shift)), _dens(g, np.roll(lq, shift))
    a = divergence_report(0.0, p, q).row()
    b = divergence_report(0.0, pr, qr).row()
    for key in a:
        assert a[key] == pytest.approx(b[key], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(logs, arrays(float, 8, elements=st.floats(-5, 5)), arrays(float, 8, elements=st.floats(-5, 5)))
def test_variance_and_covariance_bounds(lp, f, h):
    g = build_grid(8)
    rho = _dens(g, lp)
    F, H = GridField(g, f), GridField(g, h)
    _, vf = moment_stats(F, rho)
    _, vh = moment_stats(H, rho)
    assert vf <= (f.max() - f.min()) ** 2 / 4 + 1e-12
    assert abs(covariance(F, H, rho)) <= math.sqrt(vf * vh) + 1e-12
    if np.all(lp == lp[0]):
        assert abs(kl(rho, DensityField.uniform(g))) <= 1e-12


def test_kl_zero_only_for_equal_densities():
    g = build_grid(8)
    p = DensityField.uniform(g)
    q = _dens(g, 1e-3 * np.cos(g.nodes))
    assert np.max(np.abs(p.values - q.values)) > 1e-10
    assert kl(p, q) > 0


def test_report_row_layout():
    g = build_grid(16)
    p, q = _dens(g, np.cos(g.nodes)), _dens(g, np.sin(g.nodes))
    row = divergence_report(1.5, p, q).row()
    assert list(row) == ["t", "kl", "tv", "sup_log_ratio", "renyi_2", "renyi_3", "renyi_5", "renyi_10", "hs_0.15"]
    assert row["hs_0.15"] == hockey_stick_symmetric(0.15, p, q)
