import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shkflow.errors import ConfigurationError
from shkflow.grid import GridField, build_grid, quadrature
from shkflow.potentials import (
    PotentialSpec,
    eval_gradient,
    eval_potential,
    gibbs_target,
    sensitivity_report,
)

V1A = PotentialSpec(constant=1.2, cos={2: -1.2})
V1A_PRIME = V1A + PotentialSpec(constant=1.0, sin={1: 0.6})
V1B = PotentialSpec(constant=4.0, cos={1: -4.0})
V1B_PRIME = V1B + PotentialSpec(cos={1: -0.8})


def test_closed_form_evaluation():
    g = build_grid(512)
    v = eval_potential(V1A, g).values
    assert np.max(np.abs(v - 1.2 * (1 - np.cos(2 * g.nodes)))) <= 1e-14
    assert np.all(eval_potential(PotentialSpec(), g).values == 0.0)


def test_dft_recovers_coefficient():
    g = build_grid(128)
    v = eval_potential(PotentialSpec(sin={1: 0.45}), g).values
    # project on sin x with the midpoint rule, which is exact for low harmonics
    b1 = quadrature(g.field(v * np.sin(g.nodes))) / math.pi
    assert b1 == pytest.approx(0.45, abs=1e-12)
    coef = np.fft.rfft(v) / (g.n / 2)
    # the grid is offset by -pi + dx/2, so undo the phase before reading sin
    phase = np.exp(-1j * g.nodes[0])
    assert -(coef[1] * phase).imag == pytest.approx(0.45, abs=1e-12)


def test_gradient_against_finite_differences():
    for n in (128, 256):
        g = build_grid(n)
        grad = eval_gradient(V1A, g).values
        assert np.max(np.abs(grad - 2.4 * np.sin(2 * g.nodes))) <= 1e-13
        v = eval_potential(V1A, g).values
        fd = (np.roll(v, -1) - np.roll(v, 1)) / (2 * g.dx)
        assert np.max(np.abs(fd - grad)) <= 2.4 * 4 * g.dx**2
    g = build_grid(64)
    assert np.all(eval_gradient(PotentialSpec(constant=3.0), g).values == 0.0)
    d = eval_gradient(PotentialSpec(sin={1: 0.45}), g).values
    assert np.max(np.abs(d - 0.45 * np.cos(g.nodes))) <= 1e-14


def test_tabulated_gradient_is_spectral():
    g = build_grid(64)
    tab = PotentialSpec(tabulated=eval_potential(V1A, g).values)
    assert np.max(np.abs(eval_gradient(tab, g).values - eval_gradient(V1A, g).values)) <= 1e-12


def test_spec_validation_and_json():
    with pytest.raises(ConfigurationError):
        PotentialSpec(cos={0: 1.0})
    with pytest.raises(ConfigurationError):
        PotentialSpec.from_json({"constant": 1, "bogus": 2})
    with pytest.raises(ConfigurationError):
        PotentialSpec.from_json({"tabulated": [1.0] * 8, "constant": 1.0})
    with pytest.raises(ConfigurationError):
        eval_potential(PotentialSpec(cos={5: 1.0}), build_grid(16))
    with pytest.raises(ConfigurationError):
        eval_potential(PotentialSpec(tabulated=np.zeros(8)), build_grid(16))
    spec = PotentialSpec.from_json({"constant": 1.2, "cos": {"2": -1.2}, "sin": {"1": 0.6}})
    assert PotentialSpec.from_json(spec.to_json()) == spec


def test_gibbs_target_examples():
    g = build_grid(64)
    t = gibbs_target(GridField(g, np.full(64, 2.5)))
    assert np.max(np.abs(t.density.values - 1 / (2 * math.pi))) <= 1e-15
    assert t.log_z == pytest.approx(math.log(2 * math.pi) - 2.5, abs=1e-12)

    v = eval_potential(V1B, g)
    t = gibbs_target(v)
    assert quadrature(t.density.as_field()) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(t.density.values / np.exp(-v.values - t.log_z) - 1)) <= 1e-12
    d = t.density.values
    # nodes are symmetric about 0: i and n-1-i mirror each other
    assert np.max(np.abs(d - d[::-1])) <= 1e-12
    assert np.argmax(d) in (31, 32)


def test_sensitivity_experiment_pairs():
    g = build_grid(512)
    r = sensitivity_report(V1A, V1A_PRIME, g)
    assert r.delta_pot == pytest.approx(1.6, abs=1e-3)
    assert r.delta_osc == pytest.approx(1.2, abs=1e-3)
    assert r.s_tar_exact == pytest.approx(0.643549, abs=1e-3)
    r = sensitivity_report(V1B, V1B_PRIME, g)
    assert r.delta_pot == pytest.approx(0.8, abs=1e-3)
    assert r.delta_osc == pytest.approx(2 * r.delta_pot, abs=1e-12)
    assert r.s_tar_exact == pytest.approx(1.501403, abs=1e-3)
    r = sensitivity_report(V1A, V1A, g)
    assert r.delta_pot == r.delta_osc == r.delta_gradpot == r.s_tar_exact == 0.0


coef = st.floats(-2.0, 2.0, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(
    st.dictionaries(st.integers(1, 4), coef, max_size=3),
    st.dictionaries(st.integers(1, 4), coef, max_size=3),
    st.floats(-3.0, 3.0),
)
def test_sensitivity_inequalities_and_shift_invariance(cos, sin, shift):
    g = build_grid(32)
    V = PotentialSpec(cos={2: -1.0})
    Vp = PotentialSpec(0.3, cos, sin)
    r = sensitivity_report(V, Vp, g)
    assert r.s_tar_exact <= r.delta_osc + 1e-12
    assert r.delta_osc <= 2 * r.delta_pot + 1e-12
    assert abs(r.log_z_ratio) <= r.delta_pot + 1e-12
    h = eval_potential(V, g).values - eval_potential(Vp, g).values
    z_ratio = math.exp(r.log_z_ratio)
    assert math.exp(-h.max()) - 1e-12 <= z_ratio <= math.exp(-h.min()) + 1e-12

    rs = sensitivity_report(V, Vp.shifted(shift), g)
    assert rs.delta_osc == pytest.approx(r.delta_osc, abs=1e-12)
    assert rs.delta_gradpot == pytest.approx(r.delta_gradpot, abs=1e-12)
    assert rs.s_tar_exact == pytest.approx(r.s_tar_exact, abs=1e-12)
    d1 = gibbs_target(eval_potential(Vp, g)).density.values
    d2 = gibbs_target(eval_potential(Vp.shifted(shift), g)).density.values
    assert np.max(np.abs(d1 - d2)) <= 1e-12
