import json

import numpy as np
import pytest

from shkflow.errors import ConfigurationError
from shkflow.experiments import (
    POTENTIALS,
    ExperimentConfig,
    ExpId,
    InitSpec,
    run_exp1,
    run_experiment,
    run_pair,
)
from shkflow.grid import build_grid


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(ExpId.EXP2, c_grid_min=0.0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(ExpId.EXP2, record_dt=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig("EXP9")
    with pytest.raises(ConfigurationError):
        InitSpec("gaussian")
    assert ExperimentConfig(ExpId.EXP3).final_time == 7.0
    assert ExperimentConfig(ExpId.EXP4).init_spec == InitSpec("von_mises", 2.0, 0.0)
    spec = InitSpec.from_json({"von_mises": {"kappa": 1.5, "loc": 0.2}})
    assert InitSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ConfigurationError):
        InitSpec.from_json({"von_mises": {"width": 1.0}})


def test_identical_potentials_give_zero_log_ratio():
    V, _ = POTENTIALS[ExpId.EXP1A]
    cfg = ExperimentConfig(ExpId.EXP1A, grid_n=64, t_final=1.0)
    run = run_pair(V, V, cfg, build_grid(64))
    assert np.all(run.series["sup_log_ratio"] <= 1e-10)


def test_small_exp1_report_layout(tmp_path):
    rep = run_exp1("B", ExperimentConfig(ExpId.EXP1B, grid_n=64, t_final=1.0))
    files = rep.write(tmp_path)
    assert [f.name for f in files] == ["series.csv", "scalars.json"]
    scalars = json.loads(files[1].read_text())
    assert scalars["Exact target floor"]["paper"] == 1.501403
    assert scalars["settings"]["T"] == 1.0
    header = files[0].read_text().splitlines()[0].split(",")
    assert header[:4] == ["t", "kl", "tv", "sup_log_ratio"]
    with pytest.raises(ConfigurationError):
        run_exp1("C")


def test_exp2_renyi_rows(runs):
    rep = runs[ExpId.EXP2]
    paper = {2: 0.055881, 3: 0.083185, 5: 0.133828, 10: 0.228820}
    got = [rep.scalars[f"alpha={a} empirical D_alpha"]["computed"] for a in (2, 3, 5, 10)]
    assert all(x < y for x, y in zip(got, got[1:]))
    env = rep.scalars["Theorem bound L_target(t)"]["computed"]
    for a, v in zip(paper, got):
        assert v <= env
        assert paper[a] / 2 <= v <= paper[a] * 2


def test_bound_columns_dominate_empirical_columns(runs):
    for exp_id in (ExpId.EXP1A, ExpId.EXP1B, ExpId.EXP2, ExpId.EXP3):
        s = runs[exp_id].series
        for b in ("kl_linear_bound", "kl_lsi_bound", "kl_gronwall_bound"):
            assert np.all(s["kl"] <= s[b])
        for b in ("logratio_a1_bound", "logratio_a1p_bound", "logratio_exact_floor_bound"):
            assert np.all(s["sup_log_ratio"] <= s[b])
        assert np.all(s["fisher"] >= s["fisher_lsi_floor"] - 1e-10)


def test_exp3_certificate_table(runs):
    rep = runs[ExpId.EXP3]
    cert = rep.tables["certificate"]
    assert list(cert)[:6] == ["t", "eps_pure_a1", "eps_pure_a1p", "eps_empirical", "kl_pair", "tv_pair"]
    assert "hs_sym@0.15" in cert and "delta_at_0.15" in cert
    eps_bound = np.minimum(cert["eps_pure_a1"], cert["eps_pure_a1p"])
    assert np.all(cert["eps_empirical"] <= eps_bound)
    assert np.all(cert["tv_pair"] <= np.sqrt(np.asarray(cert["kl_pair"]) / 2) + 1e-12)
    ub = rep.series["utility_bound"]
    ok = ~np.isnan(ub)
    assert ok.any()
    assert np.all(ub[ok] >= rep.series["utility"][ok])
    assert rep.scalars["Utility t*"]["computed"] <= 7.0
    t = cert["t"]
    assert np.all(np.diff(t) > 0) and t[-1] == 7.0


def test_swapping_the_pair_keeps_pure_epsilon(runs):
    from shkflow.bounds import BoundParams
    from shkflow.privacy import pure_dp_epsilon

    rep = runs[ExpId.EXP3]
    p = rep.params
    swapped = BoundParams(
        p.delta_pot, p.delta_osc, p.delta_gradpot, p.r0_prime, p.r0, s_tar_exact=p.s_tar_exact,
        lambda_gibbs=p.lambda_gibbs, c=p.c,
    )
    for t in (0.0, 1.0, 7.0):
        for mode in ("A1", "A1P"):
            assert pure_dp_epsilon(t, p, mode) == pure_dp_epsilon(t, swapped, mode)


def test_exp4_mass_for_both_dynamics(runs):
    s = runs[ExpId.EXP4].series
    for tag in ("shk", "langevin"):
        assert np.all(np.abs(s[f"mass_{tag}"] - 1) <= 1e-10)
        assert np.all(np.abs(s[f"mass_prime_{tag}"] - 1) <= 1e-10)
    assert s["kl_to_target_shk"][-1] < s["kl_to_target_langevin"][-1]


def test_rerun_is_bitwise_identical():
    cfg = ExperimentConfig(ExpId.EXP3, grid_n=64, t_final=0.5)
    a, b = run_experiment(cfg), run_experiment(cfg)
    for k in a.series:
        assert np.array_equal(np.asarray(a.series[k]), np.asarray(b.series[k]), equal_nan=True)
