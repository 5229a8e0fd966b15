"""Command-line entry point.

Exit status: 0 on success, 1 on invalid input, 2 when the solver fails.
Only the final JSON summary goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from ._io import write_columns, write_json
from .bounds import BoundParams, EnvelopeKind, StarMode, envelope_series
from .divergence import DEFAULT_ALPHAS, DEFAULT_EPS, pair_reports
from .errors import ConfigurationError, ShkError, SolverError
from .experiments import (
    ExperimentConfig,
    ExpId,
    InitSpec,
    certify_pair,
    run_experiment,
)
from .flow import Dynamics, Flux, SolverConfig, integrate
from .grid import build_grid
from .potentials import PotentialSpec, eval_potential
from .privacy import ExpMechSpec, TorusDataset, mech_loss, mech_potential, neighboring

EXPERIMENTS = {"exp1a": ExpId.EXP1A, "exp1b": ExpId.EXP1B, "exp2": ExpId.EXP2, "exp3": ExpId.EXP3, "exp4": ExpId.EXP4}

# Top-level keys accepted by the solve / bounds / certify configs.
SOLVE_KEYS = {
    "potential", "potential_prime", "dynamics", "init", "grid_n", "dt", "t_final",
    "record_dt", "flux", "c", "lambda_gibbs", "s_tar_mode", "renyi_alphas", "eps_list",
    "write_snapshots", "seed",
}
CERTIFY_KEYS = {
    "dataset", "dataset_prime", "neighbor_index", "neighbor_value", "beta", "grid_n", "dt",
    "t_final", "record_dt", "flux", "c", "eps_list", "renyi_alphas", "utility_delta", "seed", "init",
}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config(path: str | None, overrides: dict) -> dict:
    cfg: dict = {}
    if path:
        try:
            cfg = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigurationError("config file must hold a JSON object")
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg


def _check_keys(cfg: dict, allowed: set[str], what: str) -> None:
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown {what} config keys: {unknown}")


def experiment_config(exp_id: ExpId, cfg: dict) -> ExperimentConfig:
    allowed = ExperimentConfig.field_names() - {"id"}
    _check_keys(cfg, allowed, "experiment")
    kw = dict(cfg)
    for key in ("renyi_alphas", "eps_list"):
        if key in kw:
            kw[key] = tuple(kw[key])
    try:
        return ExperimentConfig(exp_id, **kw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from None


def _solver_for(cfg: dict, grid, dynamics) -> SolverConfig:
    t_final = float(cfg.get("t_final", 8.0))
    solver = SolverConfig.for_grid(
        grid, t_final, float(cfg.get("record_dt", 0.05)), dynamics=dynamics,
        dt=cfg.get("dt"), flux=cfg.get("flux", Flux.FITTED),
    )
    if cfg.get("dt") is not None:
        SolverConfig(float(cfg["dt"]), t_final).validate(grid)
    return solver


def _potential(obj, name: str) -> PotentialSpec:
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{name} must be a JSON object")
    return PotentialSpec.from_json(obj)


def cmd_solve(cfg: dict, outdir: Path) -> list[Path]:
    _check_keys(cfg, SOLVE_KEYS, "solve")
    if "potential" not in cfg:
        raise ConfigurationError("solve needs a 'potential' entry")
    grid = build_grid(cfg.get("grid_n", 512))
    V = _potential(cfg["potential"], "potential")
    dynamics = Dynamics(cfg.get("dynamics", "SHK"))
    solver = _solver_for(cfg, grid, dynamics)
    rho0 = InitSpec.from_json(cfg.get("init")).build(grid)
    d = outdir / "solve"
    d.mkdir(parents=True, exist_ok=True)
    files = []
    tr = integrate(rho0, V, solver)
    files.append(tr.write_csv(d / "diagnostics.csv"))
    files.append(write_json(d / "potential.json", {"tabulated": eval_potential(V, grid).values.tolist()}))
    if cfg.get("write_snapshots"):
        files.extend(tr.write_snapshots(d / "snapshots"))
    if "potential_prime" in cfg:
        Vp = _potential(cfg["potential_prime"], "potential_prime")
        trp = integrate(rho0, Vp, solver)
        files.append(trp.write_csv(d / "diagnostics_prime.csv"))
        files.append(write_json(d / "potential_prime.json", {"tabulated": eval_potential(Vp, grid).values.tolist()}))
        params = BoundParams.from_pair(
            V, Vp, rho0, c=float(cfg.get("c", 0.5)), lambda_gibbs=cfg.get("lambda_gibbs"),
            s_tar_mode=StarMode(cfg.get("s_tar_mode", "EXACT")),
        )
        reports = pair_reports(
            tr.times, tr.snapshots, trp.snapshots,
            cfg.get("renyi_alphas", DEFAULT_ALPHAS), cfg.get("eps_list", DEFAULT_EPS),
        )
        cols: dict = {}
        for rep in reports:
            for k, v in rep.row().items():
                cols.setdefault(k, []).append(v)
        for kind in EnvelopeKind:
            cols[kind.value.lower() + "_bound"] = envelope_series(tr.times, params, kind).values
        files.append(write_columns(d / "pair.csv", cols))
    return files


def cmd_bounds(cfg: dict, outdir: Path) -> list[Path]:
    _check_keys(cfg, SOLVE_KEYS, "bounds")
    for key in ("potential", "potential_prime"):
        if key not in cfg:
            raise ConfigurationError(f"bounds needs a '{key}' entry")
    grid = build_grid(cfg.get("grid_n", 512))
    V = _potential(cfg["potential"], "potential")
    Vp = _potential(cfg["potential_prime"], "potential_prime")
    rho0 = InitSpec.from_json(cfg.get("init")).build(grid)
    params = BoundParams.from_pair(
        V, Vp, rho0, c=float(cfg.get("c", 0.5)), lambda_gibbs=cfg.get("lambda_gibbs"),
        s_tar_mode=StarMode(cfg.get("s_tar_mode", "EXACT")),
    )
    t_final = float(cfg.get("t_final", 8.0))
    record_dt = float(cfg.get("record_dt", 0.05))
    n = max(1, int(np.ceil(t_final / record_dt - 1e-9)))
    times = np.linspace(0.0, t_final, n + 1)
    cols = {"t": times}
    for kind in EnvelopeKind:
        cols[kind.value.lower() + "_bound"] = envelope_series(times, params, kind).values
    d = outdir / "bounds"
    info = {
        "delta_pot": params.delta_pot, "delta_osc": params.delta_osc,
        "delta_gradpot": params.delta_gradpot, "r0": params.r0, "r0_prime": params.r0_prime,
        "b": params.b, "s_tar": params.s_tar, "s_tar_mode": params.s_tar_mode.value,
        "s_tar_exact": params.s_tar_exact, "lambda_gibbs": params.lambda_gibbs,
        "c": params.c, "kappa": params.kappa,
    }
    return [write_columns(d / "bounds.csv", cols), write_json(d / "params.json", info)]


def _dataset(obj, label: str) -> TorusDataset:
    if isinstance(obj, str):
        return TorusDataset.read_csv(obj, label)
    if isinstance(obj, list):
        return TorusDataset(np.array(obj, dtype=float), label)
    raise ConfigurationError(f"{label} must be a list of radians or a CSV path")


def cmd_certify(cfg: dict, outdir: Path) -> list[Path]:
    _check_keys(cfg, CERTIFY_KEYS, "certify")
    if "dataset" not in cfg:
        raise ConfigurationError("certify needs a 'dataset' entry")
    D = _dataset(cfg["dataset"], "D")
    if "dataset_prime" in cfg:
        Dp = _dataset(cfg["dataset_prime"], "D'")
        if Dp.n != D.n or np.count_nonzero(Dp.observations != D.observations) > 1:
            raise ConfigurationError("dataset_prime must differ from dataset in at most one record")
    else:
        Dp = neighboring(D, int(cfg.get("neighbor_index", 0)), float(cfg.get("neighbor_value", -2.4)), "D'")
    exp_keys = {k: v for k, v in cfg.items() if k not in ("dataset", "dataset_prime")}
    config = experiment_config(ExpId.EXP3, exp_keys)
    grid = build_grid(config.grid_n)
    mech = ExpMechSpec(config.beta)
    report = certify_pair(
        mech_potential(D, mech, grid), mech_potential(Dp, mech, grid), mech_loss(D, grid), config, grid,
        paper_values=False,
    )
    return report.write(outdir, name="certify")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shkflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ["solve", "bounds", "certify", *EXPERIMENTS, "all"]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--outdir", default="out")
        p.add_argument("--grid-n", type=int, dest="grid_n")
        p.add_argument("--dt", type=float)
        p.add_argument("--t-final", type=float, dest="t_final")
        p.add_argument("--seed", type=int)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", dest="sets")
    return parser


def _overrides(args) -> dict:
    out = {"grid_n": args.grid_n, "dt": args.dt, "t_final": args.t_final, "seed": args.seed}
    for item in args.sets:
        if "=" not in item:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _parse_value(v)
    return out


def dispatch(args) -> list[Path]:
    outdir = Path(args.outdir)
    overrides = _overrides(args)
    if args.subcommand in ("solve", "bounds", "certify"):
        cfg = load_config(args.config, overrides)
        return {"solve": cmd_solve, "bounds": cmd_bounds, "certify": cmd_certify}[args.subcommand](cfg, outdir)
    cfg = load_config(args.config, overrides)
    if args.subcommand == "all":
        if "t_final" in cfg:
            raise ConfigurationError("t_final cannot be shared across all experiments; run them one at a time")
        configs = [experiment_config(e, cfg) for e in ExpId]
    else:
        configs = [experiment_config(EXPERIMENTS[args.subcommand], cfg)]
    files: list[Path] = []
    for c in configs:
        print(f"running {c.id.value}", file=sys.stderr)
        files.extend(run_experiment(c).write(outdir))
    return files


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        files = dispatch(args)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except (ShkError, ValueError, TypeError, KeyError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {msg}", file=sys.stderr)
        return 1
    summary = {
        "subcommand": args.subcommand,
        "files": [str(f) for f in files],
        "elapsed_s": round(time.perf_counter() - start, 3),
    }
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
