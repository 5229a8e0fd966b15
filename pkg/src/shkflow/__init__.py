"""Finite-volume solver and stability certificates for birth-death Langevin flows on the circle."""

from .errors import (
    ConfigurationError,
    GridMismatchError,
    MassDriftError,
    PositivityError,
    ShkError,
    SolverError,
)
from .grid import GridField, PeriodicGrid, build_grid
from .potentials import PotentialSpec, eval_gradient, eval_potential, gibbs_target, sensitivity_report
from .flow import DensityField, Dynamics, Flux, SolverConfig, Trajectory, integrate

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DensityField",
    "Dynamics",
    "Flux",
    "GridField",
    "GridMismatchError",
    "MassDriftError",
    "PeriodicGrid",
    "PositivityError",
    "PotentialSpec",
    "ShkError",
    "SolverConfig",
    "SolverError",
    "Trajectory",
    "build_grid",
    "eval_gradient",
    "eval_potential",
    "gibbs_target",
    "integrate",
    "sensitivity_report",
]
