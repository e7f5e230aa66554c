"""Exact solutions of the relativistic heat equation ``d_t psi = (1 - sqrt(1 - d_x^2)) psi``."""

__version__ = "0.1.0"

from .conditions import InitialCondition, SolutionField
from .errors import (
    AccuracyError,
    DegreeError,
    DomainError,
    GridError,
    MomentUndefinedError,
    RelHeatError,
    SeriesDivergenceError,
    UnsupportedInitialCondition,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, subordinate
from .solve import solve_field
from .solver_nr import gw_transform
from .solver_r import closed_form, psi1, psi2, psi3, psi4, psi5, solve_series, solve_subordination
from .spectral import SpectralGrid, evolve, symbol_r

__all__ = [
    "__version__",
    "InitialCondition",
    "SolutionField",
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "SpectralGrid",
    "subordinate",
    "gw_transform",
    "solve_subordination",
    "solve_series",
    "solve_field",
    "closed_form",
    "evolve",
    "symbol_r",
    "psi1",
    "psi2",
    "psi3",
    "psi4",
    "psi5",
    "RelHeatError",
    "DomainError",
    "DegreeError",
    "AccuracyError",
    "SeriesDivergenceError",
    "UnsupportedInitialCondition",
    "MomentUndefinedError",
    "GridError",
]
