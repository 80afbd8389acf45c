"""Pseudo-spectral toolkit for the finite-depth internal-wave equation
family: dispersion symbols, solitary waves, conserved-quantity monitoring,
weighted decay functionals, and config-driven experiments."""

__version__ = "0.1.0"

from .integrator import (
    EquationSpec,
    NumericalBlowUpError,
    SolverConfig,
    bo_dispersion,
    custom_dispersion,
    evolve,
    ilw_dispersion,
    kdv_dispersion,
    step,
)
from .solutions import (
    RegularityDatum,
    SolitonProfile,
    SolitonResolutionError,
    gaussian,
    make_regularity_datum,
    solve_soliton,
)
from .spectral import Field, Grid, Nonlinearity, classical_quadratic
from .weights import Weight, WeightSchedule

__all__ = [
    "EquationSpec", "Field", "Grid", "Nonlinearity", "NumericalBlowUpError",
    "RegularityDatum", "SolitonProfile", "SolitonResolutionError",
    "SolverConfig", "Weight", "WeightSchedule", "bo_dispersion",
    "classical_quadratic", "custom_dispersion", "evolve", "gaussian",
    "ilw_dispersion", "kdv_dispersion", "make_regularity_datum",
    "solve_soliton", "step",
]
