"""Bound states of one-dimensional symmetric Dirac-delta potentials."""

__version__ = "0.1.0"

from .core import (
    BoundState,
    DimensionlessWell,
    Parity,
    PhysicalParams,
    SolverConfig,
    dimensionless_coupling,
    physical_energy,
)
from .eigenfunction import PiecewiseEigenfunction, eigenfunction
from .multidelta import DeltaArray, solve_spectrum
from .quantization import bound_states, count_bound_states, solve_even, solve_odd

__all__ = [
    "BoundState",
    "DeltaArray",
    "DimensionlessWell",
    "Parity",
    "PhysicalParams",
    "PiecewiseEigenfunction",
    "SolverConfig",
    "bound_states",
    "count_bound_states",
    "dimensionless_coupling",
    "eigenfunction",
    "physical_energy",
    "solve_even",
    "solve_odd",
    "solve_spectrum",
]
