"""Dimensionless problem definitions and shared solver plumbing.

All spectral work is done with the coupling ``a = 2 m alpha L / hbar**2`` and
the decay parameter ``xi`` (bound states have ``k = +/- i xi / L``).  Physical
units only appear in :class:`PhysicalParams` and the two conversion helpers.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "BoundState",
    "DegenerateCouplingError",
    "DimensionlessWell",
    "InvalidParametersError",
    "NoBoundStateError",
    "Parity",
    "PhysicalParams",
    "ResolutionError",
    "SolverConfig",
    "SolverError",
    "bisect",
    "dimensionless_coupling",
    "physical_energy",
]


class InvalidParametersError(ValueError):
    pass


class DegenerateCouplingError(ValueError):
    """Raised for ``a == 0``: a free particle has no quantization condition."""


class NoBoundStateError(ValueError):
    pass


class ResolutionError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, delta strength, half separation and hbar in any consistent units.

    ``alpha > 0`` is attractive: the potential is ``-alpha [d(x+L) + d(x-L)]``.
    """

    mass: float
    alpha: float
    half_separation_L: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "alpha", "half_separation_L", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParametersError(f"{name} must be finite")
        for name in ("mass", "half_separation_L", "hbar"):
            if getattr(self, name) <= 0:
                raise InvalidParametersError(f"{name} must be > 0")


@dataclass(frozen=True)
class DimensionlessWell:
    a: float

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise InvalidParametersError("coupling a must be finite")

    @property
    def attractive(self) -> bool:
        return self.a > 0


@dataclass(frozen=True)
class BoundState:
    parity: Parity
    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi > 0):
            raise InvalidParametersError(f"xi must be finite and > 0, got {self.xi!r}")

    @property
    def energy_dimensionless(self) -> float:
        """Energy in units of ``hbar**2 / (2 m L**2)``."""
        return -self.xi**2


@dataclass(frozen=True)
class SolverConfig:
    abs_tolerance: float = 1e-13
    max_iterations: int = 200
    bracket_scan_points: int = 64

    def __post_init__(self):
        if not self.abs_tolerance >= 16 * sys.float_info.epsilon:
            raise InvalidParametersError("abs_tolerance must be >= 16 * machine epsilon")
        if self.max_iterations < 1 or self.bracket_scan_points < 2:
            raise InvalidParametersError("max_iterations >= 1 and bracket_scan_points >= 2 required")


DEFAULT_CONFIG = SolverConfig()


def dimensionless_coupling(params: PhysicalParams) -> DimensionlessWell:
    a = 2.0 * params.mass * params.alpha * params.half_separation_L / params.hbar**2
    if not math.isfinite(a):
        raise InvalidParametersError("coupling overflowed")
    return DimensionlessWell(a)


def physical_energy(state: BoundState, params: PhysicalParams) -> float:
    """E = -hbar**2 xi**2 / (2 m L**2)."""
    return -(params.hbar**2) * state.xi**2 / (2.0 * params.mass * params.half_separation_L**2)


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    max_iterations: int = 200,
    f_lo: float | None = None,
    f_hi: float | None = None,
) -> float:
    """Bisect a sign change of ``f`` on ``[lo, hi]`` down to width ``tol``.

    Stops early once the midpoint is no longer representable between the
    endpoints, so a tolerance below the local ulp is harmless.
    """
    f_lo = f(lo) if f_lo is None else f_lo
    f_hi = f(hi) if f_hi is None else f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo < 0) == (f_hi < 0):
        raise SolverError(f"no sign change on [{lo!r}, {hi!r}]")
    lo_negative = f_lo < 0
    for _ in range(max_iterations):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol or mid <= lo or mid >= hi:
            return mid
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == lo_negative:
            lo = mid
        else:
            hi = mid
    if hi - lo < tol:
        return 0.5 * (lo + hi)
    raise SolverError(f"bisection did not converge in {max_iterations} iterations")
