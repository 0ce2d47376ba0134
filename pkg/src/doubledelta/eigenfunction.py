"""Closed-form, normalized bound-state eigenfunctions of the double delta.

Coordinates are ``u = x / L`` with the deltas at ``u = +/-1``::

    even:  C cosh(xi u)                       |u| <= 1
           C cosh(xi) exp(-xi (|u| - 1))      |u| >= 1
    odd:   D sinh(xi u)                       |u| <= 1
           D sinh(xi) sign(u) exp(-xi (|u| - 1))

``C`` and ``D`` are positive and give unit L2 norm over the real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import BoundState, InvalidParametersError, Parity

__all__ = [
    "DerivativeJump",
    "PiecewiseEigenfunction",
    "derivative_jump",
    "eigenfunction",
    "evaluate",
    "normalization_constant",
    "sample_grid",
]


@dataclass(frozen=True)
class PiecewiseEigenfunction:
    parity: Parity
    xi: float
    norm_const: float

    def __call__(self, u):
        return evaluate(self, u)

    def inner(self, u):
        """Interior branch continued to all ``u``."""
        u = np.asarray(u, dtype=float)
        if self.parity is Parity.EVEN:
            return self.norm_const * np.cosh(self.xi * u)
        return self.norm_const * np.sinh(self.xi * u)

    def outer(self, u):
        """Exterior (decaying) branch continued to all ``u``."""
        u = np.asarray(u, dtype=float)
        tail = np.exp(-self.xi * (np.abs(u) - 1.0))
        if self.parity is Parity.EVEN:
            return self.norm_const * math.cosh(self.xi) * tail
        return self.norm_const * math.sinh(self.xi) * np.sign(u) * tail


class DerivativeJump(NamedTuple):
    left_deriv: float
    right_deriv: float
    residual: float


def _sinhc_minus_one(x: float) -> float:
    """sinh(x)/x - 1 without cancellation for small x."""
    if abs(x) < 0.1:
        x2 = x * x
        return x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)))
    return math.sinh(x) / x - 1.0


def normalization_constant(parity: Parity, xi: float) -> float:
    """Positive prefactor giving unit L2 norm with L = 1.

    The norm integral is evaluated as ``exp(2 xi) * S`` with ``S`` bounded, so
    the prefactor ``exp(-xi) / sqrt(S)`` stays finite for large ``xi``.
    """
    if not (xi > 0 and math.isfinite(xi)):
        raise InvalidParametersError(f"xi must be finite and > 0, got {xi!r}")
    e2 = math.exp(-2.0 * xi)
    # (1 - exp(-4 xi)) / (4 xi) = exp(-2 xi) sinh(2 xi) / (2 xi)
    shc = -math.expm1(-4.0 * xi) / (4.0 * xi)
    if Parity(parity) is Parity.EVEN:
        # interior 1 + sinh(2xi)/(2xi), tails cosh(xi)^2 / xi
        scaled = e2 + shc + (1.0 + e2) ** 2 / (4.0 * xi)
    else:
        # interior sinh(2xi)/(2xi) - 1, tails sinh(xi)^2 / xi
        if xi < 1.0:
            interior = e2 * _sinhc_minus_one(2.0 * xi)
        else:
            interior = shc - e2
        scaled = interior + math.expm1(-2.0 * xi) ** 2 / (4.0 * xi)
    return math.exp(-xi) / math.sqrt(scaled)


def eigenfunction(state: BoundState) -> PiecewiseEigenfunction:
    return PiecewiseEigenfunction(
        state.parity, state.xi, normalization_constant(state.parity, state.xi)
    )


def evaluate(fn: PiecewiseEigenfunction, u):
    """Evaluate ``fn`` at ``u`` (scalar or array).

    Works on ``|u|`` and restores the sign afterwards so parity holds bit for
    bit.  ``|u| == 1`` takes the interior branch.
    """
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    xi, c = fn.xi, fn.norm_const
    inside = au <= 1.0
    with np.errstate(over="ignore"):
        if fn.parity is Parity.EVEN:
            val = np.where(inside, c * np.cosh(xi * au), c * math.cosh(xi) * np.exp(-xi * (au - 1.0)))
        else:
            mag = np.where(inside, c * np.sinh(xi * au), c * math.sinh(xi) * np.exp(-xi * (au - 1.0)))
            val = np.where(u < 0, -mag, mag)
    return val[()] if val.ndim == 0 else val


def derivative_jump(fn: PiecewiseEigenfunction, a: float) -> DerivativeJump:
    """One-sided derivatives at u = 1 and the jump-condition residual.

    The residual is ``phi'(1+) - phi'(1-) + a phi(1)``; it vanishes only when
    ``fn.xi`` is a root of the matching quantization condition, which the
    closed forms never assumed.
    """
    xi, c = fn.xi, fn.norm_const
    ch, sh = math.cosh(xi), math.sinh(xi)
    if fn.parity is Parity.EVEN:
        value, left, right = c * ch, c * xi * sh, -c * xi * ch
    else:
        value, left, right = c * sh, c * xi * ch, -c * xi * sh
    return DerivativeJump(left, right, (right - left) + a * value)


def sample_grid(fn: PiecewiseEigenfunction, u_min: float, u_max: float, n: int):
    """Return ``(u, phi)`` on ``n`` evenly spaced points including both ends."""
    if not (math.isfinite(u_min) and math.isfinite(u_max) and u_min < u_max):
        raise ValueError(f"need finite u_min < u_max, got [{u_min!r}, {u_max!r}]")
    if n < 2:
        raise ValueError("n must be >= 2")
    u = np.linspace(u_min, u_max, n)
    return u, evaluate(fn, u)
