"""Quantization conditions of the symmetric double delta and their roots.

With ``u = x / L`` the even states obey ``exp(-2 xi) = 2 xi / a - 1`` and the
odd states ``exp(-2 xi) = 1 - 2 xi / a``.  Both are solved by bisection on
brackets that are guaranteed to contain exactly one positive root.
"""

from __future__ import annotations

import math

from .core import (
    DEFAULT_CONFIG,
    BoundState,
    DegenerateCouplingError,
    InvalidParametersError,
    NoBoundStateError,
    Parity,
    SolverConfig,
    SolverError,
    bisect,
)

__all__ = [
    "bound_states",
    "count_bound_states",
    "phipil_residual",
    "residual",
    "solve_even",
    "solve_odd",
]

# The odd lower-bracket scan walks down this many decades from a/2.
_SCAN_DECADES = 12.0


def _check_finite(a: float) -> None:
    if not math.isfinite(a):
        raise InvalidParametersError(f"coupling a must be finite, got {a!r}")


def residual(parity: Parity, a: float, xi: float) -> float:
    """Return ``exp(-2 xi) - (2 xi/a - 1)`` (even) or ``exp(-2 xi) - (1 - 2 xi/a)`` (odd).

    At ``xi = 0`` the values are exactly 2 (even) and 0 (odd).  For small
    ``xi`` the odd residual is a difference of nearly equal numbers and goes
    through ``expm1``; elsewhere ``1 - 2 xi/a`` is formed first so that it is
    exactly zero at ``xi = a/2`` and the residual there is ``exp(-a)``.
    """
    if a == 0:
        raise DegenerateCouplingError("a = 0 is a free particle; no quantization condition")
    if not (xi >= 0 and math.isfinite(xi)):
        raise InvalidParametersError(f"xi must be finite and >= 0, got {xi!r}")
    _check_finite(a)
    if Parity(parity) is Parity.EVEN:
        return math.exp(-2.0 * xi) + (1.0 - 2.0 * xi / a)
    if xi < 0.5:
        return math.expm1(-2.0 * xi) + 2.0 * xi / a
    return math.exp(-2.0 * xi) - (1.0 - 2.0 * xi / a)


def count_bound_states(a: float) -> tuple[int, int]:
    """Number of (even, odd) bound states for coupling ``a``.

    One even state for every attractive coupling; the odd one needs ``a > 1``
    because at ``a = 1`` the odd line is tangent to ``exp(-2 xi)`` at ``xi = 0``.
    """
    _check_finite(a)
    if a <= 0:
        return (0, 0)
    return (1, 1 if a > 1 else 0)


def solve_even(a: float, cfg: SolverConfig = DEFAULT_CONFIG) -> BoundState:
    _check_finite(a)
    if a <= 0:
        raise NoBoundStateError(f"no bound state for a = {a!r} <= 0")
    # Bracket lemma: since 0 < exp(-2 xi) <= 1, a root needs 0 < 2 xi/a - 1 <= 1,
    # i.e. a/2 < xi <= a.  f(a/2) = exp(-a) > 0 and f(a) = exp(-2a) - 1 < 0, and
    # f' = -2 exp(-2 xi) - 2/a < 0, so the root in [a/2, a] is unique.
    def f(xi):
        return residual(Parity.EVEN, a, xi)

    xi = bisect(f, 0.5 * a, a, cfg.abs_tolerance, cfg.max_iterations)
    return BoundState(Parity.EVEN, xi)


def solve_odd(a: float, cfg: SolverConfig = DEFAULT_CONFIG) -> BoundState | None:
    """Odd bound state, or ``None`` when ``a <= 1``.

    ``g(xi) = exp(-2 xi) - 1 + 2 xi/a`` is convex with ``g(0) = 0`` and
    ``g'(0) = 2/a - 2 < 0`` for ``a > 1``, so it has exactly one positive root,
    below ``a/2`` where ``g = exp(-a) >= 0``.  The trivial root ``xi = 0`` is kept
    out by scanning a geometric grid downward from ``a/2`` for the first
    point with ``g < 0``.
    """
    _check_finite(a)
    if a <= 1:
        return None

    def g(xi):
        return residual(Parity.ODD, a, xi)

    n = cfg.bracket_scan_points
    ratio = 10.0 ** (-_SCAN_DECADES / (n - 1))
    hi = 0.5 * a
    g_hi = g(hi)
    for j in range(1, n):
        lo = 0.5 * a * ratio**j
        g_lo = g(lo)
        if g_lo < 0:
            xi = bisect(g, lo, hi, cfg.abs_tolerance, cfg.max_iterations, g_lo, g_hi)
            return BoundState(Parity.ODD, xi)
        hi, g_hi = lo, g_lo
    raise SolverError(f"odd-state bracket not found for a = {a!r} (root below scan range)")


def bound_states(a: float, cfg: SolverConfig = DEFAULT_CONFIG) -> list[BoundState]:
    """All bound states for coupling ``a``, ground state first."""
    if a <= 0:
        _check_finite(a)
        return []
    states = [solve_even(a, cfg)]
    odd = solve_odd(a, cfg)
    if odd is not None:
        states.append(odd)
    return states


def phipil_residual(phi0: float, dphi0: float, xi: float, a: float) -> float:
    """Boundary relation linking phi(0) and phi'(0) (units L = 1).

    Vanishes for ``(1, 0)`` exactly at even roots and for ``(0, 1)`` at odd
    roots.  ``exp(-xi) cosh(xi)`` is written as ``(1 + exp(-2 xi)) / 2`` to
    avoid overflow at large ``xi``.
    """
    if a == 0:
        raise DegenerateCouplingError("a = 0 is a free particle")
    e2 = math.exp(-2.0 * xi)
    ec = 0.5 * (1.0 + e2)
    es = -0.5 * math.expm1(-2.0 * xi)
    return phi0 * (1.0 - a / xi * ec) + dphi0 / xi * (1.0 - a / xi * es)
