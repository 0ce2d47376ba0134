"""Bound states of an arbitrary array of Dirac deltas by transfer matrices.

Between deltas a bound state with decay constant ``kappa`` (energy
``-kappa**2``) is ``A exp(kappa x) + B exp(-kappa x)``.  A delta of strength
``s`` at ``x0`` keeps the function continuous and kicks the derivative by
``-s phi(x0)``; in these units the symmetric double delta of coupling ``a``
is the array ``[(-1, a), (+1, a)]``.

Levels are isolated with a node count of the solution that decays at
``-inf`` (oscillation theorem: the number of nodes equals the number of
levels below ``-kappa**2``), then refined by bisection on the coefficient
of the growing exponential on the far right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import DEFAULT_CONFIG, InvalidParametersError, SolverConfig, bisect

__all__ = [
    "DeltaArray",
    "SpectrumLevel",
    "bound_state_residual",
    "chain_coefficients",
    "delta_transfer",
    "evaluate_chain",
    "node_count",
    "solve_spectrum",
]

# kappa upper bound: safety factor on the merged-delta limit sum(strengths).
KAPPA_MAX_FACTOR = 1.5
# Levels shallower than this fraction of sum(strengths) are not resolved.
KAPPA_MIN_RELATIVE = 1e-10


@dataclass(frozen=True)
class DeltaArray:
    """Ordered ``(position, strength)`` pairs; positive strength is attractive."""

    deltas: tuple[tuple[float, float], ...]

    def __init__(self, deltas: Sequence[Sequence[float]]):
        pairs = tuple((float(x), float(s)) for x, s in deltas)
        if not pairs:
            raise InvalidParametersError("a DeltaArray needs at least one delta")
        if not all(math.isfinite(x) and math.isfinite(s) for x, s in pairs):
            raise InvalidParametersError("positions and strengths must be finite")
        if any(b[0] <= a[0] for a, b in zip(pairs, pairs[1:])):
            raise InvalidParametersError("positions must be strictly increasing")
        object.__setattr__(self, "deltas", pairs)

    @classmethod
    def double_delta(cls, a: float) -> "DeltaArray":
        return cls([(-1.0, a), (1.0, a)])

    @classmethod
    def from_file(cls, path) -> "DeltaArray":
        """Read ``position strength`` pairs, one per line; ``#`` starts a comment."""
        data = np.loadtxt(path, comments="#", ndmin=2, dtype=float)
        if data.shape[1] != 2:
            raise InvalidParametersError(f"{path}: expected two columns, got {data.shape[1]}")
        return cls(data.tolist())

    @property
    def positions(self) -> list[float]:
        return [x for x, _ in self.deltas]

    @property
    def strengths(self) -> list[float]:
        return [s for _, s in self.deltas]

    def shifted(self, offset: float) -> "DeltaArray":
        return DeltaArray([(x + offset, s) for x, s in self.deltas])

    def __len__(self):
        return len(self.deltas)


class SpectrumLevel(NamedTuple):
    kappa: float
    energy_dimensionless: float


def delta_transfer(kappa: float, position: float, strength: float) -> np.ndarray:
    """2x2 map of ``(A, B)`` across one delta (unit determinant)."""
    beta = strength / (2.0 * kappa)
    g = math.exp(2.0 * kappa * position)
    return np.array([[1.0 - beta, -beta / g], [beta * g, 1.0 + beta]])


def _sweep_exponential(kappa: float, deltas) -> tuple[float, int]:
    # Local amplitudes P = A exp(kappa x), Q = B exp(-kappa x), rescaled by
    # exp(-kappa d) after each gap.  Keeps exp(-2 kappa d) couplings that are
    # far below one ulp of P, which near-degenerate pairs depend on.
    p, q = 1.0, 0.0
    nodes = 0
    last = len(deltas) - 1
    for i, (x, s) in enumerate(deltas):
        kick = s / (2.0 * kappa) * (p + q)
        p, q = p - kick, q + kick
        here = p + q
        if i < last:
            q *= math.exp(-2.0 * kappa * (deltas[i + 1][0] - x))
            there = p + q
        else:
            there = p
        if here * there < 0:
            nodes += 1
    return p, nodes


def _sweep_cauchy(kappa: float, deltas) -> tuple[float, int]:
    # (phi, phi') with the same exp(-kappa d) rescaling; stays accurate when
    # s / kappa is huge and P, Q above would cancel.
    phi, dphi = 1.0, kappa
    nodes = 0
    last = len(deltas) - 1
    for i, (x, s) in enumerate(deltas):
        dphi -= s * phi
        if i < last:
            t = -2.0 * kappa * (deltas[i + 1][0] - x)
            c = 0.5 * (1.0 + math.exp(t))
            sk = -math.expm1(t) / (2.0 * kappa)
            new_phi = c * phi + sk * dphi
            dphi = kappa * kappa * sk * phi + c * dphi
        else:
            new_phi = phi + dphi / kappa
        if phi * new_phi < 0:
            nodes += 1
        phi = new_phi
    return 0.5 * phi, nodes


def _sweep(kappa: float, arr: DeltaArray) -> tuple[float, int]:
    """Propagate the solution that decays at ``-inf``; return ``(A', nodes)``.

    ``A'`` is the coefficient of ``exp(kappa x)`` right of the array for
    ``(A, B) = (1, 0)`` on the left; the rescaling makes it exact without
    overflow.  ``A e^t + B e^-t`` has at most one zero on an interval, so a
    node is a sign change between the values at the ends of each gap (and of
    the right tail).
    """
    deltas = arr.deltas
    span = deltas[-1][0] - deltas[0][0]
    if kappa * span >= 1.0:
        return _sweep_exponential(kappa, deltas)
    return _sweep_cauchy(kappa, deltas)


def bound_state_residual(kappa: float, arr: DeltaArray) -> float:
    """Coefficient of ``exp(kappa x)`` right of the array; zero at bound states."""
    if not kappa > 0:
        raise InvalidParametersError(f"kappa must be > 0, got {kappa!r}")
    return _sweep(kappa, arr)[0]


def node_count(kappa: float, arr: DeltaArray) -> int:
    """Number of bound states with energy strictly below ``-kappa**2``."""
    if not kappa > 0:
        raise InvalidParametersError(f"kappa must be > 0, got {kappa!r}")
    return _sweep(kappa, arr)[1]


def solve_spectrum(arr: DeltaArray, cfg: SolverConfig = DEFAULT_CONFIG) -> list[SpectrumLevel]:
    """All bound states, ground state first.

    Levels with ``kappa`` below ``max(cfg.abs_tolerance, 1e-10 * sum(s+))``
    sit at the continuum edge and are not reported.
    """
    total = sum(max(s, 0.0) for s in arr.strengths)
    if total == 0.0:
        return []
    lo = max(cfg.abs_tolerance, KAPPA_MIN_RELATIVE * total)
    hi = KAPPA_MAX_FACTOR * total
    while node_count(hi, arr) > 0:
        hi *= 2.0

    def f(k):
        return bound_state_residual(k, arr)

    kappas = []
    pending = [(lo, hi, node_count(lo, arr), 0)]
    while pending:
        lo, hi, n_lo, n_hi = pending.pop()
        inside = n_lo - n_hi
        if inside == 0:
            continue
        if inside == 1:
            kappas.append(bisect(f, lo, hi, cfg.abs_tolerance, cfg.max_iterations))
            continue
        mid = math.sqrt(lo * hi) if hi > 4.0 * lo else 0.5 * (lo + hi)
        if hi - lo < cfg.abs_tolerance or not lo < mid < hi:
            # unresolvable cluster: report it with its multiplicity
            kappas.extend([0.5 * (lo + hi)] * inside)
            continue
        n_mid = node_count(mid, arr)
        pending.append((lo, mid, n_lo, n_mid))
        pending.append((mid, hi, n_mid, n_hi))
    kappas.sort(reverse=True)
    return [SpectrumLevel(k, -k * k) for k in kappas]


def chain_coefficients(kappa: float, arr: DeltaArray) -> list[tuple[float, float]]:
    """Global ``(A, B)`` in each of the ``N + 1`` regions, starting from ``(1, 0)``.

    Uses unscaled exponentials; fine for moderate ``kappa * |x|``.
    """
    coeffs = [(1.0, 0.0)]
    ab = np.array([1.0, 0.0])
    for x, s in arr.deltas:
        ab = delta_transfer(kappa, x, s) @ ab
        coeffs.append((float(ab[0]), float(ab[1])))
    return coeffs


def evaluate_chain(kappa: float, arr: DeltaArray, x):
    """Evaluate the (unnormalized) left-decaying solution at ``x``."""
    x = np.asarray(x, dtype=float)
    coeffs = np.array(chain_coefficients(kappa, arr))
    region = np.searchsorted(np.array(arr.positions), x, side="right")
    a, b = coeffs[region, 0], coeffs[region, 1]
    val = a * np.exp(kappa * x) + b * np.exp(-kappa * x)
    return val[()] if val.ndim == 0 else val
