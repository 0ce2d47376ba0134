"""Finite-difference oracle with the deltas smeared into narrow square wells.

The dimensionless operator ``-d2/du2 - a [bump(u+1) + bump(u-1)]`` is
discretized with the three-point Laplacian on a Dirichlet box
``[-W, W]``.  Each bump is a top hat of height ``1/w`` and width ``w``; a grid
node receives the well depth weighted by how much of its cell
``[u - h/2, u + h/2]`` the well covers, so the discrete well area is exactly
``-a``.  Eigenvalues come from Sturm-sequence bisection on the tridiagonal
matrix; no general eigensolver is involved.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .core import InvalidParametersError, ResolutionError

__all__ = [
    "GridHamiltonian",
    "bound_energies",
    "build_hamiltonian",
    "default_hamiltonian",
    "eigenvalues_below",
    "lowest_eigenvalues",
]

DEFAULT_DOMAIN_HALF_WIDTH = 20.0
DEFAULT_WELL_WIDTH = 0.01
# grid points per well width at the default resolution (h = w / 4)
DEFAULT_POINTS_PER_WELL = 4


@dataclass(frozen=True, eq=False)
class GridHamiltonian:
    a: float
    domain_half_width: float
    n_points: int
    well_width: float
    diag: np.ndarray
    offdiag: float

    @property
    def h(self) -> float:
        return 2.0 * self.domain_half_width / (self.n_points + 1)

    @property
    def grid(self) -> np.ndarray:
        return -self.domain_half_width + self.h * np.arange(1, self.n_points + 1)

    @property
    def potential(self) -> np.ndarray:
        return self.diag - 2.0 / self.h**2

    def gershgorin(self) -> tuple[float, float]:
        r = 2.0 * abs(self.offdiag)
        return float(self.diag.min()) - r, float(self.diag.max()) + r


def _cell_overlap(u: np.ndarray, h: float, left: float, right: float) -> np.ndarray:
    return np.clip(np.minimum(u + 0.5 * h, right) - np.maximum(u - 0.5 * h, left), 0.0, None)


def build_hamiltonian(a: float, domain_half_width: float, n_points: int, well_width: float) -> GridHamiltonian:
    if not all(math.isfinite(v) for v in (a, domain_half_width, well_width)):
        raise InvalidParametersError("a, domain_half_width and well_width must be finite")
    if n_points < 3:
        raise InvalidParametersError("n_points must be >= 3")
    if well_width <= 0 or domain_half_width <= 1.0 + well_width:
        raise InvalidParametersError("need well_width > 0 and the wells inside the box")
    h = 2.0 * domain_half_width / (n_points + 1)
    if well_width < 2.0 * h:
        raise ResolutionError(f"well width {well_width} spans fewer than two cells (h = {h})")
    u = -domain_half_width + h * np.arange(1, n_points + 1)
    half = 0.5 * well_width
    cover = _cell_overlap(u, h, -1.0 - half, -1.0 + half) + _cell_overlap(u, h, 1.0 - half, 1.0 + half)
    potential = -(a / well_width) * cover / h
    return GridHamiltonian(a, domain_half_width, n_points, well_width, 2.0 / h**2 + potential, -1.0 / h**2)


def default_hamiltonian(
    a: float,
    refine: int = 1,
    domain_half_width: float = DEFAULT_DOMAIN_HALF_WIDTH,
    well_width: float = DEFAULT_WELL_WIDTH,
) -> GridHamiltonian:
    """Grid with ``h = well_width / (4 refine)``.

    ``n_points`` is chosen so that ``2 W / h`` cells fit exactly; for integer
    ``W`` and the default width the well edges then sit on grid nodes at
    every refinement, which keeps the error expansion regular in ``h``.
    """
    h = well_width / (DEFAULT_POINTS_PER_WELL * refine)
    n = int(round(2.0 * domain_half_width / h)) - 1
    return build_hamiltonian(a, domain_half_width, n, well_width)


def eigenvalues_below(H: GridHamiltonian, threshold: float) -> int:
    """Count eigenvalues strictly below ``threshold`` (Sturm sequence).

    Counts negative pivots of the LDL^T factorization of ``H - threshold``;
    by Sylvester's law of inertia that is the number of eigenvalues below it.
    """
    off2 = H.offdiag * H.offdiag
    pivmin = sys.float_info.min * max(1.0, off2)
    count = 0
    q = 1.0
    first = True
    for d in (H.diag - threshold).tolist():
        q = d if first else d - off2 / q
        first = False
        if abs(q) < pivmin:
            q = math.copysign(pivmin, q) if q else pivmin
        if q < 0:
            count += 1
    return count


def lowest_eigenvalues(H: GridHamiltonian, k: int, tol: float = 1e-12) -> list[float]:
    """The ``k`` smallest eigenvalues, ascending, each bisected to ``tol``."""
    if not 1 <= k <= H.n_points:
        raise InvalidParametersError(f"k must be in [1, {H.n_points}]")
    lower, upper = H.gershgorin()
    values = []
    for j in range(k):
        lo = values[-1] if values else lower
        hi = upper
        # invariant: count(lo) <= j < count(hi)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if eigenvalues_below(H, mid) > j:
                hi = mid
            else:
                lo = mid
        values.append(0.5 * (lo + hi))
    return values


def bound_energies(H: GridHamiltonian, tol: float = 1e-12) -> list[float]:
    """All negative eigenvalues of ``H``, ground state first."""
    n = eigenvalues_below(H, 0.0)
    return lowest_eigenvalues(H, n, tol) if n else []
