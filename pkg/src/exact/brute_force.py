"""
Brute-force bound states: scan det Φ(E) on a dense grid for sign
changes and refine each bracket. Independent of branch tracking, so it
serves as a cross-check for find_bound_states.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..models import ModelSpec
from ..spectra import eigvals_sym, search_window
from ..utils.errors import DomainError
from ..utils.numerics import find_root

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4000
DIP_RATIO = 0.5


def scaled_det(model: ModelSpec, E: float) -> float:
    """sign(det Φ)·|det Φ|^{1/N} from the eigenvalues"""
    w = eigvals_sym(model.principal.evaluate(E))
    if np.any(w == 0.0):
        return 0.0
    sign = float(np.prod(np.sign(w)))
    return sign * float(np.exp(np.mean(np.log(np.abs(w)))))


def brute_force_detroot(model: ModelSpec, window: Optional[Tuple[float, float]] = None,
                        grid_n: int = DEFAULT_GRID) -> List[float]:
    """
    Every sign change of det Φ on an even grid over ``window``, refined by
    Brent's method.

    Logs a warning when two roots fall within two grid steps of each other
    or when |det| dips without a sign change (a root pair may be hiding
    inside one cell).
    """
    if grid_n < 3:
        raise DomainError(f"grid_n must be at least 3, got {grid_n}")
    lo, hi = window if window is not None else search_window(model)
    if not lo < hi:
        raise DomainError(f"empty window [{lo!r}, {hi!r}]")
    grid = np.linspace(lo, hi, grid_n)
    step = grid[1] - grid[0]
    values = np.array([scaled_det(model, E) for E in grid])

    roots = []
    for p in range(grid_n - 1):
        if values[p] == 0.0:
            roots.append(float(grid[p]))
        elif values[p] * values[p + 1] < 0.0:
            roots.append(find_root(lambda E: scaled_det(model, E), grid[p], grid[p + 1],
                                   what="det root"))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))

    magnitude = np.abs(values)
    for p in range(1, grid_n - 1):
        dip = magnitude[p] < DIP_RATIO * min(magnitude[p - 1], magnitude[p + 1])
        if dip and values[p - 1] * values[p + 1] > 0.0 and values[p] * values[p - 1] > 0.0:
            logger.warning(f"⚠️ grid too coarse: |det Φ| dips near E = {grid[p]:.6g} without a sign change")

    for r1, r2 in zip(roots, roots[1:]):
        if r2 - r1 < 2.0 * step:
            logger.warning(f"⚠️ grid too coarse: roots {r1:.12g} and {r2:.12g} "
                           f"are closer than two grid steps")
    return sorted(roots)
