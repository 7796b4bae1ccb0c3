"""
Eigenvalue flows ω^k(E) of the principal matrix, matched across a grid
by eigenvector overlap, with Feynman–Hellmann slopes ⟨A^k, Φ′A^k⟩.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..models import ModelSpec
from ..utils.errors import DomainError
from .eigen import eig_sym
from .solver import search_window

logger = logging.getLogger(__name__)

OVERLAP_THRESHOLD = 0.9


@dataclass(frozen=True, eq=False)
class EigenFlow:
    """
    One continuity-matched eigenvalue branch sampled on an energy grid.

    ``violations`` counts grid points where either the Feynman–Hellmann slope
    or the finite-difference slope between neighbours is not negative.
    ``ambiguous`` lists grid indices where the best eigenvector overlap with
    the previous point fell below 0.9 (a possible branch crossing).
    """
    branch: int
    energies: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)
    slopes: np.ndarray = field(repr=False)
    violations: int = 0
    ambiguous: tuple = ()

    def fd_slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.energies)


def flow_grid(model: ModelSpec, points: int = 20, E_min: Optional[float] = None,
              E_max: Optional[float] = None) -> np.ndarray:
    """Uniform grid over the default search window (or the given ends)"""
    lo, hi = search_window(model)
    return np.linspace(lo if E_min is None else E_min, hi if E_max is None else E_max, points)


def branch_flow(model: ModelSpec, grid: Sequence[float]) -> List[EigenFlow]:
    """
    Track every eigenvalue branch of Φ(E) across ``grid``.

    Raises:
        DomainError: the grid is not strictly increasing or leaves the
            admissible window.
    """
    energies = np.asarray(grid, dtype=float)
    if energies.ndim != 1 or energies.size < 2 or np.any(np.diff(energies) <= 0):
        raise DomainError("branch_flow needs a strictly increasing grid of at least two energies")
    pm = model.principal
    n = model.size
    n_pts = energies.size

    values = np.empty((n, n_pts))
    vectors = np.empty((n, n_pts, n))
    slopes = np.empty((n, n_pts))
    ambiguous = [[] for _ in range(n)]
    previous = None
    for p, E in enumerate(energies):
        w, v = eig_sym(pm.evaluate(E))
        order = np.arange(n)
        if previous is not None:
            overlap = np.abs(previous.T @ v)
            rows, cols = linear_sum_assignment(-overlap)
            order = cols[np.argsort(rows)]
            matched = overlap[np.arange(n), order]
            for k in np.flatnonzero(matched < OVERLAP_THRESHOLD):
                ambiguous[k].append(p)
                logger.warning(f"⚠️ branch {k}: ambiguous continuation at E = {E:.6g} "
                               f"(overlap {matched[k]:.3f})")
        v = v[:, order]
        if previous is not None:
            flip = np.sign(np.sum(previous * v, axis=0))
            flip[flip == 0] = 1.0
            v = v * flip
        derivative = pm.derivative(E)
        values[:, p] = w[order]
        vectors[:, p, :] = v.T
        slopes[:, p] = np.einsum("ik,ij,jk->k", v, derivative, v)
        previous = v

    flows = []
    for k in range(n):
        fd = np.diff(values[k]) / np.diff(energies)
        violations = int(np.sum(slopes[k] >= 0.0) + np.sum(fd >= 0.0))
        if violations:
            logger.warning(f"⚠️ branch {k}: {violations} monotonicity violation(s)")
        flows.append(EigenFlow(branch=k, energies=energies, values=values[k].copy(),
                               vectors=vectors[k].copy(), slopes=slopes[k].copy(),
                               violations=violations, ambiguous=tuple(ambiguous[k])))
    return flows
