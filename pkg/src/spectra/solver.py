#!/usr/bin/env python3
"""
🎯 BOUND-STATE SOLVER
============================================================
Bound states are the energies where an eigenvalue branch ω^k(E) of
Φ(E) crosses zero. The ascending eigenvalues of Φ are each strictly
decreasing in E, so every sorted branch roots at most once and a
sign change between the ends of the window brackets it.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..models import ModelSpec
from ..utils.errors import ConvergenceError, DomainError
from ..utils.numerics import find_root
from .eigen import eig_sym, eigvals_sym

logger = logging.getLogger(__name__)

THRESHOLD_GAP = 1e-10
LOWER_GAP = 1e-9
MAX_WINDOW_DOUBLINGS = 60


@dataclass(frozen=True, eq=False)
class BoundState:
    """
    One root of det Φ(E) = 0.

    Attributes:
        energy: E_k
        eigenvector: unit A^k(E_k), largest component positive
        alpha: normalization (−∂ω^k/∂E)^{−1/2}
        branch: index k of the ascending eigenvalue branch
        slope: ∂ω^k/∂E at E_k (Feynman–Hellmann)
        residual: ω^k(E_k) as evaluated after the root search
    """
    energy: float
    eigenvector: np.ndarray = field(repr=False)
    alpha: float
    branch: int
    slope: float
    residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            'branch': self.branch,
            'energy': self.energy,
            'alpha': self.alpha,
            'slope': self.slope,
            'residual': self.residual,
            'eigenvector': [float(a) for a in self.eigenvector],
        }


def branch_value(model: ModelSpec, E: float, k: int) -> float:
    """ω^k(E), the k-th smallest eigenvalue of Φ(E)"""
    return float(eigvals_sym(model.principal.evaluate(E))[k])


def window_top(model: ModelSpec) -> float:
    thr = model.principal.threshold
    return thr - THRESHOLD_GAP * max(1.0, abs(thr))


def search_window(model: ModelSpec) -> Tuple[float, float]:
    """
    Default window [E_lo, E_hi) for the root search.

    E_hi sits just below the threshold. E_lo starts 2·max(threshold − E_B^i)
    below it and is pushed down by doubling until Φ(E_lo) is positive
    definite (every branch positive, so every root lies above), or clamped
    just above the lower limit of relativistic families.
    """
    pm = model.principal
    thr = pm.threshold
    e_hi = window_top(model)
    depth = 2.0 * float(np.max(thr - pm.binding_energies))
    lower = pm.lower_limit
    for _ in range(MAX_WINDOW_DOUBLINGS):
        e_lo = thr - depth
        if np.isfinite(lower) and e_lo <= lower:
            e_lo = lower + LOWER_GAP * max(1.0, abs(lower))
            return e_lo, e_hi
        if eigvals_sym(pm.evaluate(e_lo))[0] > 0.0:
            return e_lo, e_hi
        depth *= 2.0
    raise ConvergenceError(f"no positive-definite lower end for the search window "
                           f"(tried down to E = {thr - depth:.3e})")


def bound_state_at(model: ModelSpec, energy: float, k: int) -> BoundState:
    """Eigenvector, slope and normalization of branch k at a root"""
    pm = model.principal
    values, vectors = eig_sym(pm.evaluate(energy))
    a = vectors[:, k]
    slope = float(a @ pm.derivative(energy) @ a)
    if not slope < 0.0:
        raise ConvergenceError(f"branch {k} has non-negative slope {slope:.3e} at E = {energy!r}")
    return BoundState(energy=float(energy), eigenvector=a, alpha=float((-slope) ** -0.5),
                      branch=k, slope=slope, residual=float(values[k]))


def find_bound_states(model: ModelSpec, E_min: Optional[float] = None,
                      E_max_cap: Optional[float] = None, rtol: float = 1e-15) -> List[BoundState]:
    """
    All roots of det Φ(E) = 0 in [E_min, E_max_cap].

    Args:
        model: the system
        E_min: lower end of the window (automatic when None)
        E_max_cap: upper end, below the threshold (just below it when None)
        rtol: relative root tolerance handed to Brent's method

    Returns:
        Bound states sorted by energy; the ground state comes from branch 0.
    """
    pm = model.principal
    e_lo = search_window(model)[0] if E_min is None else float(E_min)
    e_hi = window_top(model) if E_max_cap is None else float(E_max_cap)
    if not e_lo < e_hi:
        raise DomainError(f"empty search window [{e_lo!r}, {e_hi!r}]")
    pm.check_energy(e_lo)
    pm.check_energy(e_hi)

    w_lo = eigvals_sym(pm.evaluate(e_lo))
    w_hi = eigvals_sym(pm.evaluate(e_hi))
    states = []
    for k in range(model.size):
        if w_lo[k] < 0.0:
            logger.warning(f"⚠️ window too small: branch {k} is already negative at "
                           f"E_min = {e_lo:.6g} (its root lies below the window)")
            continue
        if w_hi[k] > 0.0:
            logger.debug(f"branch {k}: no root below E = {e_hi:.6g}")
            continue
        energy = find_root(lambda E, k=k: branch_value(model, E, k), e_lo, e_hi,
                           rtol=rtol, what=f"branch {k} root")
        states.append(bound_state_at(model, energy, k))
        logger.debug(f"branch {k}: E = {energy:.15g}")

    states.sort(key=lambda s: s.energy)
    logger.info(f"🎯 {len(states)} bound state(s) for {model.family.value}, N={model.size}")
    return states
