"""
Riesz-projection diagnostic: the residue of 1/ω^k at a bound state,
computed by a contour integral, must equal 1/(∂ω^k/∂E).

ω^k is only available on the real axis, so it is continued into the
complex plane by a Chebyshev interpolant on [E_k − 2r, E_k + 2r] and the
contour |z − E_k| = r is integrated with the periodic trapezoid rule.
"""

import logging
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Chebyshev

from ..models import ModelSpec
from ..utils.errors import ContourError
from .solver import BoundState, branch_value, find_bound_states

logger = logging.getLogger(__name__)

CONTOUR_POINTS = 64
CHEB_DEGREE = 16
SPAN = 2.0
DEFAULT_RADIUS_FRACTION = 0.1


def contour_residue(func: Callable[[float], float], center: float, radius: float,
                    n_points: int = CONTOUR_POINTS, degree: int = CHEB_DEGREE) -> float:
    """
    (1/2πi)∮ dz / f(z) around |z − center| = radius.

    Args:
        func: real function of a real argument, analytic near ``center``
        center, radius: contour
        n_points: trapezoid nodes on the circle
        degree: Chebyshev degree of the real-axis continuation

    Returns:
        The real part of the contour integral (the residue of 1/f when f has
        a single simple zero inside).
    """
    if not radius > 0:
        raise ContourError(f"contour radius must be positive, got {radius!r}")
    domain = [center - SPAN * radius, center + SPAN * radius]
    poly = Chebyshev.interpolate(np.vectorize(func, otypes=[float]), degree, domain=domain)
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    offset = radius * np.exp(1j * theta)
    return float(np.real(np.mean(offset / poly(center + offset))))


def _isolation_gap(model: ModelSpec, state: BoundState, others) -> float:
    pm = model.principal
    gaps = [pm.threshold - state.energy]
    if np.isfinite(pm.lower_limit):
        gaps.append(state.energy - pm.lower_limit)
    gaps.extend(abs(s.energy - state.energy) for s in others if s is not state and s.branch != state.branch)
    return min(gaps)


def riesz_projection_check(model: ModelSpec, state: BoundState,
                           radius: Optional[float] = None) -> float:
    """
    Relative residual |∮dz/ω^k − 1/ω^k′| / |1/ω^k′| at a bound state.

    Raises:
        ContourError: the contour (or its interpolation interval) reaches
            a neighbouring root or the threshold.
    """
    others = find_bound_states(model)
    gap = _isolation_gap(model, state, others)
    if radius is None:
        radius = DEFAULT_RADIUS_FRACTION * gap
    if SPAN * radius >= gap:
        raise ContourError(f"contour radius {radius:.3e} reaches the nearest root or threshold "
                           f"(gap {gap:.3e})")

    def omega(E):
        return branch_value(model, E, state.branch)

    result = contour_residue(omega, state.energy, radius)
    expected = 1.0 / state.slope
    residual = abs(result - expected) / abs(expected)
    logger.debug(f"riesz check branch {state.branch}: contour {result:.15g}, "
                 f"1/slope {expected:.15g}, residual {residual:.3e}")
    return residual
