"""
Two identical centers: the off-diagonal coupling lifts the degeneracy
to first order, ω^{1,2}₁ = ±|Φ₁₂(E_B)|, and each level solves the
truncated equation Φ₁₁(E) = ±|Φ₁₂(E_B)|.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..models import Family, ModelSpec
from ..spectra import window_top
from ..utils.errors import ConvergenceError, DegeneracyError, ModelError, NoSecondRootError
from ..utils.numerics import find_root

logger = logging.getLogger(__name__)

EQUAL_RTOL = 1e-12
BRACKET_FACTOR = 10.0
MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class DegenerateSplitting:
    """
    Attributes:
        binding_energy: common E_B
        half_separation: a (centers 2a apart)
        e_minus: symmetric (ground) level of the truncated equation
        e_plus: antisymmetric level
        splitting: e_plus − e_minus
        first_order: linearised splitting 2|Φ₁₂(E_B)| / |∂Φ₁₁/∂E|
        asymptotic: large-a splitting of the family, when known
    """
    binding_energy: float
    half_separation: float
    e_minus: float
    e_plus: float
    splitting: float
    first_order: float
    asymptotic: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            'binding_energy': self.binding_energy,
            'half_separation': self.half_separation,
            'e_minus': self.e_minus,
            'e_plus': self.e_plus,
            'splitting': self.splitting,
            'first_order': self.first_order,
            'asymptotic': self.asymptotic,
        }


def asymptotic_splitting(family: Family, binding_energy: float, a: float,
                         coupling: Optional[float] = None) -> Optional[float]:
    """Leading large-separation splitting for identical point centers 2a apart"""
    if family is Family.POINT_1D:
        return float(coupling ** 2 * np.exp(-a * coupling))
    if family not in (Family.POINT_2D, Family.POINT_3D):
        return None
    mu = np.sqrt(-binding_energy)
    if family is Family.POINT_2D:
        return float(2.0 * abs(binding_energy) ** 0.75 * np.sqrt(np.pi) * np.exp(-2.0 * mu * a) / np.sqrt(a))
    return float(2.0 * mu * np.exp(-2.0 * a * mu) / a)


def _bracket(entry, start: float, step: float, limit: float, want_positive: bool) -> float:
    """Walk from ``start`` by growing ``step`` until entry changes to the wanted sign"""
    x = start
    for _ in range(MAX_EXPANSIONS):
        x = start + step
        if step > 0 and x >= limit or step < 0 and x <= limit:
            x = limit
        if (entry(x) > 0.0) == want_positive:
            return x
        if x == limit:
            break
        step *= 2.0
    raise NoSecondRootError(f"truncated equation has no sign change between {start!r} and {x!r}")


def degenerate_splitting(model: ModelSpec) -> DegenerateSplitting:
    """
    Levels of two identical centers from the truncated equations.

    Raises:
        ModelError: the model does not have exactly two centers.
        DegeneracyError: the two centers have different parameters.
        NoSecondRootError: the antisymmetric equation has no root below
            the threshold.
    """
    if model.size != 2:
        raise ModelError(f"degenerate splitting needs exactly two centers, got {model.size}")
    params = model.parameters
    if abs(params[0] - params[1]) > EQUAL_RTOL * max(abs(params[0]), abs(params[1]), 1e-300):
        raise DegeneracyError(f"degenerate splitting needs identical centers, got parameters {params}")

    pm = model.principal
    e_b = float(pm.binding_energies[0])
    coupling = abs(pm.evaluate(e_b)[0, 1])
    slope = float(pm.diagonal_derivative(e_b)[0])
    top = window_top(model)
    bottom = pm.lower_limit + 1e-9 * max(1.0, abs(pm.lower_limit)) if np.isfinite(pm.lower_limit) else -np.inf

    def diag(E):
        return float(pm.diagonal(E)[0])

    width = BRACKET_FACTOR * coupling / abs(slope)
    if width == 0.0:
        raise ConvergenceError("off-diagonal coupling underflows; the levels are numerically degenerate")

    # symmetric level: Φ₁₁(E) = +|Φ₁₂|, below E_B
    lo = _bracket(lambda E: diag(E) - coupling, e_b, -width, bottom, want_positive=True)
    e_minus = find_root(lambda E: diag(E) - coupling, lo, e_b, what="symmetric level")
    # antisymmetric level: Φ₁₁(E) = −|Φ₁₂|, above E_B
    hi = _bracket(lambda E: diag(E) + coupling, e_b, min(width, 0.5 * (top - e_b)), top, want_positive=False)
    e_plus = find_root(lambda E: diag(E) + coupling, e_b, hi, what="antisymmetric level")

    a = 0.5 * float(model.distances[0, 1])
    first_order = 2.0 * coupling / abs(slope)
    asymptotic = asymptotic_splitting(model.family, e_b, a,
                                      model.couplings[0] if model.couplings else None)
    logger.debug(f"degenerate pair a={a}: E- = {e_minus:.15g}, E+ = {e_plus:.15g}")
    return DegenerateSplitting(e_b, a, e_minus, e_plus, e_plus - e_minus, first_order, asymptotic)
