"""
Tunneling shifts between curve-supported interactions.

Far apart, a curve acts on its partners like a point at its center of
mass x_i = (1/L_i)∫γ_i(s)ds with strength √L_i; the first-order
correction to that replacement cancels, leaving an (R/d)² remainder.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..models import Family, ModelSpec
from ..specfun import bessel_k0
from ..utils.errors import OverlapError, UnsupportedFamilyError
from .shift import perturbative_shift

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveShift:
    """Center-of-mass form of δE^k next to the full quadrature shift"""
    branch: int
    center_of_mass_form: float
    quadrature_form: float
    ratio: float
    com_distances: Tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            'branch': self.branch,
            'center_of_mass_form': self.center_of_mass_form,
            'quadrature_form': self.quadrature_form,
            'ratio': self.ratio,
            'com_distances': list(self.com_distances),
        }


def _require_curves(model: ModelSpec) -> None:
    if not model.family.is_curve:
        raise UnsupportedFamilyError(f"curve shifts need a curve family, not {model.family.value}")


def com_distance(model: ModelSpec, i: int, j: int) -> float:
    """|x_i − x_j| between centers of mass"""
    return float(np.linalg.norm(model.centers[i].center_of_mass() - model.centers[j].center_of_mass()))


def com_offdiag(model: ModelSpec, E: float, i: int, j: int) -> float:
    """Φ_ij(E) with both curves collapsed to their centers of mass"""
    _require_curves(model)
    nu = np.sqrt(-model.principal.check_energy(E))
    d = com_distance(model, i, j)
    strength = np.sqrt(model.centers[i].length * model.centers[j].length)
    if model.family is Family.CURVE_2D:
        return float(-strength * bessel_k0(nu * d) / (4.0 * np.pi))
    return float(-strength * np.exp(-nu * d) / (4.0 * np.pi * d))


def _log_com_offdiag_sq(model: ModelSpec, nu: float, k: int, l: int, d: float) -> float:
    lk, ll = model.centers[k].length, model.centers[l].length
    if model.family is Family.CURVE_2D:
        # K₀(x)² ≈ (π/2x)e^{−2x}
        return np.log(lk * ll / (32.0 * np.pi * nu * d)) - 2.0 * nu * d
    return np.log(lk * ll / (16.0 * np.pi ** 2 * d * d)) - 2.0 * nu * d


def curve_shift(model: ModelSpec, k: int) -> CurveShift:
    """
    δE^k from the center-of-mass leading form, alongside perturbative_shift.

    Raises:
        UnsupportedFamilyError: not a curve family.
        OverlapError: a curve diameter exceeds half the center-of-mass
            separation (the expansion does not apply).
    """
    _require_curves(model)
    quadrature = perturbative_shift(model, k)
    if model.size == 1:
        return CurveShift(k, 0.0, 0.0, 1.0, ())

    pm = model.principal
    e_k = quadrature.zeroth_order
    nu = np.sqrt(-e_k)
    diag = pm.diagonal(e_k)
    d_kk = float(pm.diagonal_derivative(e_k)[k])

    total = 0.0
    distances = []
    for l in range(model.size):
        if l == k:
            continue
        d = com_distance(model, k, l)
        widest = max(model.centers[k].diameter(), model.centers[l].diameter())
        if widest > 0.5 * d:
            raise OverlapError(f"curves {k} and {l}: diameter {widest:.3g} exceeds half the "
                               f"center-of-mass separation {d:.3g}", d)
        distances.append(d)
        total += np.exp(_log_com_offdiag_sq(model, nu, k, l, d)) / diag[l]
    com_form = float(total / d_kk)
    ratio = com_form / quadrature.shift if quadrature.shift != 0.0 else float("nan")
    logger.debug(f"curve level {k}: center-of-mass {com_form:.6e}, quadrature {quadrature.shift:.6e}")
    return CurveShift(k, com_form, quadrature.shift, float(ratio), tuple(distances))
