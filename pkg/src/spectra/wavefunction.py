"""
Bound-state wavefunctions as superpositions of free resolvent kernels,
ψ_k(x) = α Σ_i R₀(x, a_i; E_k) A^{ki}, for flat point families.

Curve families get an unnormalized diagnostic built from the same
superposition with the kernel integrated along each curve.
"""

import logging
from typing import Union

import numpy as np

from ..geometry import gauss_legendre
from ..models import ModelSpec
from ..specfun import bessel_k0
from ..utils.errors import DomainError, SingularityError, UnsupportedFamilyError
from .solver import BoundState

logger = logging.getLogger(__name__)

CENTER_RTOL = 1e-14
CURVE_NODES = 256

ArrayLike = Union[float, np.ndarray]


def free_kernel(dimension: int, nu: float, r: np.ndarray) -> np.ndarray:
    """R₀(r; −ν²) in ℝ¹, ℝ² or ℝ³"""
    r = np.asarray(r, dtype=float)
    if dimension == 1:
        return np.exp(-nu * r) / (2.0 * nu)
    if dimension == 2:
        return bessel_k0(nu * r) / (2.0 * np.pi)
    if dimension == 3:
        return np.exp(-nu * r) / (4.0 * np.pi * r)
    raise DomainError(f"no free kernel in dimension {dimension}")


def _points(x, dimension: int) -> np.ndarray:
    pts = np.asarray(x, dtype=float)
    if dimension == 1 and pts.ndim <= 1:
        return pts.reshape(-1, 1)
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != dimension:
        raise DomainError(f"evaluation points need {dimension} coordinates, got shape {pts.shape}")
    return pts


def _shape_out(values: np.ndarray, x, dimension: int) -> ArrayLike:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0 if dimension == 1 else arr.ndim == 1
    return float(values[0]) if scalar else values


def wavefunction(state: BoundState, model: ModelSpec, x) -> ArrayLike:
    """
    ψ_k(x) for Point1D, Point2D or Point3D models.

    Args:
        state: a root returned by find_bound_states for ``model``
        model: the system
        x: one point or an array of points (shape (n, dim); plain numbers in 1D)

    Raises:
        UnsupportedFamilyError: hyperbolic, relativistic or curve families.
        SingularityError: a 2D/3D evaluation point coincides with a center.
    """
    if not model.family.is_flat_point:
        raise UnsupportedFamilyError(f"wavefunctions are implemented for flat point families only, "
                                     f"not {model.family.value}")
    dim = model.dimension
    pts = _points(x, dim)
    centers = np.array([c.coords for c in model.centers])
    r = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=-1)
    if dim > 1 and np.any(r <= CENTER_RTOL * max(1.0, float(np.max(np.abs(centers))))):
        raise SingularityError("wavefunction evaluated at an interaction center")
    nu = np.sqrt(-state.energy)
    values = state.alpha * free_kernel(dim, nu, r) @ np.asarray(state.eigenvector)
    return _shape_out(values, x, dim)


def curve_wavefunction(state: BoundState, model: ModelSpec, x, nodes: int = CURVE_NODES) -> ArrayLike:
    """
    Unnormalized ψ_k(x) = α Σ_i A^{ki} L_i^{−1/2} ∫_{Γ_i} R₀(x, γ_i(s)) ds.

    The normalization α is exact for point interactions only; the result is
    a shape diagnostic.
    """
    if not model.family.is_curve:
        raise UnsupportedFamilyError(f"curve_wavefunction needs a curve family, not {model.family.value}")
    dim = model.dimension
    pts = _points(x, dim)
    nu = np.sqrt(-state.energy)
    total = np.zeros(len(pts))
    for a_i, curve in zip(state.eigenvector, model.centers):
        s, w = gauss_legendre(nodes, 0.0, curve.length)
        r = np.linalg.norm(pts[:, None, :] - curve.point_at(s)[None, :, :], axis=-1)
        if np.any(r <= CENTER_RTOL * curve.length):
            raise SingularityError("wavefunction evaluated on an interaction curve")
        total += a_i * (free_kernel(dim, nu, r) @ w) / np.sqrt(curve.length)
    logger.warning("⚠️ curve wavefunction is an unnormalized diagnostic")
    return _shape_out(state.alpha * total, x, dim)

