"""First-order eigenvector and wavefunction corrections"""

import logging
from dataclasses import dataclass

import numpy as np

from ..models import Family, ModelSpec
from ..spectra.wavefunction import free_kernel
from ..utils.errors import SingularityError, UnsupportedFamilyError
from .shift import check_branch, ensure_nondegenerate

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigvecCorrection:
    """A₁^k in the unperturbed basis; component k is zero"""
    branch: int
    vector: np.ndarray

    def to_dict(self) -> dict:
        return {'branch': self.branch, 'vector': [float(x) for x in self.vector]}


def eigvec_first_order(model: ModelSpec, k: int) -> EigvecCorrection:
    """A₁^{kj} = Φ_jk(E_B^k) / (Φ_kk(E_B^k) − Φ_jj(E_B^k)) for j ≠ k"""
    check_branch(model, k)
    energies = ensure_nondegenerate(model)
    vector = np.zeros(model.size)
    if model.size > 1:
        phi = model.principal.evaluate(float(energies[k]))
        for j in range(model.size):
            if j != k:
                vector[j] = phi[j, k] / (phi[k, k] - phi[j, j])
    return EigvecCorrection(k, vector)


def wavefunction_correction(model: ModelSpec, k: int, x, asymptotic: bool = False):
    """
    δψ_k(x) = α₀ Σ_{l≠k} A₁^{kl} R₀(x, a_l; E_B^k) for Point2D models, with
    α₀ = √(4π|E_B^k|) and A₁^{kl} = 2K₀(√|E_B^k| d_kl) / ln(|E_B^k|/|E_B^l|).

    Args:
        asymptotic: replace K₀(√|E_B^k| d_kl) by √(π/2x)e^{−x}

    Raises:
        UnsupportedFamilyError: any family other than Point2D.
        SingularityError: x coincides with a center.
    """
    if model.family is not Family.POINT_2D:
        raise UnsupportedFamilyError(f"wavefunction_correction is defined for Point2D, not {model.family.value}")
    check_branch(model, k)
    energies = ensure_nondegenerate(model)
    e_k = float(energies[k])
    nu = np.sqrt(-e_k)
    alpha0 = np.sqrt(4.0 * np.pi * abs(e_k))

    pts = np.atleast_2d(np.asarray(x, dtype=float))
    centers = np.array([c.coords for c in model.centers])
    r = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=-1)
    if np.any(r == 0.0):
        raise SingularityError("wavefunction correction evaluated at an interaction center")

    if asymptotic:
        amplitudes = np.zeros(model.size)
        for l in range(model.size):
            if l != k:
                arg = nu * model.distances[k, l]
                amplitudes[l] = 2.0 * np.sqrt(np.pi / (2.0 * arg)) * np.exp(-arg) / np.log(e_k / energies[l])
    else:
        amplitudes = eigvec_first_order(model, k).vector

    values = alpha0 * free_kernel(2, nu, r) @ amplitudes
    return float(values[0]) if np.asarray(x).ndim == 1 else values
