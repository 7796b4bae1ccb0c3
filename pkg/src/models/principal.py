#!/usr/bin/env python3
"""
🔷 PRINCIPAL MATRIX
============================================================
Assembles Φ(E) and ∂Φ/∂E from the family kernels and exposes the
module-level operations used by the solvers: threshold, eval_phi,
phi_derivative, offdiag_bound and the relativistic off-diagonal
integrals.
"""

import logging
from functools import cached_property
from typing import Tuple

import numpy as np

from ..utils.errors import ConvergenceError, ModelError, UnsupportedFamilyError
from ..utils.numerics import find_root
from .families import (FamilyKernel, kernel_for, rel2d_saddle_estimate,
                       salpeter_offdiag_asymptotic as _salpeter_asymptotic)
from .spec import Family, ModelSpec

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-13
MAX_DECADES = 300
MAX_DOUBLINGS = 200


class PrincipalMatrix:
    """
    Evaluator E ↦ Φ(E) for one ModelSpec.

    Instances are immutable after construction and safe to share between
    threads; curve quadrature grids are built once, here.
    """

    def __init__(self, model: ModelSpec):
        self.model = model
        self.kernel: FamilyKernel = kernel_for(model)
        self.threshold = float(self.kernel.threshold)
        self.lower_limit = float(self.kernel.lower_limit)

    @property
    def size(self) -> int:
        return self.model.size

    def check_energy(self, E: float) -> float:
        return self.kernel.check_energy(E)

    def scaled_offdiag(self, E: float) -> Tuple[np.ndarray, np.ndarray]:
        """(mantissa, exponent) matrices; the diagonal holds (0, 0)"""
        E = self.check_energy(E)
        n = self.size
        mantissa = np.zeros((n, n))
        exponent = np.zeros((n, n))
        for i, j in self.kernel.pairs():
            m, x = self.kernel.pair_scaled(E, i, j)
            mantissa[i, j] = mantissa[j, i] = m
            exponent[i, j] = exponent[j, i] = x
        return mantissa, exponent

    def evaluate(self, E: float) -> np.ndarray:
        """Φ(E), exactly symmetric"""
        E = self.check_energy(E)
        mantissa, exponent = self.scaled_offdiag(E)
        phi = mantissa * np.exp(-exponent)
        np.fill_diagonal(phi, self.kernel.diagonal(E))
        return phi

    __call__ = evaluate

    def log_abs_offdiag(self, E: float) -> np.ndarray:
        """ln|Φ_ij(E)| for i ≠ j, −inf on the diagonal"""
        mantissa, exponent = self.scaled_offdiag(E)
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(mantissa)) - exponent
        np.fill_diagonal(out, -np.inf)
        return out

    def derivative(self, E: float) -> np.ndarray:
        """∂Φ/∂E"""
        E = self.check_energy(E)
        n = self.size
        out = np.zeros((n, n))
        for i, j in self.kernel.pairs():
            out[i, j] = out[j, i] = self.kernel.pair_derivative(E, i, j)
        np.fill_diagonal(out, self.kernel.diagonal_derivative(E))
        return out

    def diagonal(self, E: float) -> np.ndarray:
        return self.kernel.diagonal(self.check_energy(E))

    def diagonal_derivative(self, E: float) -> np.ndarray:
        return self.kernel.diagonal_derivative(self.check_energy(E))

    def offdiag_bound(self, E: float) -> float:
        E = self.check_energy(E)
        if self.size < 2:
            return 0.0
        return self.kernel.bound(E)

    @cached_property
    def binding_energies(self) -> np.ndarray:
        """Single-center energies E_B^i (derived for bare-coupling families)"""
        fam = self.model.family
        if fam is Family.POINT_1D:
            return -np.array(self.model.couplings) ** 2 / 4.0
        if fam is Family.CURVE_2D:
            return np.array([self._single_curve_energy(i) for i in range(self.size)])
        return np.array(self.model.binding_energies)

    def _single_curve_energy(self, i: int) -> float:
        def entry(E):
            return float(self.kernel.diagonal(E)[i])

        hi = None
        for k in range(1, MAX_DECADES + 1):
            if entry(-10.0 ** -k) < 0.0:
                hi = -10.0 ** -k
                break
        if hi is None:
            raise ModelError(f"curve {i}: the single-curve bound state is too shallow to resolve "
                             f"(Φ_ii stays positive up to E = -1e-{MAX_DECADES})")
        lo = min(-1.0, 10.0 * hi)
        for _ in range(MAX_DOUBLINGS):
            if entry(lo) > 0.0:
                break
            lo *= 2.0
        else:
            raise ConvergenceError(f"curve {i}: no lower bracket for the single-curve root")
        energy = find_root(entry, lo, hi, what=f"single-curve energy {i}")
        logger.debug(f"curve {i}: single-curve energy {energy:.12g}")
        return energy


# ------------------------------------------------------------ module operations


def threshold(model: ModelSpec) -> float:
    """Bottom of the free continuous spectrum"""
    return model.principal.threshold


def eval_phi(model: ModelSpec, E: float) -> np.ndarray:
    return model.principal.evaluate(E)


def phi_derivative(model: ModelSpec, E: float) -> np.ndarray:
    return model.principal.derivative(E)


def offdiag_bound(model: ModelSpec, E: float) -> float:
    return model.principal.offdiag_bound(E)


def log_abs_offdiag(model: ModelSpec, E: float) -> np.ndarray:
    return model.principal.log_abs_offdiag(E)


def binding_energies_of(model: ModelSpec) -> np.ndarray:
    return model.principal.binding_energies


def _pair_entry(model: ModelSpec, family: Family, E: float, i: int, j: int) -> float:
    if model.family is not family:
        raise UnsupportedFamilyError(f"{family.value} off-diagonal requested for a "
                                     f"{model.family.value} model")
    if i == j:
        raise ValueError("off-diagonal entry needs i ≠ j")
    pm = model.principal
    E = pm.check_energy(E)
    mantissa, exponent = pm.kernel.pair_scaled(E, i, j)
    return float(mantissa * np.exp(-exponent))


def eval_phi_offdiag_salpeter(model: ModelSpec, E: float, i: int, j: int) -> float:
    """Salpeter Φ_ij(E) by adaptive quadrature (plus the closed term for E > 0)"""
    return _pair_entry(model, Family.SALPETER_1D, E, i, j)


def eval_phi_offdiag_rel2d(model: ModelSpec, E: float, i: int, j: int) -> float:
    """Relativistic2D Φ_ij(E) by adaptive quadrature"""
    return _pair_entry(model, Family.RELATIVISTIC_2D, E, i, j)


def salpeter_offdiag_asymptotic(model: ModelSpec, E: float, i: int, j: int) -> float:
    if model.family is not Family.SALPETER_1D:
        raise UnsupportedFamilyError("Salpeter asymptotic requested for a "
                                     f"{model.family.value} model")
    return _salpeter_asymptotic(model.mass, model.principal.check_energy(E), float(model.distances[i, j]))


def rel2d_offdiag_saddle(model: ModelSpec, E: float, i: int, j: int) -> float:
    """Saddle-point estimate of the Relativistic2D off-diagonal, for cross-checks"""
    if model.family is not Family.RELATIVISTIC_2D:
        raise UnsupportedFamilyError("Relativistic2D saddle estimate requested for a "
                                     f"{model.family.value} model")
    return rel2d_saddle_estimate(model.mass, model.principal.check_energy(E), float(model.distances[i, j]))
