#!/usr/bin/env python3
"""
🧮 FAMILY KERNELS
============================================================
One kernel class per model family. A kernel knows the family's
threshold, its diagonal Φ_ii(E) and derivative, and every
off-diagonal entry in scaled form Φ_ij = mantissa·e^{−exponent}
so that tunneling entries stay representable far below the
double-precision underflow limit.
"""

import logging
from abc import ABC, abstractmethod
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np
from scipy import special

from ..geometry import QuadratureGrid, build_diag_grid, build_offdiag_grid
from ..specfun import (bessel_k0, bessel_k0e, bessel_k1, digamma, gamma_ratio,
                       legendre_q_scaled, trigamma)
from ..utils.errors import DomainError
from ..utils.numerics import adaptive_quad, richardson_derivative

logger = logging.getLogger(__name__)

# e^{-EXP_CUTOFF} is below the smallest normal double
EXP_CUTOFF = 745.0
QUAD_RTOL = 1e-11
PHI_PRIME_SERIES_CUTOFF = 1e-2

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi
# widens bounds that coincide with the nearest-pair entry
ROUNDING_SLACK = 1.0 + 4.0 * np.finfo(float).eps


class FamilyKernel(ABC):
    """Entry-level formulas of Φ(E) for one family"""

    threshold: float = 0.0
    lower_limit: float = -np.inf
    analytic_offdiag_derivative: bool = True

    def __init__(self, model):
        self.model = model
        self.n = model.size
        self.distances = model.distances

    def check_energy(self, E: float) -> float:
        E = float(E)
        if not np.isfinite(E):
            raise DomainError(f"spectral parameter must be finite, got {E!r}")
        if not E < self.threshold:
            raise DomainError(f"{self.model.family.value}: E = {E!r} is not below the "
                              f"threshold {self.threshold!r} of the free spectrum")
        if not E > self.lower_limit:
            raise DomainError(f"{self.model.family.value}: E = {E!r} is not above {self.lower_limit!r}")
        return E

    def pairs(self) -> List[Tuple[int, int]]:
        return list(combinations(range(self.n), 2))

    @abstractmethod
    def diagonal(self, E: float) -> np.ndarray:
        """Φ_ii(E) for every i"""

    @abstractmethod
    def diagonal_derivative(self, E: float) -> np.ndarray:
        """∂Φ_ii/∂E for every i"""

    @abstractmethod
    def pair_scaled(self, E: float, i: int, j: int) -> Tuple[float, float]:
        """(mantissa, exponent) with Φ_ij = mantissa·e^{−exponent}"""

    def pair_derivative(self, E: float, i: int, j: int) -> float:
        """∂Φ_ij/∂E; Richardson-extrapolated central difference unless overridden"""
        def entry(z):
            mantissa, exponent = self.pair_scaled(z, i, j)
            return mantissa * np.exp(-exponent)
        return float(richardson_derivative(entry, E, upper=self.threshold))

    @abstractmethod
    def bound(self, E: float) -> float:
        """Upper bound for max_{i≠j}|Φ_ij(E)| at the minimum separation"""


# ---------------------------------------------------------------- flat points


class Point1DKernel(FamilyKernel):
    """δ-interactions on the line, bare couplings λ_i"""

    def __init__(self, model):
        super().__init__(model)
        self.couplings = np.array(model.couplings)

    def diagonal(self, E):
        nu = np.sqrt(-E)
        return 1.0 / self.couplings - 1.0 / (2.0 * nu)

    def diagonal_derivative(self, E):
        nu = np.sqrt(-E)
        return np.full(self.n, -1.0 / (4.0 * nu ** 3))

    def pair_scaled(self, E, i, j):
        nu = np.sqrt(-E)
        return -1.0 / (2.0 * nu), nu * self.distances[i, j]

    def pair_derivative(self, E, i, j):
        nu = np.sqrt(-E)
        x = nu * self.distances[i, j]
        return float(-np.exp(-x) * (x + 1.0) / (4.0 * nu ** 3))

    def bound(self, E):
        nu = np.sqrt(-E)
        mantissa, exponent = -1.0 / (2.0 * nu), nu * self.model.min_separation
        return float(abs(mantissa) * np.exp(-exponent) * ROUNDING_SLACK)


class Point2DKernel(FamilyKernel):
    """Renormalized δ-interactions in the plane"""

    def __init__(self, model):
        super().__init__(model)
        self.mu = np.sqrt(-np.array(model.binding_energies))

    def diagonal(self, E):
        return np.log(np.sqrt(-E) / self.mu) / TWO_PI

    def diagonal_derivative(self, E):
        return np.full(self.n, 1.0 / (FOUR_PI * E))

    def pair_scaled(self, E, i, j):
        x = np.sqrt(-E) * self.distances[i, j]
        return -bessel_k0e(x) / TWO_PI, x

    def pair_derivative(self, E, i, j):
        nu = np.sqrt(-E)
        d = self.distances[i, j]
        return float(-d * bessel_k1(nu * d) / (FOUR_PI * nu))

    def bound(self, E):
        # K₀(x) < (2/x)e^{−x/2}
        x = np.sqrt(-E) * self.model.min_separation
        return float(np.exp(-0.5 * x) / (np.pi * x))


class Point3DKernel(FamilyKernel):
    """Renormalized δ-interactions in space"""

    def __init__(self, model):
        super().__init__(model)
        self.mu = np.sqrt(-np.array(model.binding_energies))

    def diagonal(self, E):
        return (np.sqrt(-E) - self.mu) / FOUR_PI

    def diagonal_derivative(self, E):
        return np.full(self.n, -1.0 / (8.0 * np.pi * np.sqrt(-E)))

    def pair_scaled(self, E, i, j):
        d = self.distances[i, j]
        return -1.0 / (FOUR_PI * d), np.sqrt(-E) * d

    def pair_derivative(self, E, i, j):
        nu = np.sqrt(-E)
        return float(-np.exp(-nu * self.distances[i, j]) / (8.0 * np.pi * nu))

    def bound(self, E):
        d = self.model.min_separation
        mantissa, exponent = -1.0 / (FOUR_PI * d), np.sqrt(-E) * d
        return float(abs(mantissa) * np.exp(-exponent) * ROUNDING_SLACK)


# ------------------------------------------------------------------ hyperbolic


class PointH3Kernel(FamilyKernel):
    """Renormalized point interactions on ℍ³, q = √(κ² − E)"""

    def __init__(self, model):
        super().__init__(model)
        self.kappa = model.kappa
        self.threshold = self.kappa ** 2
        self.q_b = np.sqrt(self.kappa ** 2 - np.array(model.binding_energies))

    def _q(self, E):
        return np.sqrt(self.kappa ** 2 - E)

    def diagonal(self, E):
        return (self._q(E) - self.q_b) / FOUR_PI

    def diagonal_derivative(self, E):
        return np.full(self.n, -1.0 / (8.0 * np.pi * self._q(E)))

    def _pair_at(self, E, d):
        # κe^{−dq}/(4π sinh κd) = κ/(2π(1 − e^{−2κd}))·e^{−d(q+κ)}
        k = self.kappa
        return -k / (TWO_PI * -np.expm1(-2.0 * k * d)), d * (self._q(E) + k)

    def pair_scaled(self, E, i, j):
        return self._pair_at(E, self.distances[i, j])

    def pair_derivative(self, E, i, j):
        mantissa, exponent = self.pair_scaled(E, i, j)
        return float(mantissa * np.exp(-exponent) * self.distances[i, j] / (2.0 * self._q(E)))

    def bound(self, E):
        mantissa, exponent = self._pair_at(E, self.model.min_separation)
        return float(abs(mantissa) * np.exp(-exponent) * ROUNDING_SLACK)


class PointH2Kernel(FamilyKernel):
    """
    Renormalized point interactions on ℍ², threshold κ²/4.

    With s(E) = √(1/4 − E/κ²) the diagonal is a digamma difference and the
    off-diagonal is −(1/2π)Q_{s−1/2}(cosh κd).
    """

    analytic_offdiag_derivative = False

    def __init__(self, model):
        super().__init__(model)
        self.kappa = model.kappa
        self.threshold = self.kappa ** 2 / 4.0
        self.s_b = np.array([self._s(e) for e in model.binding_energies])
        self.psi_b = np.array([digamma(0.5 + s) for s in self.s_b])

    def _s(self, E):
        return float(np.sqrt(0.25 - E / self.kappa ** 2))

    def degree(self, E: float) -> float:
        return self._s(E) - 0.5

    def diagonal(self, E):
        return (digamma(0.5 + self._s(E)) - self.psi_b) / TWO_PI

    def diagonal_derivative(self, E):
        s = self._s(E)
        return np.full(self.n, -trigamma(0.5 + s) / (FOUR_PI * self.kappa ** 2 * s))

    def pair_scaled(self, E, i, j):
        mantissa, exponent = legendre_q_scaled(self.degree(E), self.kappa * self.distances[i, j])
        return -mantissa / TWO_PI, exponent

    def bound(self, E):
        # first two series terms exactly, the rest by a geometric tail
        v = self.degree(E)
        alpha = self.kappa * self.model.min_separation
        total = (gamma_ratio(0, v) * np.exp(-alpha * (v + 1.0))
                 + gamma_ratio(1, v) * np.exp(-alpha * (v + 3.0))
                 + np.exp(-alpha * (v + 5.0)) / -np.expm1(-2.0 * alpha))
        return float(total / TWO_PI)


# ---------------------------------------------------------------- relativistic


def salpeter_phi(m: float, z: float) -> float:
    """φ(z) = z·atan2(q, −z)/(πq), q = √(m² − z²), for |z| < m"""
    q = np.sqrt(m * m - z * z)
    return float(z * np.arctan2(q, -z) / (np.pi * q))


def salpeter_phi_prime(m: float, z: float) -> float:
    """φ′(z); a series in q/|z| replaces the closed form where it cancels (z → −m)"""
    q = np.sqrt(m * m - z * z)
    if z < 0 and q < PHI_PRIME_SERIES_CUTOFF * abs(z):
        a = abs(z)
        return float((1.0 / a - m ** 2 / (3.0 * a ** 3) + m ** 2 * q ** 2 / (5.0 * a ** 5)
                      - m ** 2 * q ** 4 / (7.0 * a ** 7)) / np.pi)
    return float((m * m * np.arctan2(q, -z) / q ** 3 + z / q ** 2) / np.pi)


def salpeter_offdiag_scaled(m: float, E: float, d: float) -> Tuple[float, float]:
    """
    Salpeter off-diagonal entry as (mantissa, exponent).

    For E ≤ 0 the entry is −(1/π)∫_m^∞ dμ e^{−μd}√(μ²−m²)/(μ²−m²+E²),
    integrated in μ = m·coshθ with e^{−md} factored out. For 0 < E < m the
    bound-state continuation adds −E·e^{−qd}/q, q = √(m² − E²).
    """
    md = m * d
    theta_max = float(np.arccosh(1.0 + EXP_CUTOFF / md))
    ratio2 = (E / m) ** 2

    def integrand(theta):
        sh2 = np.sinh(theta) ** 2
        weight = 1.0 if ratio2 == 0.0 else sh2 / (sh2 + ratio2)
        return np.exp(-md * (np.cosh(theta) - 1.0)) * weight

    points = [float(np.arcsinh(abs(E) / m))] if E != 0.0 else None
    integral = adaptive_quad(integrand, 0.0, theta_max, rel_tol=QUAD_RTOL, points=points,
                             what="Salpeter off-diagonal")
    if E <= 0.0:
        return -integral / np.pi, md
    q = np.sqrt(m * m - E * E)
    return -E / q - integral / np.pi * np.exp(-(m - q) * d), q * d


def salpeter_offdiag_asymptotic(m: float, E: float, d: float) -> float:
    """
    Large-md form of the Salpeter off-diagonal: the integral is dominated
    by μ near m, giving −(1/√(2π))(m/E)²e^{−md}/(md)^{3/2}; the closed
    continuation term is added unchanged for E > 0.
    """
    if E == 0.0:
        raise DomainError("the Laplace asymptotic of the Salpeter off-diagonal needs E ≠ 0")
    md = m * d
    value = -(m / E) ** 2 * np.exp(-md) / (np.sqrt(TWO_PI) * md ** 1.5)
    if E > 0.0:
        q = np.sqrt(m * m - E * E)
        value -= E * np.exp(-q * d) / q
    return float(value)


def rel2d_offdiag_scaled(m: float, E: float, d: float) -> Tuple[float, float]:
    """
    Relativistic 2D off-diagonal entry as (mantissa, exponent).

    With q = √(m² − E²) and t* = artanh(E/m) the integral
    −(1/2π)∫₀^∞ ds (s²+1)^{−1/2} e^{−d[m√(s²+1) − Es]} becomes
    −(1/2π)∫_{−t*}^∞ e^{−dq·cosh u} du.
    """
    q = np.sqrt(m * m - E * E)
    t_star = float(np.arctanh(E / m))
    dq = d * q
    u0 = max(-t_star, 0.0)
    c0 = np.cosh(u0)
    upper = float(np.arccosh(c0 + EXP_CUTOFF / dq))
    lower = max(-t_star, -upper)

    def integrand(u):
        return np.exp(-dq * (np.cosh(u) - c0))

    integral = adaptive_quad(integrand, lower, upper, rel_tol=QUAD_RTOL,
                             points=[0.0], what="Relativistic2D off-diagonal")
    return -integral / TWO_PI, dq * c0


def rel2d_offdiag_derivative(m: float, E: float, d: float) -> float:
    """∂/∂E of the Relativistic2D off-diagonal: −(d/2π)∫_{−t*}^∞ sinh(u + t*)e^{−dq·cosh u} du"""
    q = np.sqrt(m * m - E * E)
    t_star = float(np.arctanh(E / m))
    dq = d * q
    u0 = max(-t_star, 0.0)
    c0 = np.cosh(u0)
    upper = float(np.arccosh(c0 + EXP_CUTOFF / dq))
    lower = max(-t_star, -upper)

    def integrand(u):
        return np.sinh(u + t_star) * np.exp(-dq * (np.cosh(u) - c0))

    integral = adaptive_quad(integrand, lower, upper, rel_tol=QUAD_RTOL,
                             points=[0.0], what="Relativistic2D off-diagonal derivative")
    return float(-d / TWO_PI * integral * np.exp(-dq * c0))


def rel2d_saddle_scaled(m: float, E: float, d: float) -> Tuple[float, float]:
    """
    Laplace estimate of the Relativistic2D off-diagonal as (mantissa, exponent).

    With v = sinh(u/2) the integral −(1/2π)∫_{−t*}^∞ e^{−dq·cosh u} du is
    −(1/π)e^{−dq}∫_{v₀}^∞ e^{−2dq·v²}(1+v²)^{−1/2} dv, v₀ = −sinh(t*/2).
    The weight is frozen where the integrand peaks: at the saddle v = 0
    for E ≥ 0, at the endpoint v₀ for E < 0, where −t* > 0 cuts the
    saddle off. This gives
    −(1/2π)√(π/(2dq))e^{−dq}·erfc(v₀√(2dq))/√(1+v₀²).
    """
    q = np.sqrt(m * m - E * E)
    t_star = float(np.arctanh(E / m))
    dq = d * q
    v0 = -np.sinh(0.5 * t_star)
    x = v0 * np.sqrt(2.0 * dq)
    weight = 1.0 / np.sqrt(1.0 + v0 * v0) if v0 > 0.0 else 1.0
    if x > 0.0:
        tail, exponent = special.erfcx(x), dq + x * x
    else:
        tail, exponent = special.erfc(x), dq
    return float(-np.sqrt(np.pi / (2.0 * dq)) * weight * tail / TWO_PI), float(exponent)


def rel2d_saddle_estimate(m: float, E: float, d: float) -> float:
    """Laplace estimate of the Relativistic2D off-diagonal (see rel2d_saddle_scaled)"""
    mantissa, exponent = rel2d_saddle_scaled(m, E, d)
    return mantissa * float(np.exp(-exponent))


class Salpeter1DKernel(FamilyKernel):
    """Semi-relativistic point interactions on the line, √(p² + m²) kinetic term"""

    analytic_offdiag_derivative = False

    def __init__(self, model):
        super().__init__(model)
        self.mass = model.mass
        self.threshold = self.mass
        self.lower_limit = -self.mass
        self.phi_b = np.array([salpeter_phi(self.mass, e) for e in model.binding_energies])

    def diagonal(self, E):
        return self.phi_b - salpeter_phi(self.mass, E)

    def diagonal_derivative(self, E):
        return np.full(self.n, -salpeter_phi_prime(self.mass, E))

    def pair_scaled(self, E, i, j):
        return salpeter_offdiag_scaled(self.mass, E, self.distances[i, j])

    def bound(self, E):
        m = self.mass
        d = self.model.min_separation
        value = bessel_k0(m * d) / np.pi
        if E > 0.0:
            q = np.sqrt(m * m - E * E)
            value += E * np.exp(-q * d) / q
        return float(value)


class Relativistic2DKernel(FamilyKernel):
    """Relativistic point interactions in the plane"""

    def __init__(self, model):
        super().__init__(model)
        self.mass = model.mass
        self.threshold = self.mass
        self.lower_limit = -self.mass
        self.gap_b = self.mass - np.array(model.binding_energies)

    def diagonal(self, E):
        return np.log((self.mass - E) / self.gap_b) / TWO_PI

    def diagonal_derivative(self, E):
        return np.full(self.n, -1.0 / (TWO_PI * (self.mass - E)))

    def pair_scaled(self, E, i, j):
        return rel2d_offdiag_scaled(self.mass, E, self.distances[i, j])

    def pair_derivative(self, E, i, j):
        return rel2d_offdiag_derivative(self.mass, E, self.distances[i, j])

    def bound(self, E):
        q = np.sqrt(self.mass ** 2 - E * E)
        return float(bessel_k0(q * self.model.min_separation) / np.pi)


# ---------------------------------------------------------------------- curves


class CurveKernel(FamilyKernel):
    """Shared quadrature grids for curve-supported families"""

    def __init__(self, model):
        super().__init__(model)
        order = model.quad_order
        self.lengths = np.array(model.lengths)
        self.diag_grids: List[QuadratureGrid] = [build_diag_grid(c, order) for c in model.centers]
        self.off_grids: Dict[Tuple[int, int], QuadratureGrid] = {
            (i, j): build_offdiag_grid(model.centers[i], model.centers[j], order)
            for i, j in self.pairs()
        }
        logger.debug(f"curve grids built: order {order}, {self.n} curves, "
                     f"{sum(g.size for g in self.diag_grids)} diagonal nodes")

    def _norm(self, i: int, j: int) -> float:
        return float(np.sqrt(self.lengths[i] * self.lengths[j]))


class Curve2DKernel(CurveKernel):
    """δ-interactions supported on planar curves, bare couplings λ_i"""

    def __init__(self, model):
        super().__init__(model)
        self.couplings = np.array(model.couplings)

    def diagonal(self, E):
        nu = np.sqrt(-E)
        out = np.empty(self.n)
        for i, g in enumerate(self.diag_grids):
            out[i] = 1.0 / self.couplings[i] - g.integrate(bessel_k0(nu * g.distances)) / (FOUR_PI * self.lengths[i])
        return out

    def diagonal_derivative(self, E):
        nu = np.sqrt(-E)
        out = np.empty(self.n)
        for i, g in enumerate(self.diag_grids):
            r = g.distances
            out[i] = -g.integrate(r * bessel_k1(nu * r)) / (2.0 * nu * FOUR_PI * self.lengths[i])
        return out

    def pair_scaled(self, E, i, j):
        nu = np.sqrt(-E)
        g = self.off_grids[(i, j)]
        r = g.distances
        r_min = float(r.min())
        values = bessel_k0e(nu * r) * np.exp(-nu * (r - r_min))
        return -g.integrate(values) / (FOUR_PI * self._norm(i, j)), nu * r_min

    def pair_derivative(self, E, i, j):
        nu = np.sqrt(-E)
        r = self.off_grids[(i, j)].distances
        return float(-self.off_grids[(i, j)].integrate(r * bessel_k1(nu * r))
                     / (2.0 * nu * FOUR_PI * self._norm(i, j)))

    def bound(self, E):
        nu = np.sqrt(-E)
        d = self.model.min_separation
        return float(max(self._norm(i, j) for i, j in self.pairs()) * bessel_k0(nu * d) / TWO_PI)


class Curve3DKernel(CurveKernel):
    """Renormalized δ-interactions supported on space curves"""

    def __init__(self, model):
        super().__init__(model)
        self.mu = np.sqrt(-np.array(model.binding_energies))

    def diagonal(self, E):
        # renormalized kernel (e^{−μr} − e^{−νr})/r, bounded as r → 0
        nu = np.sqrt(-E)
        out = np.empty(self.n)
        for i, g in enumerate(self.diag_grids):
            r = g.distances
            values = np.exp(-self.mu[i] * r) * -np.expm1(-(nu - self.mu[i]) * r) / r
            out[i] = g.integrate(values) / (FOUR_PI * self.lengths[i])
        return out

    def diagonal_derivative(self, E):
        nu = np.sqrt(-E)
        out = np.empty(self.n)
        for i, g in enumerate(self.diag_grids):
            out[i] = -g.integrate(np.exp(-nu * g.distances)) / (8.0 * np.pi * nu * self.lengths[i])
        return out

    def pair_scaled(self, E, i, j):
        nu = np.sqrt(-E)
        g = self.off_grids[(i, j)]
        r = g.distances
        r_min = float(r.min())
        return -g.integrate(np.exp(-nu * (r - r_min)) / r) / (FOUR_PI * self._norm(i, j)), nu * r_min

    def pair_derivative(self, E, i, j):
        nu = np.sqrt(-E)
        g = self.off_grids[(i, j)]
        return float(-g.integrate(np.exp(-nu * g.distances)) / (8.0 * np.pi * nu * self._norm(i, j)))

    def bound(self, E):
        nu = np.sqrt(-E)
        d = self.model.min_separation
        return float(max(self._norm(i, j) for i, j in self.pairs()) * np.exp(-nu * d) / (FOUR_PI * d))


KERNELS = {
    "Point1D": Point1DKernel,
    "Point2D": Point2DKernel,
    "Point3D": Point3DKernel,
    "PointH2": PointH2Kernel,
    "PointH3": PointH3Kernel,
    "Salpeter1D": Salpeter1DKernel,
    "Relativistic2D": Relativistic2DKernel,
    "Curve2D": Curve2DKernel,
    "Curve3D": Curve3DKernel,
}


def kernel_for(model) -> FamilyKernel:
    return KERNELS[model.family.value](model)
