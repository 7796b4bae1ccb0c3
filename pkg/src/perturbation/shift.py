#!/usr/bin/env python3
"""
📉 TUNNELING SHIFTS
============================================================
First-order shift of a bound-state energy away from its isolated
value E_B^k, read off the diagonally dominant principal matrix:

    δE^k ≈ (∂Φ_kk/∂E)^{−1} Σ_{l≠k} Φ_kl² / Φ_ll,   all at E = E_B^k.

Everything is accumulated in the log domain so that shifts of order
e^{−700} keep full relative accuracy.
"""

import logging
from dataclasses import dataclass, replace
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..models import Family, ModelSpec, rel2d_saddle_scaled
from ..models.families import salpeter_offdiag_asymptotic, salpeter_phi, salpeter_phi_prime
from ..specfun import digamma, gamma_ratio, trigamma
from ..utils.errors import DegeneracyError, DomainError, UnsupportedFamilyError

logger = logging.getLogger(__name__)

RESONANCE_RTOL = 1e-8
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class SplittingReport:
    """
    Perturbative shift of level k.

    Attributes:
        branch: level index k (center whose isolated energy is E_B^k)
        zeroth_order: E_B^k
        shift: δE^k (0.0 on underflow; see log_abs_shift)
        contributions: (l, term) pairs summing to the shift
        dominance_ratio: max_{l≠k}|Φ_kl| / min_{l≠k}|Φ_ll| at E_B^k
        log_abs_shift: ln|δE^k| (−inf for a single center)
        oracle_energy: reference energy of the level, when known
        relative_error: |δE − δE_oracle| / |δE_oracle|, when an oracle is set
    """
    branch: int
    zeroth_order: float
    shift: float
    contributions: Tuple[Tuple[int, float], ...]
    dominance_ratio: float
    log_abs_shift: float
    oracle_energy: Optional[float] = None
    relative_error: Optional[float] = None

    @property
    def energy(self) -> float:
        return self.zeroth_order + self.shift

    @property
    def sign(self) -> float:
        return float(np.sign(self.shift)) if self.shift != 0.0 else 0.0

    def with_oracle(self, oracle_energy: float) -> "SplittingReport":
        exact_shift = oracle_energy - self.zeroth_order
        error = abs(self.shift - exact_shift) / abs(exact_shift) if exact_shift != 0.0 else float("inf")
        return replace(self, oracle_energy=float(oracle_energy), relative_error=float(error))

    def to_dict(self) -> dict:
        return {
            'branch': self.branch,
            'zeroth_order': self.zeroth_order,
            'shift': self.shift,
            'log_abs_shift': self.log_abs_shift,
            'dominance_ratio': self.dominance_ratio,
            'contributions': [{'partner': l, 'term': t} for l, t in self.contributions],
            'oracle_energy': self.oracle_energy,
            'relative_error': self.relative_error,
        }


def ensure_nondegenerate(model: ModelSpec) -> np.ndarray:
    """Isolated energies E_B^i, or DegeneracyError when two coincide"""
    energies = model.principal.binding_energies
    for i, j in combinations(range(model.size), 2):
        scale = max(abs(energies[i]), abs(energies[j]), 1e-300)
        if abs(energies[i] - energies[j]) <= DEGENERACY_RTOL * scale:
            raise DegeneracyError(f"centers {i} and {j} share E_B = {energies[i]!r}; "
                                  f"use degenerate_splitting for identical centers")
    return energies


def check_branch(model: ModelSpec, k: int) -> None:
    if not 0 <= k < model.size:
        raise DomainError(f"branch {k} out of range for {model.size} center(s)")


def _combine(log_terms: List[float], signs: List[float]) -> Tuple[float, float]:
    """ln|Σ s_i e^{t_i}| and its sign"""
    if not log_terms:
        return -np.inf, 0.0
    value, sign = logsumexp(np.array(log_terms), b=np.array(signs), return_sign=True)
    return float(value), float(sign)


def perturbative_shift(model: ModelSpec, k: int) -> SplittingReport:
    """
    δE^k from the general first-order formula.

    Raises:
        DegeneracyError: two isolated energies coincide, or a partner
            diagonal Φ_ll(E_B^k) vanishes (resonant partner level).
    """
    check_branch(model, k)
    energies = ensure_nondegenerate(model)
    pm = model.principal
    e_k = float(energies[k])
    if model.size == 1:
        return SplittingReport(k, e_k, 0.0, (), 0.0, -np.inf)

    diag = pm.diagonal(e_k)
    d_kk = float(pm.diagonal_derivative(e_k)[k])
    log_off = pm.log_abs_offdiag(e_k)[k]
    scale = abs(d_kk) * (pm.threshold - e_k)

    partners = [l for l in range(model.size) if l != k]
    log_terms, signs, contributions = [], [], []
    for l in partners:
        if abs(diag[l]) < RESONANCE_RTOL * scale:
            raise DegeneracyError(f"partner level {l} is resonant with E_B^{k}: "
                                  f"|Φ_ll(E_B^k)| = {abs(diag[l]):.3e}")
        log_term = 2.0 * log_off[l] - np.log(abs(diag[l])) - np.log(abs(d_kk))
        sign = float(np.sign(diag[l]) * np.sign(d_kk))
        log_terms.append(log_term)
        signs.append(sign)
        contributions.append((l, sign * float(np.exp(log_term))))

    log_abs, sign = _combine(log_terms, signs)
    shift = sign * float(np.exp(log_abs))
    dominance = float(np.exp(max(log_off[l] for l in partners)) / min(abs(diag[l]) for l in partners))
    logger.debug(f"level {k}: δE = {shift:.6e} (ln|δE| = {log_abs:.6f}), dominance {dominance:.3e}")
    return SplittingReport(k, e_k, shift, tuple(contributions), dominance, log_abs)


# -------------------------------------------------------------- closed forms


def _terms_point1d(model, k, e):
    nu = np.sqrt(-e[k])
    out = []
    for l in range(model.size):
        if l == k:
            continue
        phi_ll = 1.0 / model.couplings[l] - 1.0 / (2.0 * nu)
        d = model.distances[k, l]
        out.append((np.log(nu) - 2.0 * nu * d - np.log(abs(phi_ll)), -np.sign(phi_ll)))
    return out


def _terms_point2d(model, k, e):
    nu = np.sqrt(-e[k])
    out = []
    for l in range(model.size):
        if l == k:
            continue
        d = model.distances[k, l]
        log_ratio = np.log(e[k] / e[l])
        out.append((np.log(2.0 * np.pi * nu) - 2.0 * nu * d - np.log(d) - np.log(abs(log_ratio)),
                    -np.sign(log_ratio)))
    return out


def _terms_point3d(model, k, e):
    nu = np.sqrt(-e[k])
    out = []
    for l in range(model.size):
        if l == k:
            continue
        d = model.distances[k, l]
        gap = nu - np.sqrt(-e[l])
        out.append((np.log(2.0 * nu) - 2.0 * nu * d - 2.0 * np.log(d) - np.log(abs(gap)), -np.sign(gap)))
    return out


def _terms_h3(model, k, e):
    kappa = model.kappa
    q = np.sqrt(kappa ** 2 - e)
    out = []
    for l in range(model.size):
        if l == k:
            continue
        d = model.distances[k, l]
        gap = q[k] - q[l]
        out.append((np.log(8.0 * kappa ** 2 * q[k]) - 2.0 * d * (kappa + q[k]) - np.log(abs(gap)),
                    -np.sign(gap)))
    return out


def _terms_h2(model, k, e):
    kappa = model.kappa
    s = np.sqrt(0.25 - e / kappa ** 2)
    v = s[k] - 0.5
    psi_k = digamma(0.5 + s[k])
    prefactor = 2.0 * kappa ** 2 * s[k] / trigamma(0.5 + s[k])
    log_c0 = np.log(gamma_ratio(0, v))
    out = []
    for l in range(model.size):
        if l == k:
            continue
        alpha = kappa * model.distances[k, l]
        gap = psi_k - digamma(0.5 + s[l])
        log_q2 = 2.0 * (log_c0 - alpha * (v + 1.0))
        out.append((np.log(prefactor) + log_q2 - np.log(abs(gap)), -np.sign(gap)))
    return out


def _terms_salpeter(model, k, e):
    m = model.mass
    if e[k] == 0.0:
        raise DomainError("the Salpeter closed form needs E_B^k ≠ 0")
    phi_k = salpeter_phi(m, e[k])
    log_inv_dphi = -np.log(salpeter_phi_prime(m, e[k]))
    out = []
    for l in range(model.size):
        if l == k:
            continue
        amplitude = salpeter_offdiag_asymptotic(m, e[k], model.distances[k, l])
        gap = phi_k - salpeter_phi(m, e[l])
        out.append((log_inv_dphi + 2.0 * np.log(abs(amplitude)) - np.log(abs(gap)), np.sign(gap)))
    return out


def _terms_rel2d(model, k, e):
    m = model.mass
    out = []
    for l in range(model.size):
        if l == k:
            continue
        mantissa, exponent = rel2d_saddle_scaled(m, e[k], model.distances[k, l])
        log_ratio = np.log((m - e[k]) / (m - e[l]))
        out.append((np.log(4.0 * np.pi ** 2 * (m - e[k])) + 2.0 * (np.log(abs(mantissa)) - exponent)
                    - np.log(abs(log_ratio)), -np.sign(log_ratio)))
    return out


_CLOSED_FORMS = {
    Family.POINT_1D: _terms_point1d,
    Family.POINT_2D: _terms_point2d,
    Family.POINT_3D: _terms_point3d,
    Family.POINT_H3: _terms_h3,
    Family.POINT_H2: _terms_h2,
    Family.SALPETER_1D: _terms_salpeter,
    Family.RELATIVISTIC_2D: _terms_rel2d,
}


def family_shift_log(model: ModelSpec, k: int) -> Tuple[float, float]:
    """(ln|δE^k|, sign) of the family's large-separation closed form"""
    check_branch(model, k)
    terms = _CLOSED_FORMS.get(model.family)
    if terms is None:
        raise UnsupportedFamilyError(f"no closed-form shift for {model.family.value}; "
                                     f"use perturbative_shift or curve_shift")
    energies = ensure_nondegenerate(model)
    pairs = terms(model, k, np.asarray(energies, dtype=float))
    return _combine([t for t, _ in pairs], [s for _, s in pairs])


def family_shift_closed_form(model: ModelSpec, k: int) -> float:
    """
    Large-separation closed form of δE^k.

    Each partner contributes Φ_kl²/Φ_ll with Φ_kl replaced by its
    leading asymptotic (exact for Point1D, Point3D and ℍ³ apart from the
    sinh factor). Deeper levels move down.

    Raises:
        UnsupportedFamilyError: curve families (see curve_shift).
        DegeneracyError: equal isolated energies.
    """
    log_abs, sign = family_shift_log(model, k)
    return sign * float(np.exp(log_abs))
