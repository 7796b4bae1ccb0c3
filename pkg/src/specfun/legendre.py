"""
Legendre function of the second kind Q_v(cosh α) from its exponential
series

    Q_v(cosh α) = Σ_k Γ(k+v+1)Γ(k+½) / (Γ(k+v+3/2)Γ(k+1)) · e^{−α(2k+v+1)}.

The coefficients decrease monotonically in k, so the remainder after any
term is bounded by the next term times 1/(1 − e^{−2α}).
"""

import logging
from typing import Tuple

import numpy as np

from ..utils.errors import ConvergenceError, DomainError
from .accuracy import Accuracy, DEFAULT_ACCURACY
from .gamma import gamma_ratio

logger = logging.getLogger(__name__)

MAX_TERMS = 10_000


def legendre_q_scaled(v: float, alpha: float, terms: int = MAX_TERMS,
                      accuracy: Accuracy = DEFAULT_ACCURACY) -> Tuple[float, float]:
    """
    Q_v(cosh α) as (mantissa, exponent) with Q = mantissa·e^{−exponent}.

    Args:
        v: degree, v > −1
        alpha: α > 0 (geodesic separation times curvature)
        terms: maximum number of series terms
        accuracy: truncation tolerances, applied to the scaled sum

    Returns:
        (mantissa, exponent) where exponent = α(v+1).
    """
    if not v > -1.0:
        raise DomainError(f"legendre_q requires v > -1, got {v!r}")
    if not alpha > 0.0:
        raise DomainError(f"legendre_q requires cosh(alpha) > 1 (alpha > 0), got alpha={alpha!r}")

    ratio = np.exp(-2.0 * alpha)
    tail_factor = 1.0 / -np.expm1(-2.0 * alpha)
    coefficient = gamma_ratio(0, v)
    term = coefficient
    total = 0.0
    for k in range(terms):
        total += term
        coefficient *= (k + v + 1.0) * (k + 0.5) / ((k + v + 1.5) * (k + 1.0))
        next_term = coefficient * ratio ** (k + 1)
        tol = accuracy.threshold(total)
        if next_term < tol and next_term * tail_factor < tol:
            return total, alpha * (v + 1.0)
        term = next_term
    raise ConvergenceError(
        f"legendre_q series for v={v}, alpha={alpha} not converged in {terms} terms")


def legendre_q(v: float, cosh_a: float, terms: int = MAX_TERMS,
               accuracy: Accuracy = DEFAULT_ACCURACY) -> float:
    """
    Q_v(cosh α) for cosh α > 1 and v > −1.

    Raises:
        DomainError: cosh_a ≤ 1 (coinciding points) or v ≤ −1.
        ConvergenceError: the series needs more than ``terms`` terms.
    """
    if not cosh_a > 1.0:
        raise DomainError(f"legendre_q requires cosh_a > 1, got {cosh_a!r}")
    mantissa, exponent = legendre_q_scaled(v, float(np.arccosh(cosh_a)), terms, accuracy)
    return float(mantissa * np.exp(-exponent))
