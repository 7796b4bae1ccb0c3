"""
Gamma-family functions: Γ, ψ (digamma) and ψ⁽¹⁾ (trigamma).
"""

import numpy as np
from scipy import special

from ..utils.errors import DomainError


def digamma(w: float) -> float:
    """ψ(w) for w > 0"""
    if not w > 0:
        raise DomainError(f"digamma requires w > 0, got {w!r}")
    return float(special.psi(w))


def trigamma(w: float) -> float:
    """ψ⁽¹⁾(w) for w > 0"""
    if not w > 0:
        raise DomainError(f"trigamma requires w > 0, got {w!r}")
    return float(special.polygamma(1, w))


def gamma_fn(x: float) -> float:
    """
    Γ(x).

    Raises:
        DomainError: x is a nonpositive integer (pole) or not finite.
    """
    if not np.isfinite(x):
        raise DomainError(f"gamma_fn requires a finite argument, got {x!r}")
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"gamma_fn has a pole at {x!r}")
    return float(special.gamma(x))


def gamma_ratio(k: int, v: float) -> float:
    """
    Γ(k+v+1)Γ(k+½) / (Γ(k+v+3/2)Γ(k+1)), the coefficient of the
    exponential Legendre-Q series; computed through log-gamma.
    """
    return float(np.exp(special.gammaln(k + v + 1.0) + special.gammaln(k + 0.5)
                        - special.gammaln(k + v + 1.5) - special.gammaln(k + 1.0)))
