"""
Principal branch of the Lambert W function on the real axis.
"""

import math

import numpy as np
from scipy import special

from ..utils.errors import DomainError

BRANCH_POINT = -math.exp(-1.0)
MAX_HALLEY = 50


def lambert_w0(x: float) -> float:
    """
    Principal-branch W₀(x): the w ≥ −1 with w·e^w = x.

    The starting value comes from scipy.special.lambertw and is polished
    with Halley steps until the update stalls.

    Raises:
        DomainError: x < −1/e or x not finite.
    """
    if not np.isfinite(x):
        raise DomainError(f"lambert_w0 requires a finite argument, got {x!r}")
    slack = 4.0 * np.finfo(float).eps
    if x < BRANCH_POINT - slack:
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x <= BRANCH_POINT:
        return -1.0
    if x == 0.0:
        return 0.0

    w = float(special.lambertw(x, 0).real)
    if abs(w + 1.0) < 1e-4:
        # Halley's denominator vanishes at the branch point
        return w
    for _ in range(MAX_HALLEY):
        ew = math.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 0.7e-16 * (2.0 + abs(w)):
            break
    return w
