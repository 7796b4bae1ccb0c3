"""
Modified Bessel functions of the second kind, orders 0 and 1, plus their
exponentially scaled forms e^{x}K_ν(x).

The scaled forms are what the principal matrices use internally: every
off-diagonal entry carries an e^{−νd} factor, and keeping it separate
preserves relative accuracy long after K_ν itself underflows.
"""

from typing import Union

import numpy as np
from scipy import special

from ..utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _positive(x: ArrayLike, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} requires x > 0, got {x!r}")
    return arr


def _out(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def bessel_k0(x: ArrayLike) -> ArrayLike:
    """K₀(x) for x > 0; underflows quietly to 0 beyond x ≈ 746"""
    arr = _positive(x, "bessel_k0")
    return _out(special.k0(arr), x)


def bessel_k1(x: ArrayLike) -> ArrayLike:
    """K₁(x) for x > 0; behaves like 1/x near the origin"""
    arr = _positive(x, "bessel_k1")
    return _out(special.k1(arr), x)


def bessel_k0e(x: ArrayLike) -> ArrayLike:
    """Scaled e^{x}K₀(x)"""
    arr = _positive(x, "bessel_k0e")
    return _out(special.k0e(arr), x)


def bessel_k1e(x: ArrayLike) -> ArrayLike:
    """Scaled e^{x}K₁(x)"""
    arr = _positive(x, "bessel_k1e")
    return _out(special.k1e(arr), x)


def log_bessel_k0(x: ArrayLike) -> ArrayLike:
    """ln K₀(x), finite for arguments where K₀ itself underflows"""
    arr = _positive(x, "log_bessel_k0")
    return _out(np.log(special.k0e(arr)) - arr, x)
