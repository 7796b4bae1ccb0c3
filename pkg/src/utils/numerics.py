"""
Small numerical helpers shared by the model and solver layers:
adaptive quadrature with a hard failure mode, bracketed root finding,
and Richardson-extrapolated central differences.
"""

import logging
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError

logger = logging.getLogger(__name__)

QUAD_LIMIT = 400
ROOT_MAXITER = 200


def adaptive_quad(func: Callable[[float], float], lower: float, upper: float,
                  rel_tol: float = 1e-12, abs_tol: float = 0.0,
                  points: Optional[Sequence[float]] = None,
                  what: str = "integral") -> float:
    """
    Integrate ``func`` over [lower, upper] with QUADPACK.

    Args:
        func: integrand
        lower, upper: limits (upper may be ``np.inf`` when ``points`` is None)
        rel_tol, abs_tol: requested tolerances
        points: interior break points for finite intervals
        what: label used in the failure message

    Returns:
        The integral value.

    Raises:
        ConvergenceError: QUADPACK reports that the subdivision budget ran out
            or the requested accuracy could not be met.
    """
    kwargs = dict(epsabs=abs_tol, epsrel=rel_tol, limit=QUAD_LIMIT, full_output=1)
    if points is not None and np.isfinite(upper):
        inner = [p for p in points if lower < p < upper]
        if inner:
            kwargs["points"] = inner
    result = integrate.quad(func, lower, upper, **kwargs)
    value, error = result[0], result[1]
    if len(result) > 3:
        # a fourth element is only present when QUADPACK flags a problem
        tolerance = max(abs_tol, rel_tol * abs(value))
        if error > 100.0 * tolerance:
            raise ConvergenceError(
                f"{what}: adaptive subdivision exceeded budget "
                f"(estimate {value:.6e}, error {error:.3e})")
        logger.debug("%s: quad warning ignored, error %.3e within tolerance", what, error)
    return float(value)


def find_root(func: Callable[[float], float], lo: float, hi: float,
              xtol: float = 0.0, rtol: float = 1e-15, what: str = "root") -> float:
    """
    Bracketed root of ``func`` on [lo, hi] by Brent's method.

    The bracket must show a sign change. ``xtol`` defaults to a value
    relative to the bracket scale.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise ConvergenceError(f"{what}: no sign change on [{lo!r}, {hi!r}]")
    if xtol <= 0.0:
        xtol = 1e-30 * max(1.0, abs(lo), abs(hi))
    try:
        root, info = optimize.brentq(func, lo, hi, xtol=xtol, rtol=max(rtol, 4 * np.finfo(float).eps),
                                     maxiter=ROOT_MAXITER, full_output=True, disp=False)
    except RuntimeError as exc:
        raise ConvergenceError(f"{what}: {exc}") from exc
    if not info.converged:
        raise ConvergenceError(f"{what}: not converged after {info.iterations} iterations")
    return float(root)


def richardson_derivative(func: Callable[[float], np.ndarray], x: float,
                          step: Optional[float] = None,
                          upper: Optional[float] = None) -> np.ndarray:
    """
    Central difference with one Richardson step: (4·D(h/2) − D(h))/3.

    ``upper`` is an exclusive bound on the argument (a threshold); the step
    is shrunk so that x + h stays below it.
    """
    h = step if step is not None else 1e-6 * max(1.0, abs(x))
    if upper is not None:
        h = min(h, 0.25 * (upper - x))
    d_h = (np.asarray(func(x + h)) - np.asarray(func(x - h))) / (2.0 * h)
    half = 0.5 * h
    d_half = (np.asarray(func(x + half)) - np.asarray(func(x - half))) / (2.0 * half)
    return (4.0 * d_half - d_h) / 3.0
