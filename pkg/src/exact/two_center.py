#!/usr/bin/env python3
"""
🔬 TWO-CENTER REFERENCE SOLUTIONS
============================================================
Two identical point interactions a distance 2a apart. In 1D and 3D
the secular equations reduce to w·e^w = ±x and are solved by the
principal Lambert-W branch; in 2D the equation ln(ν/μ) = ±K₀(2aν)
is solved by bracketed root finding in ε = ln(ν/μ).

Naming: E_minus is the symmetric (ground) level from the W(+x)
branch, E_plus the antisymmetric one; splitting = E_plus − E_minus.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..specfun import bessel_k0, lambert_w0
from ..utils.errors import DomainError, NoSecondRootError, SingleStateError
from ..utils.numerics import find_root

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
EULER_GAMMA = float(np.euler_gamma)
MAX_EXPANSIONS = 80
LOG_FLOOR = 700.0


@dataclass(frozen=True)
class TwoCenterExact:
    """
    Attributes:
        family: "Point1D", "Point2D" or "Point3D"
        parameter: λ (1D) or μ = √|E_B| (2D, 3D)
        half_separation: a
        e_minus: symmetric ground energy
        e_plus: antisymmetric energy
        splitting: e_plus − e_minus, computed without cancellation
        method: "lambert" or "bisection"
    """
    family: str
    parameter: float
    half_separation: float
    e_minus: float
    e_plus: float
    splitting: float
    method: str = "lambert"

    def to_dict(self) -> dict:
        return {
            'family': self.family,
            'parameter': self.parameter,
            'half_separation': self.half_separation,
            'e_minus': self.e_minus,
            'e_plus': self.e_plus,
            'splitting': self.splitting,
            'method': self.method,
        }


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


def _from_nus(family, parameter, a, nu_sym, nu_anti, method) -> TwoCenterExact:
    splitting = (nu_sym - nu_anti) * (nu_sym + nu_anti)
    return TwoCenterExact(family, parameter, a, -nu_sym ** 2, -nu_anti ** 2, splitting, method)


def exact_two_center_1d(lam: float, a: float, method: str = "lambert") -> TwoCenterExact:
    """
    ν± = λ/2 + W(±aλe^{−aλ})/(2a), E = −ν².

    Raises:
        SingleStateError: aλ ≤ 1 (only the symmetric state is bound).
    """
    lam = _positive("lambda", lam)
    a = _positive("a", a)
    if not a * lam > 1.0:
        raise SingleStateError(f"aλ = {a * lam:g} ≤ 1: only the symmetric state is bound")

    def residual_sym(nu):
        return 2.0 * nu / lam - 1.0 - np.exp(-2.0 * a * nu)

    def residual_anti(nu):
        return 2.0 * nu / lam + np.expm1(-2.0 * a * nu)

    if method == "bisection":
        nu_sym = find_root(residual_sym, 0.5 * lam, lam, what="1D symmetric level")
        lo = 0.5 * lam
        for _ in range(MAX_EXPANSIONS):
            lo *= 0.5
            if residual_anti(lo) < 0.0:
                break
        else:
            raise SingleStateError("antisymmetric 1D level too close to threshold to bracket")
        nu_anti = find_root(residual_anti, lo, 0.5 * lam, what="1D antisymmetric level")
        return _from_nus("Point1D", lam, a, nu_sym, nu_anti, method)

    x = a * lam * np.exp(-a * lam)
    w_plus, w_minus = lambert_w0(x), lambert_w0(-x)
    nu_sym = 0.5 * lam + w_plus / (2.0 * a)
    nu_anti = 0.5 * lam + w_minus / (2.0 * a)
    splitting = (w_plus - w_minus) / (2.0 * a) * (nu_sym + nu_anti)
    return TwoCenterExact("Point1D", lam, a, -nu_sym ** 2, -nu_anti ** 2, splitting, "lambert")


def exact_two_center_3d(mu: float, a: float, method: str = "lambert") -> TwoCenterExact:
    """
    ν± = μ + W(±e^{−2aμ})/(2a), the roots of (ν − μ) ∓ e^{−2aν}/(2a).

    The Lambert-W roots are substituted back; a residual above 1e-10
    falls back to bracketed root finding.

    Raises:
        SingleStateError: 2aμ ≤ 1.
    """
    mu = _positive("mu", mu)
    a = _positive("a", a)
    if not 2.0 * a * mu > 1.0:
        raise SingleStateError(f"2aμ = {2.0 * a * mu:g} ≤ 1: only the symmetric state is bound")

    def residual(nu, sign):
        return nu - mu - sign * np.exp(-2.0 * a * nu) / (2.0 * a)

    def bisection():
        nu_sym = find_root(lambda nu: residual(nu, 1.0), mu, mu + 1.0 / (2.0 * a), what="3D symmetric level")
        nu_anti = find_root(lambda nu: residual(nu, -1.0), 1e-300, mu, what="3D antisymmetric level")
        return _from_nus("Point3D", mu, a, nu_sym, nu_anti, "bisection")

    if method == "bisection":
        return bisection()

    x = np.exp(-2.0 * a * mu)
    w_plus, w_minus = lambert_w0(x), lambert_w0(-x)
    nu_sym = mu + w_plus / (2.0 * a)
    nu_anti = mu + w_minus / (2.0 * a)
    worst = max(abs(residual(nu_sym, 1.0)) / nu_sym, abs(residual(nu_anti, -1.0)) / nu_anti)
    if worst > RESIDUAL_TOL:
        logger.warning(f"⚠️ Lambert-W residual {worst:.3e} above {RESIDUAL_TOL}; using bisection")
        return bisection()
    splitting = (w_plus - w_minus) / (2.0 * a) * (nu_sym + nu_anti)
    return TwoCenterExact("Point3D", mu, a, -nu_sym ** 2, -nu_anti ** 2, splitting, "lambert")


def numeric_two_center_2d(mu: float, a: float) -> TwoCenterExact:
    """
    Roots of ln(ν/μ) = ±K₀(2aν), solved for ε = ln(ν/μ).

    Raises:
        NoSecondRootError: aμ ≤ e^{−γ}, where the antisymmetric equation
            has no sign change.
    """
    mu = _positive("mu", mu)
    a = _positive("a", a)
    x0 = 2.0 * a * mu

    def f(eps, sign):
        return eps - sign * bessel_k0(x0 * np.exp(eps))

    k0 = bessel_k0(x0)
    eps_sym = find_root(lambda e: f(e, 1.0), 0.0, k0, what="2D symmetric level")

    if not a * mu > np.exp(-EULER_GAMMA):
        raise NoSecondRootError(f"aμ = {a * mu:g} ≤ e^(-γ): the antisymmetric branch has no root")
    lo = -max(k0, 1.0)
    while f(lo, -1.0) >= 0.0:
        lo *= 2.0
        if lo < -LOG_FLOOR:
            raise NoSecondRootError("antisymmetric 2D branch: no sign change found")
    eps_anti = find_root(lambda e: f(e, -1.0), lo, 0.0, what="2D antisymmetric level")

    e_minus = -mu ** 2 * np.exp(2.0 * eps_sym)
    e_plus = -mu ** 2 * np.exp(2.0 * eps_anti)
    splitting = mu ** 2 * np.exp(2.0 * eps_anti) * np.expm1(2.0 * (eps_sym - eps_anti))
    return TwoCenterExact("Point2D", mu, a, float(e_minus), float(e_plus), float(splitting), "bisection")
