"""
Quadrature grids for the double integrals ∬ ds ds′ k(|γ_i(s) − γ_j(s′)|)
that make up curve-supported principal matrices.

Off-diagonal blocks use a tensor Gauss–Legendre rule. Diagonal blocks are
written in ξ = (s′+s)/2, η = (s′−s)/2 and use the symmetry of the kernel
to integrate over η ≥ 0 only; the logarithmic singularity at η = 0 is
removed by the graded substitution η = η₀u⁶ on [0, η₀].
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .curves import Curve, ensure_disjoint

GRADING_POWER = 6
CHORD_FALLBACK = 1e-6

PLAIN_TENSOR = "plain-tensor"
REGULARIZED_LOG = "regularized-log"


def gauss_legendre(order: int, lower: float, upper: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights mapped to [lower, upper]"""
    if order < 1:
        raise ValueError(f"quadrature order must be positive, got {order}")
    x, w = leggauss(order)
    half = 0.5 * (upper - lower)
    return lower + half * (x + 1.0), half * w


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Nodes (s, s′, weight) on Γ_i × Γ_j.

    ``distances`` holds |γ_i(s) − γ_j(s′)| for every node; on diagonal grids
    pairs closer than 1e-6·L along the curve use the arc separation instead
    of the chord, which agrees to second order.
    """
    s: np.ndarray
    s_prime: np.ndarray
    weights: np.ndarray
    diagonal_scheme: str
    lengths: Tuple[float, float]
    distances: np.ndarray = field(repr=False)

    @property
    def nodes(self) -> np.ndarray:
        return np.column_stack([self.s, self.s_prime, self.weights])

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def weight_sum(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def build_offdiag_grid(c1: Curve, c2: Curve, order: int) -> QuadratureGrid:
    """
    Tensor Gauss–Legendre grid of ``order`` nodes per curve.

    Raises:
        OverlapError: the curves touch.
    """
    ensure_disjoint(c1, c2)
    s1, w1 = gauss_legendre(order, 0.0, c1.length)
    s2, w2 = gauss_legendre(order, 0.0, c2.length)
    S, S2 = np.meshgrid(s1, s2, indexing="ij")
    W = np.outer(w1, w2)
    s, s_prime = S.ravel(), S2.ravel()
    r = np.linalg.norm(c1.point_at(s) - c2.point_at(s_prime), axis=-1)
    return QuadratureGrid(s, s_prime, W.ravel(), PLAIN_TENSOR, (c1.length, c2.length), r)


def _eta_rule(order: int, eta0: float, eta_max: float) -> Tuple[np.ndarray, np.ndarray]:
    u, wu = gauss_legendre(order, 0.0, 1.0)
    eta_near = eta0 * u ** GRADING_POWER
    w_near = eta0 * GRADING_POWER * u ** (GRADING_POWER - 1) * wu
    eta_far, w_far = gauss_legendre(order, eta0, eta_max)
    return np.concatenate([eta_near, eta_far]), np.concatenate([w_near, w_far])


def build_diag_grid(c: Curve, order: int) -> QuadratureGrid:
    """
    Singularity-adapted grid for ∬_{Γ×Γ} ds ds′ k(s, s′) with symmetric k.

    Open curves: ∬ = 4∫₀^{L/2}dη ∫_η^{L−η}dξ k(ξ−η, ξ+η), η₀ = L/4.
    Closed curves: ∬ = 4∫₀^{L}ds ∫₀^{L/4}dη k(s, s+2η) with a periodic
    trapezoid rule in s, η₀ = L/8.
    """
    L = c.length
    if c.closed:
        eta, w_eta = _eta_rule(order, L / 8.0, L / 4.0)
        n_xi = 2 * order
        base = np.arange(n_xi) * (L / n_xi)
        S = np.repeat(base[None, :], eta.size, axis=0)
        S2 = S + 2.0 * eta[:, None]
        W = 4.0 * w_eta[:, None] * np.full(n_xi, L / n_xi)[None, :]
        s, s_prime = S.ravel(), np.mod(S2.ravel(), L)
    else:
        eta, w_eta = _eta_rule(order, L / 4.0, L / 2.0)
        x, wx = leggauss(order)
        span = L - 2.0 * eta
        XI = eta[:, None] + 0.5 * span[:, None] * (x[None, :] + 1.0)
        W = 4.0 * w_eta[:, None] * (0.5 * span[:, None] * wx[None, :])
        s, s_prime = (XI - eta[:, None]).ravel(), (XI + eta[:, None]).ravel()

    separation = np.repeat(2.0 * eta, W.shape[1])
    chord = np.linalg.norm(c.point_at(s) - c.point_at(s_prime), axis=-1)
    r = np.where(separation < CHORD_FALLBACK * L, separation, chord)
    return QuadratureGrid(s, s_prime, W.ravel(), REGULARIZED_LOG, (L, L), r)
