"""
Interaction centers: points of flat space ℝⁿ and of hyperbolic space ℍⁿ
(hyperboloid model with curvature −κ²).
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..utils.errors import GeometryError

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class FlatPoint:
    """A center a_i in ℝ¹, ℝ² or ℝ³"""
    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in np.atleast_1d(np.asarray(self.coords, dtype=float)))
        if len(coords) not in (1, 2, 3):
            raise GeometryError(f"flat points live in 1, 2 or 3 dimensions, got {len(coords)}")
        if not all(np.isfinite(coords)):
            raise GeometryError(f"non-finite coordinates {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)

    def distance(self, other: "FlatPoint") -> float:
        if other.dimension != self.dimension:
            raise GeometryError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}")
        return float(np.linalg.norm(self.as_array() - other.as_array()))


def minkowski(x: np.ndarray, y: np.ndarray) -> float:
    """⟨x, y⟩ = −x₀y₀ + Σ xᵢyᵢ"""
    return float(-x[0] * y[0] + np.dot(x[1:], y[1:]))


@dataclass(frozen=True)
class HyperbolicPoint:
    """
    A point of ℍ² or ℍ³ on the upper sheet of the hyperboloid
    ⟨x, x⟩ = −1/κ², x₀ > 0.
    """
    coords: Tuple[float, ...]
    kappa: float = 1.0

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) not in (3, 4):
            raise GeometryError(
                f"hyperboloid coordinates need 3 (ℍ²) or 4 (ℍ³) components, got {len(coords)}")
        if not self.kappa > 0:
            raise GeometryError(f"curvature kappa must be positive, got {self.kappa}")
        x = np.array(coords)
        if not x[0] > 0:
            raise GeometryError("time component of a hyperboloid point must be positive")
        defect = abs(self.kappa ** 2 * minkowski(x, x) + 1.0)
        if defect > NORMALIZATION_TOL * max(1.0, (self.kappa * x[0]) ** 2):
            raise GeometryError(
                f"point {coords} violates the normalization <x,x> = -1/kappa^2 "
                f"(defect {defect:.3e})")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)

    @classmethod
    def from_geodesic_polar(cls, radius: float, direction: Sequence[float],
                            kappa: float = 1.0) -> "HyperbolicPoint":
        """
        Point at geodesic distance ``radius`` from the origin
        (1/κ, 0, …, 0) along the unit ``direction``.
        """
        u = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            raise GeometryError("direction must be a nonzero vector")
        u = u / norm
        x0 = np.cosh(kappa * radius) / kappa
        spatial = np.sinh(kappa * radius) / kappa * u
        return cls(tuple([x0, *spatial]), kappa)


def geodesic_distance(p: HyperbolicPoint, q: HyperbolicPoint) -> float:
    """
    Geodesic distance d = (1/κ)·arccosh(−κ²⟨p, q⟩).

    Evaluated through the equivalent chord form
    d = (2/κ)·arcsinh(κ·√⟨p−q, p−q⟩ / 2), which stays accurate for close
    points.

    Raises:
        GeometryError: curvatures or dimensions differ.
    """
    if p.kappa != q.kappa:
        raise GeometryError(f"curvature mismatch: {p.kappa} vs {q.kappa}")
    if p.dimension != q.dimension:
        raise GeometryError(f"dimension mismatch: {p.dimension} vs {q.dimension}")
    delta = p.as_array() - q.as_array()
    chord2 = max(0.0, minkowski(delta, delta))
    return float(2.0 / p.kappa * np.arcsinh(0.5 * p.kappa * np.sqrt(chord2)))
