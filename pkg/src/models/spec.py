#!/usr/bin/env python3
"""
📐 MODEL SPECIFICATION
============================================================
ModelSpec is the complete description of one singular-interaction
system: the family, the interaction supports (points or curves) and
the per-center parameters. Every invariant is checked on construction
so downstream code can evaluate Φ(E) without re-validating.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from ..geometry import Curve, FlatPoint, HyperbolicPoint, ensure_disjoint, geodesic_distance
from ..utils.errors import DegeneracyError, ModelError, OverlapError, SingularityError

logger = logging.getLogger(__name__)

Center = Union[FlatPoint, HyperbolicPoint, Curve]

DEGENERACY_RTOL = 1e-12


class Family(str, Enum):
    """Model families with a principal matrix"""
    POINT_1D = "Point1D"
    POINT_2D = "Point2D"
    POINT_3D = "Point3D"
    POINT_H2 = "PointH2"
    POINT_H3 = "PointH3"
    SALPETER_1D = "Salpeter1D"
    RELATIVISTIC_2D = "Relativistic2D"
    CURVE_2D = "Curve2D"
    CURVE_3D = "Curve3D"

    @property
    def is_curve(self) -> bool:
        return self in (Family.CURVE_2D, Family.CURVE_3D)

    @property
    def is_hyperbolic(self) -> bool:
        return self in (Family.POINT_H2, Family.POINT_H3)

    @property
    def is_relativistic(self) -> bool:
        return self in (Family.SALPETER_1D, Family.RELATIVISTIC_2D)

    @property
    def is_flat_point(self) -> bool:
        return self in (Family.POINT_1D, Family.POINT_2D, Family.POINT_3D)

    @property
    def uses_couplings(self) -> bool:
        """Bare couplings λ_i (otherwise renormalized binding energies E_B^i)"""
        return self in (Family.POINT_1D, Family.CURVE_2D)

    @property
    def dimension(self) -> int:
        return {
            Family.POINT_1D: 1, Family.POINT_2D: 2, Family.POINT_3D: 3,
            Family.POINT_H2: 2, Family.POINT_H3: 3,
            Family.SALPETER_1D: 1, Family.RELATIVISTIC_2D: 2,
            Family.CURVE_2D: 2, Family.CURVE_3D: 3,
        }[self]


def _as_tuple(values: Optional[Sequence[float]]) -> Optional[Tuple[float, ...]]:
    if values is None:
        return None
    return tuple(float(v) for v in values)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    One system of N δ-interactions.

    Attributes:
        family: model family
        centers: FlatPoint, HyperbolicPoint or Curve per interaction
        couplings: λ_i (Point1D, Curve2D)
        binding_energies: E_B^i (all renormalized families)
        mass: m (Salpeter1D, Relativistic2D)
        kappa: κ (PointH2, PointH3)
        distance_matrix: geodesic distances for hyperbolic models given without coordinates
        degenerate: allow equal parameters (two-center degenerate path)
        quad_order: Gauss order for curve quadrature
    """
    family: Family
    centers: Tuple[Center, ...] = ()
    couplings: Optional[Tuple[float, ...]] = None
    binding_energies: Optional[Tuple[float, ...]] = None
    mass: Optional[float] = None
    kappa: Optional[float] = None
    distance_matrix: Optional[Tuple[Tuple[float, ...], ...]] = None
    degenerate: bool = False
    quad_order: int = 32
    distances: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError:
            raise ModelError(f"unknown model family {self.family!r}; "
                             f"expected one of {[f.value for f in Family]}") from None
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "centers", tuple(self.centers))
        object.__setattr__(self, "couplings", _as_tuple(self.couplings))
        object.__setattr__(self, "binding_energies", _as_tuple(self.binding_energies))
        if self.distance_matrix is not None:
            object.__setattr__(self, "distance_matrix",
                               tuple(tuple(float(x) for x in row) for row in self.distance_matrix))

        self._check_parameters()
        object.__setattr__(self, "distances", self._pairwise_distances())
        self._check_degeneracy()

    # ------------------------------------------------------------------ sizes

    @property
    def size(self) -> int:
        if self.centers:
            return len(self.centers)
        return len(self.distance_matrix or ())

    @property
    def dimension(self) -> int:
        return self.family.dimension

    @property
    def parameters(self) -> Tuple[float, ...]:
        """λ_i for bare-coupling families, E_B^i otherwise"""
        return self.couplings if self.family.uses_couplings else self.binding_energies

    @property
    def lengths(self) -> Tuple[float, ...]:
        if not self.family.is_curve:
            return ()
        return tuple(c.length for c in self.centers)

    @property
    def min_separation(self) -> float:
        if self.size < 2:
            return float("inf")
        iu = np.triu_indices(self.size, 1)
        return float(self.distances[iu].min())

    @cached_property
    def principal(self):
        """PrincipalMatrix evaluator for this model (built once)"""
        from .principal import PrincipalMatrix
        return PrincipalMatrix(self)

    def replace(self, **changes: Any) -> "ModelSpec":
        return replace(self, **changes)

    def scaled(self, factor: float) -> "ModelSpec":
        """Same model with every pairwise separation multiplied by ``factor`` (point families)"""
        if self.family.is_curve:
            raise ModelError("scaling is only defined for point families")
        if self.distance_matrix is not None or self.family.is_hyperbolic:
            dm = self.distances * factor
            return replace(self, centers=(), distance_matrix=tuple(map(tuple, dm)))
        return replace(self, centers=tuple(FlatPoint(tuple(np.array(c.coords) * factor))
                                           for c in self.centers))

    @classmethod
    def from_positions(cls, family: Union[Family, str], positions: Sequence[Any], **params: Any) -> "ModelSpec":
        """Build a flat point model from raw coordinates"""
        centers = tuple(FlatPoint(tuple(np.atleast_1d(np.asarray(p, dtype=float)))) for p in positions)
        return cls(Family(family), centers, **params)

    # ------------------------------------------------------------ validation

    def _require(self, name: str, value: Any, present: bool) -> None:
        if present and value is None:
            raise ModelError(f"{self.family.value} requires '{name}'")
        if not present and value is not None:
            raise ModelError(f"{self.family.value} does not take '{name}'")

    def _check_parameters(self) -> None:
        fam = self.family
        n = self.size
        if n < 1:
            raise ModelError("a model needs at least one center")
        if self.distance_matrix is not None:
            if not fam.is_hyperbolic:
                raise ModelError("a raw distance matrix is only accepted for hyperbolic families")
            if self.centers:
                raise ModelError("give either hyperbolic centers or a distance matrix, not both")

        self._require("couplings", self.couplings, fam.uses_couplings)
        self._require("binding_energies", self.binding_energies, not fam.uses_couplings)
        self._require("mass", self.mass, fam.is_relativistic)
        self._require("kappa", self.kappa, fam.is_hyperbolic)

        params = self.parameters
        if len(params) != n:
            raise ModelError(f"expected {n} parameters (one per center), got {len(params)}")
        if not all(np.isfinite(params)):
            raise ModelError("parameters must be finite")
        if fam.uses_couplings and min(params) <= 0:
            raise ModelError("couplings λ_i must be positive")
        if self.mass is not None and not self.mass > 0:
            raise ModelError(f"mass m must be positive, got {self.mass}")
        if self.kappa is not None and not self.kappa > 0:
            raise ModelError(f"curvature κ must be positive, got {self.kappa}")
        if fam.is_curve and self.quad_order < 2:
            raise ModelError(f"quad_order must be at least 2, got {self.quad_order}")

        if not fam.uses_couplings:
            for i, e_b in enumerate(params):
                self._check_binding_energy(i, e_b)

        for i, c in enumerate(self.centers):
            self._check_center(i, c)

    def _check_binding_energy(self, i: int, e_b: float) -> None:
        fam = self.family
        if fam in (Family.POINT_2D, Family.POINT_3D, Family.CURVE_3D):
            if not e_b < 0:
                raise ModelError(f"binding energy E_B^{i} = {e_b} must be negative "
                                 f"(below the free threshold 0)")
        elif fam is Family.POINT_H3:
            top = self.kappa ** 2
            if not e_b < top:
                raise ModelError(f"binding energy E_B^{i} = {e_b} must lie below κ² = {top:g}")
        elif fam is Family.POINT_H2:
            top = self.kappa ** 2 / 4.0
            if not e_b < top:
                raise ModelError(f"binding energy must lie below κ²/4 = {top:g} (got E_B^{i} = {e_b})")
        elif fam.is_relativistic:
            m = self.mass
            if not -m < e_b < m:
                raise ModelError(f"{fam.value}: binding energy E_B^{i} = {e_b} must lie in the "
                                 f"relativistic window (−m, m) = ({-m:g}, {m:g})")

    def _check_center(self, i: int, c: Center) -> None:
        fam = self.family
        if fam.is_curve:
            if not isinstance(c, Curve):
                raise ModelError(f"center {i}: {fam.value} needs curves")
            if c.dimension != fam.dimension:
                raise ModelError(f"center {i}: curve lives in ℝ^{c.dimension}, "
                                 f"{fam.value} needs ℝ^{fam.dimension}")
        elif fam.is_hyperbolic:
            if not isinstance(c, HyperbolicPoint):
                raise ModelError(f"center {i}: {fam.value} needs hyperbolic points")
            if c.dimension != fam.dimension or c.kappa != self.kappa:
                raise ModelError(f"center {i}: point must lie on ℍ^{fam.dimension} with κ = {self.kappa}")
        else:
            if not isinstance(c, FlatPoint):
                raise ModelError(f"center {i}: {fam.value} needs flat points")
            if c.dimension != fam.dimension:
                raise ModelError(f"center {i}: point has dimension {c.dimension}, "
                                 f"{fam.value} needs {fam.dimension}")

    def _pairwise_distances(self) -> np.ndarray:
        n = self.size
        d = np.zeros((n, n))
        if self.distance_matrix is not None:
            dm = np.array(self.distance_matrix, dtype=float)
            if dm.shape != (n, n) or not np.allclose(dm, dm.T, rtol=0, atol=1e-12):
                raise ModelError("distance matrix must be square and symmetric")
            d = dm.copy()
            np.fill_diagonal(d, 0.0)
        for i, j in combinations(range(n), 2):
            if self.distance_matrix is None:
                ci, cj = self.centers[i], self.centers[j]
                if isinstance(ci, Curve):
                    try:
                        d[i, j] = ensure_disjoint(ci, cj)
                    except OverlapError as e:
                        raise OverlapError(f"curves {i} and {j} overlap: minimum distance "
                                           f"{e.min_distance:.3e}", e.min_distance) from None
                elif isinstance(ci, HyperbolicPoint):
                    d[i, j] = geodesic_distance(ci, cj)
                else:
                    d[i, j] = ci.distance(cj)
            d[j, i] = d[i, j]
            if not d[i, j] > 0:
                raise SingularityError(f"centers {i} and {j} coincide (a_i ≠ a_j required)")
        d.setflags(write=False)
        return d

    def _check_degeneracy(self) -> None:
        params = np.array(self.parameters)
        for i, j in combinations(range(self.size), 2):
            scale = max(abs(params[i]), abs(params[j]), 1e-300)
            if abs(params[i] - params[j]) <= DEGENERACY_RTOL * scale and not self.degenerate:
                raise DegeneracyError(
                    f"centers {i} and {j} have equal parameters ({params[i]}); "
                    f"request the degenerate path (degenerate=true) for identical centers")
