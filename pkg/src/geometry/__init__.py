"""Points, curves and curve quadrature"""

from .curves import (Curve, circle, curve_distance, curve_from_parametric, ellipse,
                     ensure_disjoint, polyline, segment)
from .points import FlatPoint, HyperbolicPoint, geodesic_distance, minkowski
from .quadrature import (PLAIN_TENSOR, REGULARIZED_LOG, QuadratureGrid, build_diag_grid,
                         build_offdiag_grid, gauss_legendre)

__all__ = [
    "Curve", "circle", "curve_distance", "curve_from_parametric", "ellipse",
    "ensure_disjoint", "polyline", "segment",
    "FlatPoint", "HyperbolicPoint", "geodesic_distance", "minkowski",
    "PLAIN_TENSOR", "REGULARIZED_LOG", "QuadratureGrid", "build_diag_grid",
    "build_offdiag_grid", "gauss_legendre",
]
