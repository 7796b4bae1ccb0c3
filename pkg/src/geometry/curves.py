"""
Curves carrying δ-interactions, stored as dense polylines with an
arc-length table. Smooth curves (built from a parametrization) are
interpolated by a cubic spline in arc length, periodic when closed;
explicit polylines keep linear interpolation so corners stay sharp.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..utils.errors import GeometryError, OverlapError, SelfIntersectionError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 16
INTERSECTION_RTOL = 1e-9
_BLOCK = 128


def _segment_distances(a0: np.ndarray, a1: np.ndarray, b0: np.ndarray, b1: np.ndarray):
    """
    Minimum distance between segments [a0, a1] and [b0, b1], broadcast over
    leading axes. Returns (distance, s, t) with the closest points at
    a0 + s(a1 − a0) and b0 + t(b1 − b0).
    """
    d1 = a1 - a0
    d2 = b1 - b0
    r = a0 - b0
    a = np.einsum("...i,...i->...", d1, d1)
    e = np.einsum("...i,...i->...", d2, d2)
    b = np.einsum("...i,...i->...", d1, d2)
    c = np.einsum("...i,...i->...", d1, r)
    f = np.einsum("...i,...i->...", d2, r)
    denom = a * e - b * b

    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-14 * a * e, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0.0, np.clip(-c / a, 0.0, 1.0), s)
        s = np.where(t > 1.0, np.clip((b - c) / a, 0.0, 1.0), s)
        t = np.clip(t, 0.0, 1.0)

    gap = a0 + d1 * s[..., None] - (b0 + d2 * t[..., None])
    return np.linalg.norm(gap, axis=-1), s, t


@dataclass(frozen=True, eq=False)
class Curve:
    """
    Simple curve γ:[0, L] → ℝⁿ (n = 2 or 3).

    Attributes:
        samples: (m, n) array of polyline vertices
        closed: whether the last vertex connects back to the first
        interpolation: "spline" for sampled smooth curves, "linear" for polylines
        arclength: cumulative arc length at each vertex (closing vertex included
            for closed curves)
        length: total length L
    """
    samples: np.ndarray
    closed: bool = False
    interpolation: str = "spline"
    check_simple: bool = True
    arclength: np.ndarray = field(init=False, repr=False)
    length: float = field(init=False)

    def __post_init__(self):
        pts = np.array(self.samples, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise GeometryError(f"curve samples must be an (m, 2) or (m, 3) array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise GeometryError("a curve needs at least two samples")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("curve samples must be finite")
        if self.interpolation not in ("spline", "linear"):
            raise GeometryError(f"unknown interpolation {self.interpolation!r}")

        vertices = np.vstack([pts, pts[:1]]) if self.closed else pts
        seg = np.linalg.norm(np.diff(vertices, axis=0), axis=1)
        if np.any(seg <= 0.0):
            raise GeometryError("consecutive curve samples must be distinct")
        arclength = np.concatenate([[0.0], np.cumsum(seg)])
        pts.setflags(write=False)
        arclength.setflags(write=False)
        object.__setattr__(self, "samples", pts)
        object.__setattr__(self, "arclength", arclength)
        object.__setattr__(self, "length", float(arclength[-1]))
        object.__setattr__(self, "_vertices", vertices)

        if self.interpolation == "spline" and len(vertices) >= 4:
            bc = "periodic" if self.closed else "not-a-knot"
            spline = CubicSpline(arclength, vertices, axis=0, bc_type=bc)
        else:
            spline = None
        object.__setattr__(self, "_spline", spline)

        if self.check_simple:
            self._check_simple()

    @property
    def dimension(self) -> int:
        return int(self.samples.shape[1])

    @property
    def vertices(self) -> np.ndarray:
        """Polyline vertices, closing vertex repeated for closed curves"""
        return self._vertices

    def point_at(self, s) -> np.ndarray:
        """γ(s) for arc-length parameter(s) s ∈ [0, L] (wrapped when closed)"""
        s = np.asarray(s, dtype=float)
        if self.closed:
            s = np.mod(s, self.length)
        else:
            s = np.clip(s, 0.0, self.length)
        if self._spline is not None:
            return self._spline(s)
        return np.stack([np.interp(s, self.arclength, self._vertices[:, i])
                         for i in range(self.dimension)], axis=-1)

    def center_of_mass(self) -> np.ndarray:
        """x = (1/L)∫γ(s)ds over the polyline"""
        v = self._vertices
        seg = np.diff(self.arclength)
        mid = 0.5 * (v[:-1] + v[1:])
        return (seg[:, None] * mid).sum(axis=0) / self.length

    def diameter(self) -> float:
        """Largest distance between two samples"""
        pts = self.samples
        best = 0.0
        for start in range(0, len(pts), _BLOCK):
            block = pts[start:start + _BLOCK]
            d = np.linalg.norm(block[:, None, :] - pts[None, :, :], axis=-1)
            best = max(best, float(d.max()))
        return best

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        v = self._vertices
        return v[:-1], v[1:]

    def _check_simple(self) -> None:
        a0, a1 = self.segments()
        n_seg = len(a0)
        tol = INTERSECTION_RTOL * self.length
        seg_len = np.diff(self.arclength)
        j = np.arange(n_seg)
        for start in range(0, n_seg, _BLOCK):
            i = np.arange(start, min(start + _BLOCK, n_seg))
            mask = j[None, :] >= i[:, None] + 2
            if self.closed:
                mask &= ~((i[:, None] == 0) & (j[None, :] == n_seg - 1))
            if not mask.any():
                continue
            dist, s, t = _segment_distances(a0[i][:, None, :], a1[i][:, None, :],
                                            a0[None, :, :], a1[None, :, :])
            dist = np.where(mask, dist, np.inf)
            hit = np.argwhere(dist < tol)
            if hit.size:
                r, c = hit[0]
                ii, jj = i[r], j[c]
                p1 = (self.arclength[ii] + s[r, c] * seg_len[ii]) / self.length
                p2 = (self.arclength[jj] + t[r, c] * seg_len[jj]) / self.length
                raise SelfIntersectionError(
                    f"curve is not simple: it meets itself at parameters "
                    f"t1={p1:.6f}, t2={p2:.6f}", (float(p1), float(p2)))


def curve_distance(c1: Curve, c2: Curve) -> float:
    """Minimum distance between two polylines (0 when they cross)"""
    if c1.dimension != c2.dimension:
        raise GeometryError(f"dimension mismatch: {c1.dimension} vs {c2.dimension}")
    a0, a1 = c1.segments()
    b0, b1 = c2.segments()
    best = np.inf
    for start in range(0, len(a0), _BLOCK):
        dist, _, _ = _segment_distances(a0[start:start + _BLOCK, None, :], a1[start:start + _BLOCK, None, :],
                                        b0[None, :, :], b1[None, :, :])
        best = min(best, float(dist.min()))
    return best


def ensure_disjoint(c1: Curve, c2: Curve) -> float:
    """Distance between two curves; OverlapError when they touch"""
    d = curve_distance(c1, c2)
    scale = max(c1.length, c2.length)
    if d <= INTERSECTION_RTOL * scale:
        raise OverlapError(f"curves overlap: minimum distance {d:.3e}", d)
    return d


def curve_from_parametric(fn: Callable[[float], Sequence[float]], n_samples: int,
                          closed: bool) -> Curve:
    """
    Sample γ(t), t ∈ [0, 1], into an arc-length parametrized curve.

    For closed curves γ(1) must equal γ(0); t = 1 is not sampled twice.

    Raises:
        GeometryError: fewer than 16 samples.
        SelfIntersectionError: the sampled polyline meets itself.
    """
    if n_samples < MIN_SAMPLES:
        raise GeometryError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    t = np.linspace(0.0, 1.0, n_samples, endpoint=not closed)
    pts = np.array([np.asarray(fn(ti), dtype=float) for ti in t])
    return Curve(pts, closed=closed, interpolation="spline")


def circle(center: Sequence[float], radius: float, n_samples: int = 1024) -> Curve:
    """Circle in the plane z = center[2] (or in ℝ² for a 2-vector center)"""
    c = np.asarray(center, dtype=float)
    if not radius > 0:
        raise GeometryError(f"circle radius must be positive, got {radius}")

    def fn(t):
        p = c.copy()
        p[0] += radius * np.cos(2.0 * np.pi * t)
        p[1] += radius * np.sin(2.0 * np.pi * t)
        return p

    return curve_from_parametric(fn, n_samples, closed=True)


def ellipse(center: Sequence[float], semi_x: float, semi_y: float, n_samples: int = 1024) -> Curve:
    c = np.asarray(center, dtype=float)
    if not (semi_x > 0 and semi_y > 0):
        raise GeometryError("ellipse semi-axes must be positive")

    def fn(t):
        p = c.copy()
        p[0] += semi_x * np.cos(2.0 * np.pi * t)
        p[1] += semi_y * np.sin(2.0 * np.pi * t)
        return p

    return curve_from_parametric(fn, n_samples, closed=True)


def segment(start: Sequence[float], end: Sequence[float], n_samples: int = 64) -> Curve:
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    return curve_from_parametric(lambda t: a + t * (b - a), n_samples, closed=False)


def polyline(points: Sequence[Sequence[float]], closed: bool = False) -> Curve:
    """Explicit polyline, linearly interpolated"""
    return Curve(np.asarray(points, dtype=float), closed=closed, interpolation="linear")
