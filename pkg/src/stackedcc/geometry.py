"""Circumscribing circles and spheres.

Co-circularity is decided by exact interpolation through a seed subset plus
a deviation report over the remaining points, never by least squares: the
classification statements are exact, so near-misses must be flagged rather
than averaged away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StackedError

# relative deviation below which a point set counts as co-circular/co-spherical
COCIRCULAR_RTOL = 1e-9

# relative threshold for degeneracy (collinear / coplanar) detection
_DEGENERATE_RTOL = 1e-9


@dataclass(frozen=True)
class CircleFit:
    center: np.ndarray
    radius: float
    normal: np.ndarray
    rms_deviation: float

    @property
    def is_cocircular(self) -> bool:
        return self.rms_deviation <= COCIRCULAR_RTOL * self.radius


@dataclass(frozen=True)
class SphereFit:
    center: np.ndarray
    radius: float
    rms_deviation: float
    is_planar: bool

    @property
    def is_cospherical(self) -> bool:
        # planar point sets are co-circular, not co-spherical
        return not self.is_planar and self.rms_deviation <= COCIRCULAR_RTOL * self.radius


def _scale(points: np.ndarray) -> float:
    centered = points - np.mean(points, axis=0)
    return max(float(np.max(np.linalg.norm(centered, axis=1))), np.finfo(float).tiny)


def is_collinear(points: np.ndarray, rtol: float = _DEGENERATE_RTOL) -> bool:
    points = np.asarray(points, dtype=float)
    if len(points) <= 2:
        return True
    centered = points - np.mean(points, axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    return s[1] <= rtol * s[0]


def is_coplanar(points: np.ndarray, rtol: float = _DEGENERATE_RTOL) -> bool:
    points = np.asarray(points, dtype=float)
    if len(points) <= 3:
        return True
    centered = points - np.mean(points, axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    return s[2] <= rtol * s[0]


def plane_fit(points: np.ndarray):
    """Best plane through the points: (point on plane, unit normal, max offset)."""
    points = np.asarray(points, dtype=float)
    centroid = np.mean(points, axis=0)
    _, _, vt = np.linalg.svd(points - centroid)
    normal = vt[2]
    offsets = (points - centroid) @ normal
    return centroid, normal, float(np.max(np.abs(offsets)))


def _circumcircle3(a: np.ndarray, b: np.ndarray, c: np.ndarray):
    """Exact circumcircle of a non-degenerate triangle in R^3."""
    u = a - c
    v = b - c
    w = np.cross(u, v)
    w2 = float(w @ w)
    uu = float(u @ u)
    vv = float(v @ v)
    center = c + np.cross(uu * v - vv * u, w) / (2.0 * w2)
    radius = float(np.linalg.norm(a - center))
    normal = w / np.sqrt(w2)
    return center, radius, normal


def circle_distance(point: np.ndarray, center: np.ndarray, radius: float, normal: np.ndarray) -> float:
    """Euclidean distance from a point to a circle embedded in R^3."""
    v = point - center
    off = float(v @ normal)
    in_plane = np.linalg.norm(v - off * normal)
    return float(np.hypot(off, in_plane - radius))


def fit_circumcircle(points) -> CircleFit:
    """Circle through the first well-conditioned triple, with the largest
    point-to-circle distance of all points reported as the deviation."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise StackedError("bad_shape", "expected points of shape (k, 3)")
    if len(points) < 3:
        raise StackedError("no_circumcircle", "need at least three points for a circumcircle")
    scale = _scale(points)

    seed = None
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                w = np.cross(points[j] - points[i], points[k] - points[i])
                if np.linalg.norm(w) > _DEGENERATE_RTOL * scale * scale:
                    seed = (i, j, k)
                    break
            if seed:
                break
        if seed:
            break
    if seed is None:
        raise StackedError("no_circumcircle", "no circumcircle: points are collinear")

    center, radius, normal = _circumcircle3(*(points[list(seed)]))
    deviation = max(circle_distance(p, center, radius, normal) for p in points)
    return CircleFit(center=center, radius=radius, normal=normal, rms_deviation=deviation)


def _circumsphere4(pts: np.ndarray):
    """Exact sphere through four affinely independent points."""
    sq = np.sum(pts * pts, axis=1)
    ones = np.ones(4)
    a = np.linalg.det(np.column_stack([pts, ones]))
    dx = np.linalg.det(np.column_stack([sq, pts[:, 1], pts[:, 2], ones]))
    dy = -np.linalg.det(np.column_stack([sq, pts[:, 0], pts[:, 2], ones]))
    dz = np.linalg.det(np.column_stack([sq, pts[:, 0], pts[:, 1], ones]))
    c = np.linalg.det(np.column_stack([sq, pts]))
    center = np.array([dx, dy, dz]) / (2.0 * a)
    radius = float(np.sqrt(dx * dx + dy * dy + dz * dz - 4.0 * a * c) / (2.0 * abs(a)))
    return center, radius


def fit_circumsphere(points) -> SphereFit:
    """Sphere through the first affinely independent quadruple.

    Coplanar input degrades gracefully: if the points are co-circular the fit
    reports the circle's center and radius with ``is_planar`` set (planar sets
    never count as co-spherical); otherwise there is no circumsphere.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 3:
        raise StackedError("bad_shape", "expected points of shape (k, 3)")
    if len(points) < 4:
        raise StackedError("no_circumsphere", "need at least four points for a circumsphere")
    scale = _scale(points)

    if is_coplanar(points):
        circle = fit_circumcircle(points)
        if not circle.is_cocircular:
            raise StackedError("no_circumsphere", "no circumsphere: coplanar points that are not co-circular")
        return SphereFit(center=circle.center, radius=circle.radius,
                         rms_deviation=circle.rms_deviation, is_planar=True)

    seed = None
    n = len(points)
    for idx in _quadruples(n):
        pts = points[list(idx)]
        vol = abs(np.linalg.det(pts[1:] - pts[0]))
        if vol > _DEGENERATE_RTOL * scale**3:
            seed = idx
            break
    if seed is None:
        raise StackedError("no_circumsphere", "no circumsphere: points are nearly coplanar")

    center, radius = _circumsphere4(points[list(seed)])
    deviation = float(np.max(np.abs(np.linalg.norm(points - center, axis=1) - radius)))
    return SphereFit(center=center, radius=radius, rms_deviation=deviation, is_planar=False)


def _quadruples(n: int):
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    yield (i, j, k, l)
