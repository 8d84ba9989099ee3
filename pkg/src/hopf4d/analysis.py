"""Numerical oracles: circle/cylinder fits, collinearity, curve distances,
and Gauss linking numbers for sampled curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    CollinearInput,
    CurvesTooClose,
    DegenerateInput,
    DimensionMismatch,
)
from .geometry import Point3, Polyline3, Polyline4

LINKING_MIN_SEPARATION = 1e-6
DEFAULT_LINKING_SAMPLES = 512


@dataclass(frozen=True)
class CircleFit:
    center: Point3
    radius: float
    normal: Point3
    rms: float
    max_dev: float


@dataclass(frozen=True)
class CylinderFit:
    axis_point: Point3
    axis_dir: Point3
    radius: float
    max_dev: float


class LinkingResult(NamedTuple):
    link: int
    residual: float
    raw: float


def _as_points(points, dim: int | None = None) -> np.ndarray:
    if isinstance(points, (Polyline3, Polyline4)):
        arr = points.vertices
    else:
        arr = np.asarray(
            [p.as_array() if isinstance(p, Point3) else p for p in points], dtype=float
        )
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d point array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected {dim}-d points, got {arr.shape[1]}-d")
    return arr


def _fit_circle_2d(xy: np.ndarray) -> tuple[float, float, float]:
    """Algebraic least-squares circle (2*cx*x + 2*cy*y + c = x^2 + y^2)
    refined by one geometric Gauss-Newton pass.  Returns (cx, cy, r)."""
    a = np.hstack([2.0 * xy, np.ones((xy.shape[0], 1))])
    rhs = np.sum(xy * xy, axis=1)
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    cx, cy = float(sol[0]), float(sol[1])
    r = math.sqrt(max(sol[2] + cx * cx + cy * cy, 0.0))
    diff = xy - (cx, cy)
    rho = np.linalg.norm(diff, axis=1)
    res = rho - r
    jac = np.hstack([-diff / np.maximum(rho, 1e-300)[:, None], -np.ones((xy.shape[0], 1))])
    step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
    return cx + float(step[0]), cy + float(step[1]), r + float(step[2])


def fit_circle(points) -> CircleFit:
    """Best-fit plane (least squares), then an in-plane circle fit.

    ``max_dev`` is the worst per-point deviation, counting the in-plane radial
    error plus the out-of-plane distance.
    """
    p = _as_points(points, 3)
    if p.shape[0] < 3:
        raise CollinearInput("need at least 3 points")
    centroid = p.mean(axis=0)
    centered = p - centroid
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    if sv[0] <= 0.0 or sv[1] <= 1e-9 * sv[0]:
        raise CollinearInput("points are collinear within tolerance")
    normal = vt[2]
    # deterministic orientation: largest-magnitude component positive
    lead = int(np.argmax(np.abs(normal)))
    if normal[lead] < 0.0:
        normal = -normal
    e1, e2 = vt[0], vt[1]
    xy = np.stack([centered @ e1, centered @ e2], axis=1)
    cx, cy, radius = _fit_circle_2d(xy)
    center = centroid + cx * e1 + cy * e2
    in_plane = np.abs(np.linalg.norm(xy - (cx, cy), axis=1) - radius)
    out_of_plane = np.abs(centered @ normal)
    dev = in_plane + out_of_plane
    return CircleFit(
        center=Point3.from_array(center),
        radius=float(radius),
        normal=Point3.from_array(normal),
        rms=float(np.sqrt(np.mean(dev * dev))),
        max_dev=float(np.max(dev)),
    )


def collinearity_deviation(points) -> float:
    """Max distance of the points from their best-fit line."""
    p = _as_points(points, 3)
    if p.shape[0] < 2:
        raise ValueError("need at least 2 points")
    centroid = p.mean(axis=0)
    centered = p - centroid
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction = vt[0]
    residual = centered - np.outer(centered @ direction, direction)
    return float(np.max(np.linalg.norm(residual, axis=1)))


def _segments(arr: np.ndarray, closed: bool) -> tuple[np.ndarray, np.ndarray]:
    if closed:
        return arr, np.roll(arr, -1, axis=0)
    return arr[:-1], arr[1:]


_PAIR_BLOCK = 2_000_000  # segment pairs per vectorized block


def _segment_pairs_min_distance(
    p0: np.ndarray, p1: np.ndarray, q0: np.ndarray, q1: np.ndarray
) -> float:
    n, m = p0.shape[0], q0.shape[0]
    if n * m > _PAIR_BLOCK:
        rows = max(1, _PAIR_BLOCK // m)
        return min(
            _segment_pairs_block(p0[i : i + rows], p1[i : i + rows], q0, q1)
            for i in range(0, n, rows)
        )
    return _segment_pairs_block(p0, p1, q0, q1)


def _segment_pairs_block(
    p0: np.ndarray, p1: np.ndarray, q0: np.ndarray, q1: np.ndarray
) -> float:
    """Exact minimum distance over all segment pairs, vectorized.

    The squared distance is convex over the (s, t) parameter box, so the
    minimum is either the interior critical point or one of the four edge
    minima; all candidates are evaluated.
    """
    u = p1 - p0  # (n, d)
    v = q1 - q0  # (m, d)
    w0 = p0[:, None, :] - q0[None, :, :]  # (n, m, d)
    a = np.maximum(np.sum(u * u, axis=1), 1e-300)[:, None]
    c = np.maximum(np.sum(v * v, axis=1), 1e-300)[None, :]
    b = u @ v.T
    w2 = np.sum(w0 * w0, axis=2)
    d = np.sum(u[:, None, :] * w0, axis=2)
    e = np.sum(v[None, :, :] * w0, axis=2)
    del w0

    def dist2(s: np.ndarray, t: np.ndarray) -> np.ndarray:
        # |w0 + s u - t v|^2 expanded in precomputed scalars
        return w2 + s * (s * a + 2.0 * d) + t * (t * c - 2.0 * e) - 2.0 * s * t * b

    candidates = []
    denom = a * c - b * b
    interior = denom > 1e-300
    s_star = np.where(interior, (b * e - c * d) / np.where(interior, denom, 1.0), 0.0)
    t_star = np.where(interior, (a * e - b * d) / np.where(interior, denom, 1.0), 0.0)
    inside = interior & (s_star >= 0) & (s_star <= 1) & (t_star >= 0) & (t_star <= 1)
    if np.any(inside):
        d2 = dist2(s_star, t_star)
        candidates.append(np.where(inside, d2, np.inf))
    zeros = np.zeros_like(b)
    ones = np.ones_like(b)
    for s_edge in (zeros, ones):
        t_edge = np.clip((e + b * s_edge) / c, 0.0, 1.0)
        candidates.append(dist2(s_edge, t_edge))
    for t_edge in (zeros, ones):
        s_edge = np.clip((b * t_edge - d) / a, 0.0, 1.0)
        candidates.append(dist2(s_edge, t_edge))
    best = np.min([np.min(c2) for c2 in candidates])
    return float(math.sqrt(max(best, 0.0)))


def min_distance(a, b) -> float:
    """Minimum distance between two polylines (exact segment-segment)."""
    kinds = (Polyline3, Polyline4)
    if not isinstance(a, kinds) or not isinstance(b, kinds):
        raise TypeError("min_distance expects Polyline3 or Polyline4 operands")
    if a.vertices.shape[1] != b.vertices.shape[1]:
        raise DimensionMismatch(
            f"{a.vertices.shape[1]}-d vs {b.vertices.shape[1]}-d polylines"
        )
    p0, p1 = _segments(a.vertices, a.closed)
    q0, q1 = _segments(b.vertices, b.closed)
    return _segment_pairs_min_distance(p0, p1, q0, q1)


def linking_number(a: Polyline3, b: Polyline3) -> LinkingResult:
    """Gauss linking integral by the midpoint double sum over segment pairs.

    Returns the rounded integer together with the pre-rounding residual; a
    residual above 0.05 indicates under-sampling.
    """
    for curve in (a, b):
        if not isinstance(curve, Polyline3):
            raise TypeError("linking_number expects Polyline3 operands")
        if not curve.closed:
            raise ValueError("linking_number requires closed polylines")
    sep = min_distance(a, b)
    if sep <= LINKING_MIN_SEPARATION:
        raise CurvesTooClose(f"curves are {sep} apart")
    p0, p1 = _segments(a.vertices, True)
    q0, q1 = _segments(b.vertices, True)
    m1, d1 = 0.5 * (p0 + p1), p1 - p0
    m2, d2 = 0.5 * (q0 + q1), q1 - q0
    r = m1[:, None, :] - m2[None, :, :]
    cross = np.cross(d1[:, None, :], d2[None, :, :])
    dist3 = np.sum(r * r, axis=2) ** 1.5
    raw = float(np.sum(np.sum(r * cross, axis=2) / dist3)) / (4.0 * math.pi)
    link = int(round(raw))
    return LinkingResult(link=link, residual=raw - link, raw=raw)


def close_segment_to_rectangle(
    p0: Point3,
    p1: Point3,
    side: float = 1e3,
    samples_per_side: int = 256,
    near_scale: float = 1.0,
) -> Polyline3:
    """Close a line segment into a large rectangle for linking computations.

    The segment is extended to length ``side`` about its midpoint and closed
    through a far parallel copy; at unit scale the far closure contributes
    under 1e-3 to the Gauss integral.  Samples follow a tangent substitution
    concentrated near each side's midpoint so the near-field region (scale
    ``near_scale``) stays resolved despite the huge extent.
    """
    a, b = p0.as_array(), p1.as_array()
    direction = b - a
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        raise ValueError("segment endpoints coincide")
    direction = direction / norm
    mid = 0.5 * (a + b)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(direction)))] = 1.0
    offset = axis - (axis @ direction) * direction
    offset = offset / np.linalg.norm(offset)
    half = 0.5 * side
    corners = [
        mid - half * direction,
        mid + half * direction,
        mid + half * direction + side * offset,
        mid - half * direction + side * offset,
    ]
    u_max = math.atan(half / near_scale)
    u = np.linspace(-u_max, u_max, samples_per_side, endpoint=False)
    ts = 0.5 + 0.5 * near_scale * np.tan(u) / half  # in [0, 1), t=0 at the corner
    pts = []
    for i in range(4):
        start, end = corners[i], corners[(i + 1) % 4]
        pts.append(start[None, :] + ts[:, None] * (end - start)[None, :])
    return Polyline3(np.vstack(pts), closed=True)


def fit_cylinder(points, axis_hint: Point3) -> CylinderFit:
    """Fit a circular cylinder with the axis direction fixed to ``axis_hint``.

    Only the axis offset and radius are fitted (least squares in the plane
    perpendicular to the axis).
    """
    p = _as_points(points, 3)
    if p.shape[0] < 6:
        raise DegenerateInput("need at least 6 points")
    axis = axis_hint.as_array()
    norm = np.linalg.norm(axis)
    if norm < 1e-12:
        raise DegenerateInput("axis hint must be nonzero")
    axis = axis / norm
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(axis)))] = 1.0
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    xy = np.stack([p @ e1, p @ e2], axis=1)
    spread = xy - xy.mean(axis=0)
    sv = np.linalg.svd(spread, compute_uv=False)
    if sv[0] <= 1e-12:
        raise DegenerateInput("points project to a single point on the axis plane")
    cx, cy, radius = _fit_circle_2d(xy)
    axial = float(np.mean(p @ axis))
    axis_point = axial * axis + cx * e1 + cy * e2
    dev = np.abs(np.linalg.norm(xy - (cx, cy), axis=1) - radius)
    return CylinderFit(
        axis_point=Point3.from_array(axis_point),
        axis_dir=Point3.from_array(axis),
        radius=float(radius),
        max_dev=float(np.max(dev)),
    )
