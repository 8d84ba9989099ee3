"""Conjugated Xi/Omega images, stereographic projection, and latitude spheres.

The visualization frame translates the unit 3-sphere to center [0,1,0,1]; the
projection center is N = [0,2,0,1] and the tangent 3-space is y = 0 with
coordinates (x, z, w).  After rotating the two projection 3-spaces into one
modeling space, a Xi-image keeps (x, y, z) and an Omega-image keeps (x, -w, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AtProjectionCenter, NotOnSphere, PassesThroughCenter, SingularDenominator
from .geometry import (
    IDENTITY_TOL,
    ON_SPHERE_TOL,
    FiberParams,
    Point3,
    Point4,
)

# |denominator| at or below this is an error (image at infinity) ...
SINGULAR_DENOMINATOR = 1e-9
# ... while surface meshes mask vertices this close to the singular set.
STEREO_MASK_DENOMINATOR = 1e-6


@dataclass(frozen=True)
class ViewFrame:
    """Translation target plus the fixed stereographic setup.

    ``projection_center`` (N) and ``tangent_point`` (M) are antipodal points of
    the translated unit 3-sphere; the tangent 3-space is y = 0 with (x, z, w)
    coordinates.
    """

    sphere_center: Point4 = Point4(0.0, 1.0, 0.0, 1.0)
    projection_center: Point4 = Point4(0.0, 2.0, 0.0, 1.0)
    tangent_point: Point4 = Point4(0.0, 0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        s = self.sphere_center.as_array()
        n = self.projection_center.as_array() - s
        m = self.tangent_point.as_array() - s
        if abs(np.linalg.norm(n) - 1.0) > IDENTITY_TOL:
            raise ValueError("projection center must lie on the translated unit 3-sphere")
        if abs(np.linalg.norm(m) - 1.0) > IDENTITY_TOL:
            raise ValueError("tangent point must lie on the translated unit 3-sphere")
        if np.max(np.abs(n + m)) > IDENTITY_TOL:
            raise ValueError("projection center and tangent point must be antipodal")


DEFAULT_FRAME = ViewFrame()


@dataclass(frozen=True)
class LatitudeSphere:
    """2-sphere section of the 3-sphere by a 3-space parallel to Xi at fixed w."""

    center3: Point3
    radius: float
    w_level: float

    def __post_init__(self) -> None:
        if self.radius < 0.0:
            raise ValueError("radius must be nonnegative")
        gap = self.radius**2 + (self.w_level - 1.0) ** 2 - 1.0
        if abs(gap) > ON_SPHERE_TOL:
            raise ValueError(f"radius^2 + (w_level - 1)^2 deviates from 1 by {gap}")


@dataclass(frozen=True)
class SphereImage:
    """Stereographic image of a latitude sphere: a sphere, or a plane when the
    source passes through the projection center (degenerate, flagged)."""

    is_plane: bool
    center: Point3 | None
    radius: float | None
    plane_point: Point3 | None
    plane_normal: Point3 | None
    rms: float


def translate_to_view(p: Point4, frame: ViewFrame = DEFAULT_FRAME) -> Point4:
    """Shift a core-frame point into the visualization frame."""
    c = frame.sphere_center
    return Point4(p.x + c.x, p.y + c.y, p.z + c.z, p.w + c.w)


def translate_array(points: np.ndarray, frame: ViewFrame = DEFAULT_FRAME) -> np.ndarray:
    return np.asarray(points, dtype=float) + frame.sphere_center.as_array()


def xi_image(p: Point4) -> Point3:
    """Xi-image keeps the (x, y, z) coordinates."""
    return Point3(p.x, p.y, p.z)


def omega_image(p: Point4) -> Point3:
    """Omega-image keeps (x, -w, z): the rotated Omega 3-space shares (x, z)."""
    return Point3(p.x, -p.w, p.z)


def xi_image_array(points: np.ndarray) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    return p[..., (0, 1, 2)]


def omega_image_array(points: np.ndarray) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    out = p[..., (0, 3, 2)].copy()
    out[..., 1] = -out[..., 1]
    return out


def _require_on_view_sphere(p: Point4, frame: ViewFrame) -> None:
    r = float(np.linalg.norm(p.as_array() - frame.sphere_center.as_array()))
    if abs(r - 1.0) > ON_SPHERE_TOL:
        raise NotOnSphere(f"point at distance {r} from the translated sphere center")


def stereographic_point(p: Point4, frame: ViewFrame = DEFAULT_FRAME) -> Point3:
    """Intersect the ray N->p with the tangent 3-space y = 0.

    Returns the image in (x, z, w) coordinates.  The generic line-plane
    intersection here and :func:`stereographic_closed_form` agree to 1e-10
    wherever both are defined; the equivalence is a permanent regression test.
    """
    _require_on_view_sphere(p, frame)
    n = frame.projection_center
    d = p.as_array() - n.as_array()
    if float(np.linalg.norm(d)) < SINGULAR_DENOMINATOR:
        raise AtProjectionCenter("point coincides with the projection center")
    t = n.y / (n.y - p.y)
    hit = n.as_array() + t * d
    return Point3(float(hit[0]), float(hit[2]), float(hit[3]))


def stereographic_closed_form(f: FiberParams) -> Point3:
    """Stereographic image of a fiber point, directly from (phi, psi, beta)."""
    c, s = f.base.r_a, f.base.r_b
    a = f.base.phi + f.beta
    den = 1.0 - c * math.sin(a)
    if abs(den) <= SINGULAR_DENOMINATOR:
        raise SingularDenominator(f"1 - cos(psi/2) sin(phi+beta) = {den}")
    return Point3(
        2.0 * c * math.cos(a) / den,
        2.0 * s * math.cos(f.beta) / den,
        2.0 * s * math.sin(f.beta) / den + 1.0,
    )


def stereo_image_array(
    core_points: np.ndarray, min_denominator: float = STEREO_MASK_DENOMINATOR
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized stereographic image of untranslated unit 3-sphere points.

    The denominator equals 1 - y in the core frame.  Returns (images, valid):
    rows with |1 - y| <= min_denominator are masked out (marked invalid and
    left as zeros) rather than producing huge coordinates.
    """
    p = np.asarray(core_points, dtype=float)
    den = 1.0 - p[..., 1]
    valid = np.abs(den) > min_denominator
    safe = np.where(valid, den, 1.0)
    out = np.zeros(p.shape[:-1] + (3,), dtype=float)
    out[..., 0] = 2.0 * p[..., 0] / safe
    out[..., 1] = 2.0 * p[..., 2] / safe
    out[..., 2] = 2.0 * p[..., 3] / safe + 1.0
    out[~valid] = 0.0
    return out, valid


def fiber_passes_through_center(psi: float) -> bool:
    """True when the fiber of a base point with polar angle psi contains N.

    The minimum of the stereographic denominator over the fiber is
    1 - cos(psi/2), so only the psi = 0 fiber is singular.
    """
    return 1.0 - math.cos(0.5 * psi) <= SINGULAR_DENOMINATOR


def n_fiber_image_segment(extent: float = 8.0) -> np.ndarray:
    """Finite segment standing in for the line image {z = 0, w = 1} of the
    fiber through N (stereographic image at infinity)."""
    return np.array([[-extent, 0.0, 1.0], [extent, 0.0, 1.0]])


def latitude_sphere_of(p: Point4, frame: ViewFrame = DEFAULT_FRAME) -> LatitudeSphere:
    """Latitude sphere through p: the section by the 3-space w = p.w."""
    _require_on_view_sphere(p, frame)
    c = frame.sphere_center
    gap = 1.0 - (p.w - c.w) ** 2
    radius = math.sqrt(max(gap, 0.0))
    return LatitudeSphere(center3=Point3(c.x, c.y, c.z), radius=radius, w_level=p.w)


def sample_latitude_sphere(s: LatitudeSphere, n: int = 64) -> np.ndarray:
    """Deterministic well-spread 4-space samples of a latitude sphere."""
    k = np.arange(n, dtype=float)
    # spherical Fibonacci spiral
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    zs = 1.0 - 2.0 * (k + 0.5) / n
    rho = np.sqrt(np.maximum(0.0, 1.0 - zs * zs))
    c = s.center3
    pts = np.empty((n, 4))
    pts[:, 0] = c.x + s.radius * rho * np.cos(phi)
    pts[:, 1] = c.y + s.radius * rho * np.sin(phi)
    pts[:, 2] = c.z + s.radius * zs
    pts[:, 3] = s.w_level
    return pts


def _fit_sphere(points: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Least-squares sphere through 3-space points; returns (center, radius, rms)."""
    p = np.asarray(points, dtype=float)
    a = np.hstack([2.0 * p, np.ones((p.shape[0], 1))])
    rhs = np.sum(p * p, axis=1)
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    center = sol[:3]
    radius = math.sqrt(max(sol[3] + float(center @ center), 0.0))
    # one geometric Gauss-Newton pass
    for _ in range(2):
        diff = p - center
        rho = np.linalg.norm(diff, axis=1)
        res = rho - radius
        jac = np.hstack([-diff / np.maximum(rho, 1e-300)[:, None], -np.ones((p.shape[0], 1))])
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        center = center + step[:3]
        radius = radius + float(step[3])
    diff = p - center
    res = np.linalg.norm(diff, axis=1) - radius
    return center, radius, float(np.sqrt(np.mean(res * res)))


def stereographic_sphere_image(
    s: LatitudeSphere, frame: ViewFrame = DEFAULT_FRAME, samples: int = 64
) -> SphereImage:
    """Image of a latitude sphere: a sphere in (x, z, w), found by projecting
    samples and fitting; a plane (flagged) when the source contains N."""
    n = frame.projection_center
    on_level = abs(s.w_level - n.w) <= SINGULAR_DENOMINATOR
    gap = math.hypot(n.x - s.center3.x, n.y - s.center3.y, n.z - s.center3.z)
    through_n = on_level and abs(gap - s.radius) <= SINGULAR_DENOMINATOR
    if s.radius <= SINGULAR_DENOMINATOR:
        # point sphere: image is the stereographic image of its single point
        p = Point4(s.center3.x, s.center3.y, s.center3.z, s.w_level)
        img = stereographic_point(p, frame)
        return SphereImage(False, img, 0.0, None, None, 0.0)
    pts4 = sample_latitude_sphere(s, samples)
    if through_n:
        keep = np.linalg.norm(pts4 - n.as_array(), axis=1) > 1e-3
        imgs = np.array(
            [stereographic_point(Point4.from_array(q), frame).as_array() for q in pts4[keep]]
        )
        centroid = imgs.mean(axis=0)
        _, _, vt = np.linalg.svd(imgs - centroid)
        normal = vt[2]
        rms = float(np.sqrt(np.mean(((imgs - centroid) @ normal) ** 2)))
        return SphereImage(
            True, None, None, Point3.from_array(centroid), Point3.from_array(normal), rms
        )
    imgs = np.array(
        [stereographic_point(Point4.from_array(q), frame).as_array() for q in pts4]
    )
    center, radius, rms = _fit_sphere(imgs)
    if rms >= 1e-9:
        raise PassesThroughCenter(
            f"sphere image fit RMS {rms} too large; source nearly passes through N"
        )
    return SphereImage(False, Point3.from_array(center), radius, None, None, rms)


_BASE_POLE = Point3(0.0, 2.0, 0.0)  # pole opposite the plane tangency point of B^2


def inverse_stereo_plane_to_base(x: float, z: float) -> Point3:
    """Lift a point of the (x, z)-plane onto the base 2-sphere.

    The base sphere (unit, center (0,1,0)) touches the plane y = 0 at the
    origin; the lift projects from the opposite pole (0,2,0).
    """
    t = 4.0 / (x * x + z * z + 4.0)
    return Point3(t * x, 2.0 - 2.0 * t, t * z)


def base_to_plane(q: Point3) -> tuple[float, float]:
    """Forward stereographic projection of a base-sphere point to (x, z)."""
    dx, dy, dz = q.x, q.y - 1.0, q.z
    r = math.sqrt(dx * dx + dy * dy + dz * dz)
    if abs(r - 1.0) > ON_SPHERE_TOL:
        raise NotOnSphere(f"point at distance {r} from the base sphere center")
    if q.y >= 2.0 - SINGULAR_DENOMINATOR:
        raise AtProjectionCenter("point coincides with the base projection pole")
    t = 2.0 / (2.0 - q.y)
    return (t * q.x, t * q.z)
