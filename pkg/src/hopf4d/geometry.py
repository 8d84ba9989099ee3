"""Core Hopf-fibration geometry on the unit 3-sphere centered at the origin.

The map sends (x, y, z, w), read as the complex pair (z1, z2) = (x+iy, z+iw),
to (2*z1*conj(z2), |z1|^2 - |z2|^2) on the unit 2-sphere.  Fixing a base point
with spherical angles (phi, psi) and sweeping the fiber phase beta traces the
fiber circle

    (cos(psi/2) cos(phi+beta), cos(psi/2) sin(phi+beta),
     sin(psi/2) cos(beta),     sin(psi/2) sin(beta)).

Everything here works in the untranslated unit frame; the view translation to
center [0,1,0,1] belongs to :mod:`hopf4d.projection`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadSampleCount, NotOnSphere

TAU = 2.0 * math.pi

# Input validation accommodates upstream round-trips; one-step identities are
# held to 1e-12 (double precision leaves ample headroom).
ON_SPHERE_TOL = 1e-9
IDENTITY_TOL = 1e-12

DEFAULT_FIBER_SAMPLES = 256


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} has non-finite component {v!r}")


@dataclass(frozen=True)
class Point3:
    """Cartesian point (or direction) in the modeling 3-space."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _require_finite("Point3", self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(a) -> "Point3":
        return Point3(float(a[0]), float(a[1]), float(a[2]))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class Point4:
    """Cartesian point (or direction) in the embedding 4-space."""

    x: float
    y: float
    z: float
    w: float

    def __post_init__(self) -> None:
        _require_finite("Point4", self.x, self.y, self.z, self.w)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.w], dtype=float)

    @staticmethod
    def from_array(a) -> "Point4":
        return Point4(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def norm(self) -> float:
        return math.sqrt(
            self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w
        )

    def __neg__(self) -> "Point4":
        return Point4(-self.x, -self.y, -self.z, -self.w)


@dataclass(frozen=True)
class ComplexPair:
    """(z1, z2) = (x+iy, z+iw) identification of a 4-space point.

    The conversion is a bit-identical component copy in both directions.
    """

    z1: complex
    z2: complex

    @staticmethod
    def from_point(p: Point4) -> "ComplexPair":
        return ComplexPair(complex(p.x, p.y), complex(p.z, p.w))

    def to_point(self) -> Point4:
        return Point4(self.z1.real, self.z1.imag, self.z2.real, self.z2.imag)

    def zeta(self) -> complex:
        """First (complex) output of the Hopf map, 2*z1*conj(z2)."""
        return 2.0 * self.z1 * self.z2.conjugate()


def reduce_angle(angle: float) -> float:
    """Reduce an angle to its representative in [0, 2*pi)."""
    _require_finite("angle", angle)
    a = math.fmod(angle, TAU)
    if a < 0.0:
        a += TAU
    if a >= TAU:  # fmod rounding can land exactly on 2*pi
        a -= TAU
    return a


@dataclass(frozen=True)
class BaseAngles:
    """Spherical coordinates (phi, psi) of a point on the base 2-sphere.

    phi is reduced mod 2*pi on construction; psi must lie in [0, pi]
    (overshoot below 1e-12 is clamped, anything else is rejected).
    """

    phi: float
    psi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", reduce_angle(self.phi))
        _require_finite("psi", self.psi)
        psi = self.psi
        if -IDENTITY_TOL <= psi < 0.0:
            psi = 0.0
        elif math.pi < psi <= math.pi + IDENTITY_TOL:
            psi = math.pi
        if not 0.0 <= psi <= math.pi:
            raise ValueError(f"psi must be in [0, pi], got {self.psi!r}")
        object.__setattr__(self, "psi", psi)

    @property
    def gamma(self) -> float:
        """Half polar angle; the modulus pair is (cos gamma, sin gamma)."""
        return 0.5 * self.psi

    @property
    def r_a(self) -> float:
        return math.cos(self.gamma)

    @property
    def r_b(self) -> float:
        return math.sin(self.gamma)


@dataclass(frozen=True)
class FiberParams:
    """A point on the 3-sphere in Hopf coordinates (phi, psi, beta)."""

    base: BaseAngles
    beta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", reduce_angle(self.beta))

    @property
    def alpha(self) -> float:
        """Argument of the first complex coordinate, alpha = phi + beta."""
        return reduce_angle(self.base.phi + self.beta)


@dataclass(frozen=True)
class Circle4:
    """Circle in 4-space: center + radius * (cos(t) u + sin(t) v)."""

    center: Point4
    u: Point4
    v: Point4
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if abs(self.u.norm() - 1.0) > IDENTITY_TOL:
            raise ValueError("u is not a unit vector")
        if abs(self.v.norm() - 1.0) > IDENTITY_TOL:
            raise ValueError("v is not a unit vector")
        dot = float(np.dot(self.u.as_array(), self.v.as_array()))
        if abs(dot) > IDENTITY_TOL:
            raise ValueError(f"u and v are not orthogonal (u.v = {dot})")

    def point_at(self, t: float) -> Point4:
        c, u, v = self.center.as_array(), self.u.as_array(), self.v.as_array()
        return Point4.from_array(c + self.radius * (math.cos(t) * u + math.sin(t) * v))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Polyline3:
    """Ordered vertex list in 3-space; closed polylines wrap last -> first."""

    vertices: np.ndarray  # shape (n, 3)
    closed: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"expected (n, 3) vertex array, got shape {v.shape}")
        if v.shape[0] < 2:
            raise ValueError("polyline needs at least 2 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("polyline vertices must be finite")
        object.__setattr__(self, "vertices", _readonly(v))

    def __len__(self) -> int:
        return int(self.vertices.shape[0])


@dataclass(frozen=True, eq=False)
class Polyline4:
    """Ordered vertex list in 4-space; closed polylines wrap last -> first."""

    vertices: np.ndarray  # shape (n, 4)
    closed: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 4:
            raise ValueError(f"expected (n, 4) vertex array, got shape {v.shape}")
        if v.shape[0] < 2:
            raise ValueError("polyline needs at least 2 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("polyline vertices must be finite")
        object.__setattr__(self, "vertices", _readonly(v))

    def __len__(self) -> int:
        return int(self.vertices.shape[0])


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def hopf_map(p: Point4) -> Point3:
    """Map a point of the unit 3-sphere to the unit 2-sphere.

    Raises NotOnSphere when the input norm is off by more than 1e-9: that
    always means the caller passed an unnormalized point.
    """
    n = p.norm()
    if abs(n - 1.0) > ON_SPHERE_TOL:
        raise NotOnSphere(f"norm {n} deviates from 1 by more than {ON_SPHERE_TOL}")
    x, y, z, w = p.x, p.y, p.z, p.w
    # 2*z1*conj(z2) with z1 = x+iy, z2 = z+iw
    return Point3(
        2.0 * (x * z + y * w),
        2.0 * (y * z - x * w),
        (x * x + y * y) - (z * z + w * w),
    )


def hopf_map_array(points: np.ndarray) -> np.ndarray:
    """Vectorized :func:`hopf_map` for an (n, 4) array of unit points."""
    p = np.asarray(points, dtype=float)
    norms = np.linalg.norm(p, axis=-1)
    if np.any(np.abs(norms - 1.0) > ON_SPHERE_TOL):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise NotOnSphere(f"norm deviates from 1 by up to {worst}")
    x, y, z, w = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    return np.stack(
        [2.0 * (x * z + y * w), 2.0 * (y * z - x * w), (x * x + y * y) - (z * z + w * w)],
        axis=-1,
    )


def spherical_point(b: BaseAngles) -> Point3:
    """Point on the base 2-sphere: (sin psi cos phi, sin psi sin phi, cos psi)."""
    sp, cp = math.sin(b.psi), math.cos(b.psi)
    return Point3(sp * math.cos(b.phi), sp * math.sin(b.phi), cp)


class BaseAnglesAtPoint(NamedTuple):
    angles: BaseAngles
    pole_degenerate: bool


def angles_from_base_point(q: Point3) -> BaseAnglesAtPoint:
    """Invert :func:`spherical_point` for a unit point on the base sphere.

    At the poles phi is indeterminate; by convention it is returned as 0 with
    ``pole_degenerate`` set (fibers remain well defined there).
    """
    n = q.norm()
    if abs(n - 1.0) > ON_SPHERE_TOL:
        raise NotOnSphere(f"norm {n} deviates from 1 by more than {ON_SPHERE_TOL}")
    rho = math.hypot(q.x, q.y)
    psi = math.atan2(rho, q.z)
    if rho < IDENTITY_TOL:
        return BaseAnglesAtPoint(BaseAngles(0.0, 0.0 if q.z > 0.0 else math.pi), True)
    return BaseAnglesAtPoint(BaseAngles(reduce_angle(math.atan2(q.y, q.x)), psi), False)


def fiber_point(f: FiberParams) -> Point4:
    """Point of the Hopf fiber of ``f.base`` at phase ``f.beta``."""
    c, s = f.base.r_a, f.base.r_b
    a = f.base.phi + f.beta
    return Point4(c * math.cos(a), c * math.sin(a), s * math.cos(f.beta), s * math.sin(f.beta))


def fiber_points_array(b: BaseAngles, betas: np.ndarray) -> np.ndarray:
    """Fiber points for an array of beta values; returns shape (n, 4)."""
    betas = np.asarray(betas, dtype=float)
    c, s = b.r_a, b.r_b
    a = b.phi + betas
    return np.stack(
        [c * np.cos(a), c * np.sin(a), s * np.cos(betas), s * np.sin(betas)], axis=-1
    )


def fiber_circle(b: BaseAngles) -> Circle4:
    """The fiber of a base point as a unit circle through the origin.

    The spanning directions are the fiber points at beta = 0 and beta = pi/2,
    so the parameterization sweeps exactly the fiber:
    center + cos(t) u + sin(t) v = fiber_point(b, t).
    """
    u = fiber_point(FiberParams(b, 0.0))
    v = fiber_point(FiberParams(b, 0.5 * math.pi))
    return Circle4(center=Point4(0.0, 0.0, 0.0, 0.0), u=u, v=v, radius=1.0)


def sample_fiber(b: BaseAngles, n: int = DEFAULT_FIBER_SAMPLES) -> Polyline4:
    """Closed polyline with n vertices at beta = 2*pi*k/n, k = 0..n-1."""
    if n < 3:
        raise BadSampleCount(f"need at least 3 samples, got {n}")
    betas = TAU * np.arange(n) / n
    return Polyline4(fiber_points_array(b, betas), closed=True)


def antipodal_point(f: FiberParams) -> Point4:
    """The antipode of a fiber point; equals the fiber point at beta + pi."""
    return -fiber_point(f)
