"""Hopf tori, nested torus families, and cyclic surfaces lifted from base
curves, tessellated as quad meshes.

A torus kappa collects the fibers of a base circle parallel to (x, y) (fixed
psi, swept phi'); a torus mu collects the fibers of a base circle with a
diameter parallel to z (fixed phi, swept psi').  Mesh grids are indexed
(u, v) = (beta', sweep angle); ``points4`` stays in the untranslated unit
frame and the Xi/Omega/stereo meshes are produced in the visualization frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadCount, DegenerateTorus, DisconnectedArcs
from .geometry import (
    TAU,
    BaseAngles,
    Circle4,
    Point3,
    Point4,
    angles_from_base_point,
    fiber_circle,
    fiber_points_array,
    spherical_point,
)
from .projection import (
    STEREO_MASK_DENOMINATOR,
    inverse_stereo_plane_to_base,
    omega_image_array,
    stereo_image_array,
    translate_array,
    xi_image_array,
)

DEFAULT_TESSELLATION = 96
POLE_TOL = 1e-12
ARC_GAP_TOL = 1e-9
MAX_CURVE_STEP = math.pi / 8


@dataclass(frozen=True)
class ParamGrid:
    """Sampling grid over a (u, v) parameter rectangle."""

    n_u: int = DEFAULT_TESSELLATION
    n_v: int = DEFAULT_TESSELLATION
    u_range: tuple[float, float] = (0.0, TAU)
    v_range: tuple[float, float] = (0.0, TAU)
    closed_u: bool = True
    closed_v: bool = True

    def __post_init__(self) -> None:
        if self.n_u < 3 or self.n_v < 3:
            raise ValueError("grid needs at least 3 samples per direction")

    def u_samples(self) -> np.ndarray:
        lo, hi = self.u_range
        return np.linspace(lo, hi, self.n_u, endpoint=not self.closed_u)

    def v_samples(self) -> np.ndarray:
        lo, hi = self.v_range
        return np.linspace(lo, hi, self.n_v, endpoint=not self.closed_v)


def _grid_faces(n_u: int, n_v: int, closed_u: bool, closed_v: bool) -> np.ndarray:
    iu = np.arange(n_u if closed_u else n_u - 1)
    iv = np.arange(n_v if closed_v else n_v - 1)
    ii, jj = np.meshgrid(iu, iv, indexing="ij")
    i1 = (ii + 1) % n_u
    j1 = (jj + 1) % n_v
    quads = np.stack(
        [ii * n_v + jj, i1 * n_v + jj, i1 * n_v + j1, ii * n_v + j1], axis=-1
    )
    return quads.reshape(-1, 4).astype(np.int32)


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Quad mesh in one image space; vertices (n, 3), faces (m, 4) indices."""

    vertices: np.ndarray
    faces: np.ndarray
    space_tag: str  # one of {"xi", "omega", "stereo", "base"}

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        f = np.asarray(self.faces, dtype=np.int32)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"expected (n, 3) vertices, got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 4:
            raise ValueError(f"expected (m, 4) quad faces, got {f.shape}")
        if f.size and (f.min() < 0 or f.max() >= v.shape[0]):
            raise ValueError("face index out of range")
        if self.space_tag not in {"xi", "omega", "stereo", "base"}:
            raise ValueError(f"unknown space tag {self.space_tag!r}")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)


def _image_mesh(points4: np.ndarray, grid_shape, closed_u, closed_v, tag) -> SurfaceMesh:
    n_u, n_v = grid_shape
    translated = translate_array(points4.reshape(-1, 4))
    img = xi_image_array(translated) if tag == "xi" else omega_image_array(translated)
    return SurfaceMesh(img, _grid_faces(n_u, n_v, closed_u, closed_v), tag)


@dataclass(frozen=True, eq=False)
class TorusBundle:
    """A Hopf torus: 4-space vertex grid plus its two conjugated image meshes."""

    mode: str  # "kappa" | "mu"
    angle: float  # fixed psi (kappa) or fixed phi (mu)
    grid: ParamGrid
    points4: np.ndarray  # (n_u, n_v, 4), untranslated
    xi: SurfaceMesh
    omega: SurfaceMesh

    def point4_at(self, u: float, v: float) -> Point4:
        """Analytic parameterization (u = beta', v = phi' or psi')."""
        if self.mode == "kappa":
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            return Point4(
                c * math.cos(v + u), c * math.sin(v + u), s * math.cos(u), s * math.sin(u)
            )
        c, s = math.cos(v / 2), math.sin(v / 2)
        return Point4(
            c * math.cos(self.angle + u),
            c * math.sin(self.angle + u),
            s * math.cos(u),
            s * math.sin(u),
        )

    def base_circle_points(self, n: int = 0) -> np.ndarray:
        """Sampled generating circle on the base sphere (untranslated frame)."""
        if self.mode == "kappa":
            t = self.grid.v_samples() if n == 0 else np.linspace(0, TAU, n, endpoint=False)
            sp, cp = math.sin(self.angle), math.cos(self.angle)
            return np.stack([sp * np.cos(t), sp * np.sin(t), np.full_like(t, cp)], axis=1)
        t = self.grid.v_samples() if n == 0 else np.linspace(0, math.pi, n)
        return np.stack(
            [
                np.sin(t) * math.cos(self.angle),
                np.sin(t) * math.sin(self.angle),
                np.cos(t),
            ],
            axis=1,
        )


def _default_grid(mode: str) -> ParamGrid:
    if mode == "kappa":
        return ParamGrid()
    return ParamGrid(v_range=(0.0, math.pi), closed_v=False)


def torus_kappa(psi: float, grid: ParamGrid | None = None) -> TorusBundle:
    """Torus of the fibers of a base circle parallel to (x, y) at polar angle psi."""
    if psi <= POLE_TOL or psi >= math.pi - POLE_TOL:
        raise DegenerateTorus(f"psi={psi} collapses the torus to a single fiber circle")
    grid = grid or _default_grid("kappa")
    u = grid.u_samples()[:, None]
    v = grid.v_samples()[None, :]
    c, s = math.cos(psi / 2), math.sin(psi / 2)
    pts = np.empty((grid.n_u, grid.n_v, 4))
    pts[..., 0] = c * np.cos(v + u)
    pts[..., 1] = c * np.sin(v + u)
    pts[..., 2] = s * np.cos(u) * np.ones_like(v)
    pts[..., 3] = s * np.sin(u) * np.ones_like(v)
    shape = (grid.n_u, grid.n_v)
    return TorusBundle(
        mode="kappa",
        angle=float(psi),
        grid=grid,
        points4=pts,
        xi=_image_mesh(pts, shape, grid.closed_u, grid.closed_v, "xi"),
        omega=_image_mesh(pts, shape, grid.closed_u, grid.closed_v, "omega"),
    )


def torus_mu(phi: float, grid: ParamGrid | None = None) -> TorusBundle:
    """Torus of the fibers of a base circle with a diameter parallel to z."""
    grid = grid or _default_grid("mu")
    u = grid.u_samples()[:, None]
    v = grid.v_samples()[None, :]
    c, s = np.cos(v / 2), np.sin(v / 2)
    pts = np.empty((grid.n_u, grid.n_v, 4))
    pts[..., 0] = c * np.cos(phi + u)
    pts[..., 1] = c * np.sin(phi + u)
    pts[..., 2] = s * np.cos(u)
    pts[..., 3] = s * np.sin(u)
    shape = (grid.n_u, grid.n_v)
    return TorusBundle(
        mode="mu",
        angle=float(phi),
        grid=grid,
        points4=pts,
        xi=_image_mesh(pts, shape, grid.closed_u, grid.closed_v, "xi"),
        omega=_image_mesh(pts, shape, grid.closed_u, grid.closed_v, "omega"),
    )


def _masked_stereo_mesh(
    points4: np.ndarray, closed_u: bool, closed_v: bool
) -> SurfaceMesh:
    n_u, n_v = points4.shape[:2]
    img, valid = stereo_image_array(points4.reshape(-1, 4), STEREO_MASK_DENOMINATOR)
    faces = _grid_faces(n_u, n_v, closed_u, closed_v)
    keep_face = np.all(valid[faces], axis=1)
    remap = np.cumsum(valid) - 1
    faces = remap[faces[keep_face]].astype(np.int32)
    return SurfaceMesh(img[valid], faces, "stereo")


def torus_stereo(source: TorusBundle) -> SurfaceMesh:
    """Stereographic image mesh of a torus; vertices within 1e-6 of the
    singular denominator are masked out and their faces dropped."""
    return _masked_stereo_mesh(source.points4, source.grid.closed_u, source.grid.closed_v)


@dataclass(frozen=True)
class NestedFamilyMember:
    kind: str  # "torus" | "circle"
    angle: float
    torus: TorusBundle | None = None
    circle: Circle4 | None = None


@dataclass(frozen=True)
class NestedFamily:
    family: str  # "xy" | "z"
    count: int
    members: tuple[NestedFamilyMember, ...]

    @property
    def tori(self) -> list[TorusBundle]:
        return [m.torus for m in self.members if m.kind == "torus"]

    @property
    def circles(self) -> list[Circle4]:
        return [m.circle for m in self.members if m.kind == "circle"]


def nested_family_xy(count: int = 12, grid: ParamGrid | None = None) -> NestedFamily:
    """Tori of the circles parallel to (x, y) at psi = k*pi/count, k = 0..count.

    The k = 0 and k = count entries are the degenerate fiber circles of the
    two base poles.
    """
    if count < 2:
        raise BadCount(f"family needs count >= 2, got {count}")
    members = []
    for k in range(count + 1):
        psi = math.pi * k / count
        if k == 0 or k == count:
            members.append(
                NestedFamilyMember(
                    kind="circle", angle=psi, circle=fiber_circle(BaseAngles(0.0, psi))
                )
            )
        else:
            members.append(
                NestedFamilyMember(kind="torus", angle=psi, torus=torus_kappa(psi, grid))
            )
    return NestedFamily(family="xy", count=count, members=tuple(members))


def nested_family_z(count: int = 6, grid: ParamGrid | None = None) -> NestedFamily:
    """Tori of the circles with a diameter parallel to z at phi = k*pi/count,
    k = 0..count; all of them share the two polar fibers."""
    if count < 2:
        raise BadCount(f"family needs count >= 2, got {count}")
    members = tuple(
        NestedFamilyMember(
            kind="torus", angle=math.pi * k / count, torus=torus_mu(math.pi * k / count, grid)
        )
        for k in range(count + 1)
    )
    return NestedFamily(family="z", count=count, members=members)


# ---------------------------------------------------------------------------
# base curves and cyclic surfaces
# ---------------------------------------------------------------------------


def _slerp(p: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
    dot = float(np.clip(p @ q, -1.0, 1.0))
    theta = math.acos(dot)
    if theta < 1e-12:
        return p
    if math.pi - theta < 1e-9:
        # antipodal samples: route through an arbitrary perpendicular
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(p)))] = 1.0
        mid = helper - (helper @ p) * p
        mid /= np.linalg.norm(mid)
        if t <= 0.5:
            return _slerp(p, mid, 2 * t)
        return _slerp(mid, q, 2 * t - 1)
    return (math.sin((1 - t) * theta) * p + math.sin(t * theta) * q) / math.sin(theta)


@dataclass(frozen=True)
class BaseCurve:
    """Sampled curve on the base 2-sphere.

    Consecutive samples farther than pi/8 apart are subdivided along the
    connecting great-circle arc, so the lifted mesh aspect ratio stays bounded
    regardless of input sampling.
    """

    samples: tuple[BaseAngles, ...]
    closed: bool = True

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        if len(samples) < 3:
            raise ValueError("base curve needs at least 3 samples")
        pts = [spherical_point(b).as_array() for b in samples]
        refined: list[BaseAngles] = []
        n = len(samples)
        last = n if self.closed else n - 1
        for i in range(last):
            p, q = pts[i], pts[(i + 1) % n]
            refined.append(samples[i])
            step = math.acos(float(np.clip(p @ q, -1.0, 1.0)))
            if step >= MAX_CURVE_STEP:
                pieces = int(math.ceil(step / (MAX_CURVE_STEP / 2.0)))
                for k in range(1, pieces):
                    mid = _slerp(p, q, k / pieces)
                    refined.append(angles_from_base_point(Point3.from_array(mid)).angles)
        if not self.closed:
            refined.append(samples[-1])
        object.__setattr__(self, "samples", tuple(refined))

    def sphere_points(self) -> np.ndarray:
        return np.array([spherical_point(b).as_array() for b in self.samples])


@dataclass(frozen=True, eq=False)
class LiftBundle:
    """Cyclic surface swept by the fibers of a base curve."""

    curve: BaseCurve
    points4: np.ndarray  # (n_beta, n_curve, 4), untranslated
    xi: SurfaceMesh
    omega: SurfaceMesh
    stereo: SurfaceMesh


def lift_base_curve(curve: BaseCurve, n_beta: int = DEFAULT_TESSELLATION) -> LiftBundle:
    """Sweep the fiber along a base curve; mesh rows are fibers of consecutive
    curve samples."""
    if n_beta < 3:
        raise ValueError("need at least 3 fiber samples")
    betas = TAU * np.arange(n_beta) / n_beta
    columns = [fiber_points_array(b, betas) for b in curve.samples]
    pts = np.stack(columns, axis=1)  # (n_beta, n_curve, 4)
    shape = pts.shape[:2]
    return LiftBundle(
        curve=curve,
        points4=pts,
        xi=_image_mesh(pts, shape, True, curve.closed, "xi"),
        omega=_image_mesh(pts, shape, True, curve.closed, "omega"),
        stereo=_masked_stereo_mesh(pts, True, curve.closed),
    )


# ---------------------------------------------------------------------------
# planar arc shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arc2:
    """Circular arc in the (x, z)-plane, swept from theta0 to theta1."""

    center: tuple[float, float]
    radius: float
    theta0: float
    theta1: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("arc radius must be positive")

    def point_at(self, t: float) -> tuple[float, float]:
        th = self.theta0 + t * (self.theta1 - self.theta0)
        return (
            self.center[0] + self.radius * math.cos(th),
            self.center[1] + self.radius * math.sin(th),
        )

    @property
    def start(self) -> tuple[float, float]:
        return self.point_at(0.0)

    @property
    def end(self) -> tuple[float, float]:
        return self.point_at(1.0)

    @property
    def full_circle(self) -> bool:
        return abs(abs(self.theta1 - self.theta0) - TAU) < 1e-12


@dataclass(frozen=True, eq=False)
class ArcsShape:
    parts: tuple[LiftBundle, ...]
    junctions: tuple[BaseAngles, ...]
    closed_chain: bool


def _gap(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def arcs_shape_pipeline(
    arcs: list[Arc2],
    samples_per_arc: int = 48,
    n_beta: int = DEFAULT_TESSELLATION,
) -> ArcsShape:
    """Lift a connected chain of planar arcs onto the base sphere and sweep
    fibers over each lifted arc.  Junction points of consecutive arcs become
    the fibers shared by consecutive surface parts."""
    if not arcs:
        raise DisconnectedArcs("no arcs supplied")
    for i in range(1, len(arcs)):
        gap = _gap(arcs[i - 1].end, arcs[i].start)
        if gap > ARC_GAP_TOL:
            raise DisconnectedArcs(f"gap {gap} between arcs {i - 1} and {i}")
    closed_chain = len(arcs) > 1 and _gap(arcs[-1].end, arcs[0].start) <= ARC_GAP_TOL

    def lift_angles(x: float, z: float) -> BaseAngles:
        q = inverse_stereo_plane_to_base(x, z)
        # the plane lift lands on B^2 centered at (0,1,0) in Xi; recenter
        return angles_from_base_point(Point3(q.x, q.y - 1.0, q.z)).angles

    parts = []
    junction_angles = []
    for arc in arcs:
        single_closed = len(arcs) == 1 and arc.full_circle
        ts = np.linspace(0.0, 1.0, samples_per_arc + 1)
        if single_closed:
            ts = ts[:-1]
        samples = tuple(lift_angles(*arc.point_at(float(t))) for t in ts)
        curve = BaseCurve(samples, closed=single_closed)
        parts.append(lift_base_curve(curve, n_beta))
    for i in range(1, len(arcs)):
        junction_angles.append(lift_angles(*arcs[i].start))
    if closed_chain:
        junction_angles.append(lift_angles(*arcs[0].start))
    return ArcsShape(
        parts=tuple(parts), junctions=tuple(junction_angles), closed_chain=closed_chain
    )
