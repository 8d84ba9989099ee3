"""Polyhedral vertex sets on the base sphere, PolSK/PSK constellations, and
twisted-filament packings with tangency graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analysis
from .errors import BadPhaseCount, RadiusTooLarge, UnknownKind
from .geometry import (
    TAU,
    BaseAngles,
    Point3,
    Polyline3,
    Polyline4,
    angles_from_base_point,
    fiber_points_array,
    sample_fiber,
)
from .projection import (
    fiber_passes_through_center,
    n_fiber_image_segment,
    stereo_image_array,
)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

POLYHEDRON_KINDS = (
    "triangle",
    "tetrahedron",
    "hexahedron",
    "octahedron",
    "icosahedron",
    "dodecahedron",
    "tetrakis_hexahedron",
    "buckminsterfullerene",
)


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Named set of distinct unit points on the base sphere."""

    name: str
    points: np.ndarray  # (n, 3)

    def __post_init__(self) -> None:
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 2 or p.shape[1] != 3:
            raise ValueError(f"expected (n, 3) points, got {p.shape}")
        if np.max(np.abs(np.linalg.norm(p, axis=1) - 1.0)) > 1e-12:
            raise ValueError("vertex set points must be unit")
        if p.shape[0] > 1:
            d2 = np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=2)
            np.fill_diagonal(d2, np.inf)
            if float(np.min(d2)) <= (1e-9) ** 2:  # chord ~ angle at this scale
                raise ValueError("vertex set points must be pairwise distinct")
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def base_angles(self) -> list[BaseAngles]:
        return [angles_from_base_point(Point3.from_array(q)).angles for q in self.points]


@dataclass(frozen=True, eq=False)
class Constellation:
    """n fibers x m phases: every vertex carries m equally spaced points."""

    source: VertexSet
    m: int
    beta_offset: float
    points4: np.ndarray  # (n*m, 4), grouped by fiber

    def __post_init__(self) -> None:
        p = np.asarray(self.points4, dtype=float)
        if p.shape != (len(self.source) * self.m, 4):
            raise ValueError(f"expected ({len(self.source) * self.m}, 4) points")
        if np.max(np.abs(np.linalg.norm(p, axis=1) - 1.0)) > 1e-12:
            raise ValueError("constellation points must be unit")
        if self.m >= 2:
            per_fiber = p.reshape(len(self.source), self.m, 4)
            chords = np.linalg.norm(per_fiber - np.roll(per_fiber, -1, axis=1), axis=2)
            if float(np.max(chords) - np.min(chords)) > 1e-12:
                raise ValueError("per-fiber spacing is not uniform")
        object.__setattr__(self, "points4", p)


@dataclass(frozen=True)
class TangencyGraph:
    """Symmetric tangency relation over vertex indices; no self-loops."""

    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    disk_radius: float

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-loop in tangency graph")
            if not (i in self.nodes and j in self.nodes):
                raise ValueError("edge endpoint outside node set")
            if i > j:
                raise ValueError("edges must be stored as sorted pairs")

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges if node in e)


def _normalized(rows) -> np.ndarray:
    p = np.asarray(rows, dtype=float)
    return p / np.linalg.norm(p, axis=1, keepdims=True)


def _canonical_order(p: np.ndarray) -> np.ndarray:
    snapped = np.round(p, 12)
    order = np.lexsort((snapped[:, 0], snapped[:, 1], snapped[:, 2]))
    return p[order]


def _cyclic(rows) -> list[list[float]]:
    out = []
    for r in rows:
        out.extend([[r[0], r[1], r[2]], [r[1], r[2], r[0]], [r[2], r[0], r[1]]])
    return out


def _sign_spread(pattern) -> list[list[float]]:
    out = []
    n = len(pattern)
    free = [i for i, v in enumerate(pattern) if v != 0]
    for bits in range(2 ** len(free)):
        row = list(map(float, pattern))
        for k, idx in enumerate(free):
            if bits >> k & 1:
                row[idx] = -row[idx]
        out.append(row)
    assert n == 3
    return out


def _icosahedron_raw() -> np.ndarray:
    return np.array(_cyclic(_sign_spread([0.0, 1.0, GOLDEN])))


def polyhedron_vertices(kind: str) -> VertexSet:
    """Canonical unit-sphere vertices for the supported solids.

    Orientations are fixed (cube axis-aligned, icosahedral solids in the
    standard frame with 2-fold axes along the coordinate axes); tangency
    graphs are invariant under global rotations, so the choice is free.
    """
    if kind == "triangle":
        pts = np.array(
            [[math.cos(TAU * k / 3), math.sin(TAU * k / 3), 0.0] for k in range(3)]
        )
    elif kind == "tetrahedron":
        pts = _normalized([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
    elif kind == "hexahedron":
        pts = _normalized(_sign_spread([1.0, 1.0, 1.0]))
    elif kind == "octahedron":
        pts = np.array(_sign_spread([1.0, 0.0, 0.0]) + _sign_spread([0.0, 1.0, 0.0]) + _sign_spread([0.0, 0.0, 1.0]))
    elif kind == "icosahedron":
        pts = _normalized(_icosahedron_raw())
    elif kind == "dodecahedron":
        rows = _sign_spread([1.0, 1.0, 1.0])
        rows += _cyclic(_sign_spread([0.0, 1.0 / GOLDEN, GOLDEN]))
        pts = _normalized(rows)
    elif kind == "tetrakis_hexahedron":
        cube = _normalized(_sign_spread([1.0, 1.0, 1.0]))
        octa = polyhedron_vertices("octahedron").points
        pts = np.vstack([cube, octa])
    elif kind == "buckminsterfullerene":
        ico = _icosahedron_raw()
        d2 = np.sum((ico[:, None, :] - ico[None, :, :]) ** 2, axis=2)
        pts_list = []
        edge2 = 4.0  # icosahedron edge length is 2 at this scale
        for i in range(len(ico)):
            for j in range(len(ico)):
                if i != j and abs(d2[i, j] - edge2) < 1e-9:
                    pts_list.append((2.0 * ico[i] + ico[j]) / 3.0)
        pts = _normalized(pts_list)
    else:
        raise UnknownKind(f"unknown polyhedron kind {kind!r}")
    return VertexSet(name=kind, points=_canonical_order(pts))


def modulation_constellation(
    vs: VertexSet, m: int, beta_offset: float = 0.0
) -> Constellation:
    """Sample every vertex fiber at m phases beta_offset + 2*pi*k/m."""
    if m < 1:
        raise BadPhaseCount(f"need m >= 1, got {m}")
    betas = beta_offset + TAU * np.arange(m) / m
    blocks = [fiber_points_array(b, betas) for b in vs.base_angles()]
    return Constellation(
        source=vs, m=m, beta_offset=float(beta_offset), points4=np.vstack(blocks)
    )


def _angular_distances(points: np.ndarray) -> np.ndarray:
    dots = np.clip(points @ points.T, -1.0, 1.0)
    return np.arccos(dots)


def disk_tangency_graph(vs: VertexSet, radius: float | None = None) -> TangencyGraph:
    """Equal disks around the vertices; an edge records a tangent pair.

    The default radius is half the minimum pairwise angular distance: the
    largest radius at which no two disks overlap.
    """
    n = len(vs)
    nodes = tuple(range(n))
    if n < 2:
        return TangencyGraph(nodes, frozenset(), float(radius or 0.0))
    theta = _angular_distances(vs.points)
    iu = np.triu_indices(n, k=1)
    min_theta = float(np.min(theta[iu]))
    if radius is None:
        radius = min_theta / 2.0
    elif radius > min_theta / 2.0 + 1e-9:
        raise RadiusTooLarge(
            f"radius {radius} exceeds the packing bound {min_theta / 2.0}"
        )
    edges = frozenset(
        (int(i), int(j))
        for i, j in zip(*iu)
        if abs(theta[i, j] - 2.0 * radius) <= 1e-6
    )
    return TangencyGraph(nodes, edges, float(radius))


@dataclass(frozen=True, eq=False)
class FilamentBackbone:
    """One vertex fiber as a 4-space polyline plus its stereographic image."""

    fiber: Polyline4
    stereo: Polyline3
    at_infinity: bool


def filament_backbones(vs: VertexSet, samples: int = 256) -> list[FilamentBackbone]:
    """Fiber polyline per vertex; a fiber through N gets a line-segment
    stereographic stand-in flagged ``at_infinity``."""
    out = []
    for b in vs.base_angles():
        fiber = sample_fiber(b, samples)
        if fiber_passes_through_center(b.psi):
            stereo = Polyline3(n_fiber_image_segment(), closed=False)
            out.append(FilamentBackbone(fiber, stereo, True))
            continue
        img, valid = stereo_image_array(fiber.vertices)
        out.append(FilamentBackbone(fiber, Polyline3(img[valid], closed=True), False))
    return out


def filament_tangency_graph(
    vs: VertexSet, tube_scale: float = 1.05, samples: int = 256
) -> TangencyGraph:
    """Tangency of twisted filaments, detected from inter-fiber distances.

    Fibers are sampled and an edge is recorded where the pairwise minimum
    distance stays within ``tube_scale`` of the global minimum (tangent tubes
    have the smallest possible clearance).  ``disk_radius`` reports the base
    disk radius the tangencies correspond to.
    """
    n = len(vs)
    nodes = tuple(range(n))
    if n < 2:
        return TangencyGraph(nodes, frozenset(), 0.0)
    fibers = [sample_fiber(b, samples) for b in vs.base_angles()]
    dist = np.full((n, n), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = analysis.min_distance(fibers[i], fibers[j])
    global_min = float(np.min(dist))
    edges = frozenset(
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if dist[i, j] <= tube_scale * global_min
    )
    theta = _angular_distances(vs.points)
    iu = np.triu_indices(n, k=1)
    return TangencyGraph(nodes, edges, float(np.min(theta[iu])) / 2.0)
