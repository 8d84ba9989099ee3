import math

import numpy as np
import pytest

from hopf4d.arrangements import (
    GOLDEN,
    Constellation,
    TangencyGraph,
    VertexSet,
    disk_tangency_graph,
    filament_backbones,
    filament_tangency_graph,
    modulation_constellation,
    polyhedron_vertices,
)
from hopf4d.errors import BadPhaseCount, RadiusTooLarge, UnknownKind
from hopf4d.geometry import Point3, angles_from_base_point, sample_fiber
from hopf4d.analysis import min_distance

EXPECTED_COUNTS = {
    "triangle": 3,
    "tetrahedron": 4,
    "hexahedron": 8,
    "octahedron": 6,
    "icosahedron": 12,
    "dodecahedron": 20,
    "tetrakis_hexahedron": 14,
    "buckminsterfullerene": 60,
}

EXPECTED_EDGES = {
    "triangle": 3,
    "tetrahedron": 6,
    "hexahedron": 12,
    "octahedron": 12,
    "icosahedron": 30,
    "dodecahedron": 30,
}


def point_set(points: np.ndarray) -> set:
    return {tuple(np.round(p, 10)) for p in points}


def truncated_icosahedron_table() -> np.ndarray:
    """Oracle: the classical explicit coordinates (0, ±1, ±3g), cyclic
    (±1, ±(2+g), ±2g), cyclic (±g, ±2, ±(2g+1)), g the golden ratio."""
    g = GOLDEN
    rows = []

    def spread(a, b, c):
        base = []
        for sa in ((1,) if a == 0 else (1, -1)):
            for sb in ((1,) if b == 0 else (1, -1)):
                for sc in ((1,) if c == 0 else (1, -1)):
                    base.append((sa * a, sb * b, sc * c))
        return base

    for a, b, c in [(0.0, 1.0, 3 * g), (1.0, 2 + g, 2 * g), (g, 2.0, 2 * g + 1)]:
        for x, y, z in spread(a, b, c):
            rows.extend([(x, y, z), (y, z, x), (z, x, y)])
    pts = np.array(rows)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# polyhedron_vertices
# ---------------------------------------------------------------------------


def test_vertex_counts_and_norm():
    for kind, count in EXPECTED_COUNTS.items():
        vs = polyhedron_vertices(kind)
        assert len(vs) == count
        assert np.max(np.abs(np.linalg.norm(vs.points, axis=1) - 1.0)) < 1e-12


def test_unknown_kind():
    with pytest.raises(UnknownKind):
        polyhedron_vertices("teapot")


def test_octahedron_is_axis_aligned():
    vs = polyhedron_vertices("octahedron")
    expected = {
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)
    }
    assert point_set(vs.points) == {tuple(map(float, e)) for e in expected}


def test_tetrakis_is_cube_union_octahedron():
    vs = polyhedron_vertices("tetrakis_hexahedron")
    cube = polyhedron_vertices("hexahedron")
    octa = polyhedron_vertices("octahedron")
    assert point_set(vs.points) == point_set(cube.points) | point_set(octa.points)


def test_fullerene_matches_coordinate_table():
    vs = polyhedron_vertices("buckminsterfullerene")
    assert point_set(vs.points) == point_set(truncated_icosahedron_table())


def test_fullerene_icosahedral_orbit():
    vs = polyhedron_vertices("buckminsterfullerene")
    # 2-fold rotations about the coordinate axes preserve the set
    for flip in (np.diag([1.0, -1, -1]), np.diag([-1.0, 1, -1]), np.diag([-1.0, -1, 1])):
        assert point_set(vs.points @ flip.T) == point_set(vs.points)
    # 5-fold rotation about an icosahedron vertex axis preserves the set
    axis = np.array([0.0, 1.0, GOLDEN])
    axis /= np.linalg.norm(axis)
    c, s = math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5)
    k = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    rot = np.eye(3) * c + s * k + (1 - c) * np.outer(axis, axis)
    rotated = point_set(vs.points @ rot.T)
    assert rotated == point_set(vs.points)


# ---------------------------------------------------------------------------
# modulation constellations
# ---------------------------------------------------------------------------


def test_tetrakis_8psk_size():
    vs = polyhedron_vertices("tetrakis_hexahedron")
    c = modulation_constellation(vs, 8)
    assert c.points4.shape == (112, 4)
    d2 = np.sum((c.points4[:, None, :] - c.points4[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(d2, np.inf)
    assert math.sqrt(float(np.min(d2))) > 1e-6


def test_single_phase_constellation():
    vs = polyhedron_vertices("tetrahedron")
    c = modulation_constellation(vs, 1)
    assert c.points4.shape == (4, 4)


def test_per_fiber_spacing():
    vs = polyhedron_vertices("octahedron")
    for m in (2, 5, 8, 64):
        c = modulation_constellation(vs, m, beta_offset=0.37)
        per_fiber = c.points4.reshape(len(vs), m, 4)
        chords = np.linalg.norm(per_fiber - np.roll(per_fiber, -1, axis=1), axis=2)
        np.testing.assert_allclose(chords, 2.0 * math.sin(math.pi / m), atol=1e-12)


def test_constellation_distinct_at_max_phase_count():
    for kind in ("tetrahedron", "octahedron", "icosahedron"):
        c = modulation_constellation(polyhedron_vertices(kind), 64)
        d2 = np.sum((c.points4[:, None, :] - c.points4[None, :, :]) ** 2, axis=2)
        np.fill_diagonal(d2, np.inf)
        assert math.sqrt(float(np.min(d2))) > 1e-6


def test_bad_phase_count():
    with pytest.raises(BadPhaseCount):
        modulation_constellation(polyhedron_vertices("triangle"), 0)


def test_constellation_validates_spacing():
    vs = polyhedron_vertices("triangle")
    good = modulation_constellation(vs, 4)
    bad_points = good.points4.copy()
    bad_points[1] = sample_fiber(vs.base_angles()[0], 8).vertices[1]
    with pytest.raises(ValueError):
        Constellation(vs, 4, 0.0, bad_points)


# ---------------------------------------------------------------------------
# disk tangency graphs
# ---------------------------------------------------------------------------


def test_octahedron_disk_graph():
    g = disk_tangency_graph(polyhedron_vertices("octahedron"))
    assert g.disk_radius == pytest.approx(math.pi / 4)
    assert len(g.edges) == 12
    assert all(g.degree(i) == 4 for i in g.nodes)


def test_tetrahedron_disk_graph_complete():
    g = disk_tangency_graph(polyhedron_vertices("tetrahedron"))
    assert len(g.edges) == 6


def test_expected_edge_counts():
    for kind, n_edges in EXPECTED_EDGES.items():
        assert len(disk_tangency_graph(polyhedron_vertices(kind)).edges) == n_edges


def test_radius_too_large():
    with pytest.raises(RadiusTooLarge):
        disk_tangency_graph(polyhedron_vertices("octahedron"), radius=math.pi / 3)


def test_disk_graph_rotation_invariant():
    vs = polyhedron_vertices("icosahedron")
    base = disk_tangency_graph(vs)
    rng = np.random.default_rng(5)
    m = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    if np.linalg.det(m) < 0:
        m[:, 0] = -m[:, 0]
    rotated = VertexSet("rotated", vs.points @ m.T)
    assert disk_tangency_graph(rotated).edges == base.edges


# ---------------------------------------------------------------------------
# filament backbones and tangency
# ---------------------------------------------------------------------------


def test_backbone_counts_and_infinity_flag():
    backbones = filament_backbones(polyhedron_vertices("octahedron"), samples=64)
    assert len(backbones) == 6
    # exactly the north-pole vertex fiber passes through N
    assert sum(1 for b in backbones if b.at_infinity) == 1
    for b in backbones:
        if not b.at_infinity:
            assert b.stereo.closed


def test_backbones_pairwise_disjoint():
    backbones = filament_backbones(polyhedron_vertices("octahedron"), samples=128)
    for i in range(len(backbones)):
        for j in range(i + 1, len(backbones)):
            assert min_distance(backbones[i].fiber, backbones[j].fiber) > 1e-4


def test_filament_graph_equals_disk_graph_on_platonics():
    for kind in ("triangle", "tetrahedron", "hexahedron", "octahedron", "icosahedron"):
        vs = polyhedron_vertices(kind)
        assert filament_tangency_graph(vs, samples=128).edges == disk_tangency_graph(vs).edges


def test_icosahedron_filament_graph_size():
    g = filament_tangency_graph(polyhedron_vertices("icosahedron"), samples=128)
    assert len(g.edges) == 30


def test_single_vertex_graph_empty():
    vs = VertexSet("one", np.array([[0.0, 0.0, 1.0]]))
    assert filament_tangency_graph(vs).edges == frozenset()
    assert disk_tangency_graph(vs).edges == frozenset()


def test_fiber_distance_monotone_in_base_separation(rng):
    # larger angular separation never gives a smaller inter-fiber distance
    a = angles_from_base_point(Point3(0, 0, 1)).angles
    rows = []
    for theta in np.linspace(0.2, math.pi, 12):
        q = Point3(math.sin(theta), 0.0, math.cos(theta))
        b = angles_from_base_point(q).angles
        rows.append(
            (theta, min_distance(sample_fiber(a, 128), sample_fiber(b, 128)))
        )
    for (t1, d1), (t2, d2) in zip(rows, rows[1:]):
        assert d1 <= d2 + 1e-6


def test_tangency_graph_type_validation():
    with pytest.raises(ValueError):
        TangencyGraph((0, 1), frozenset({(1, 0)}), 0.1)
    with pytest.raises(ValueError):
        TangencyGraph((0, 1), frozenset({(0, 0)}), 0.1)
