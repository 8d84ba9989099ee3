import math

import numpy as np
import pytest

from hopf4d.analysis import (
    close_segment_to_rectangle,
    collinearity_deviation,
    fit_circle,
    fit_cylinder,
    linking_number,
    min_distance,
)
from hopf4d.errors import (
    CollinearInput,
    CurvesTooClose,
    DegenerateInput,
    DimensionMismatch,
)
from hopf4d.geometry import (
    TAU,
    BaseAngles,
    Point3,
    Polyline3,
    Polyline4,
    fiber_points_array,
    sample_fiber,
)
from hopf4d.projection import stereo_image_array

SQ2 = math.sqrt(2.0)


def circle3(center, radius, e1, e2, n=256) -> np.ndarray:
    t = TAU * np.arange(n) / n
    e1, e2 = np.asarray(e1, float), np.asarray(e2, float)
    return np.asarray(center, float) + radius * (
        np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2
    )


def stereo_fiber(phi, psi, n=512) -> Polyline3:
    betas = TAU * np.arange(n) / n
    pts4 = fiber_points_array(BaseAngles(phi, psi), betas)
    img, valid = stereo_image_array(pts4)
    return Polyline3(img[valid], closed=True)


# ---------------------------------------------------------------------------
# fit_circle
# ---------------------------------------------------------------------------


def test_fit_circle_unit_circle():
    fit = fit_circle(Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True))
    assert fit.center.as_array() == pytest.approx([0, 0, 0], abs=1e-13)
    assert fit.radius == pytest.approx(1.0, abs=1e-13)
    assert fit.max_dev < 1e-12
    assert fit.rms <= fit.max_dev
    assert abs(fit.normal.as_array() @ [0, 0, 1]) == pytest.approx(1.0, abs=1e-12)


def test_fit_circle_stereo_fiber_image():
    # closed-form image of the psi=pi fiber: (0, 2 cos b, 2 sin b + 1)
    fit = fit_circle(stereo_fiber(0.0, math.pi, 256))
    assert fit.radius == pytest.approx(2.0, abs=1e-9)
    assert fit.center.as_array() == pytest.approx([0, 0, 1], abs=1e-9)
    assert abs(fit.normal.as_array() @ [1, 0, 0]) == pytest.approx(1.0, abs=1e-9)
    assert fit.max_dev < 1e-9


def test_fit_circle_collinear_input():
    pts = np.array([[0.0, 0, 0], [1, 0, 0], [2, 0, 0]])
    with pytest.raises(CollinearInput):
        fit_circle(Polyline3(pts))


def test_fit_circle_scale_robustness():
    for radius in (1e-2, 0.3, 1.0, 17.0, 1e2):
        pts = circle3([0.3, -0.7, 1.1], radius, [0, 1, 0], [0, 0, 1], n=128)
        fit = fit_circle(Polyline3(pts, closed=True))
        assert fit.radius == pytest.approx(radius, abs=1e-11)
        assert fit.max_dev < 1e-11


def test_fit_circle_tilted_plane(rng):
    e1 = rng.normal(size=3)
    e1 /= np.linalg.norm(e1)
    e2 = rng.normal(size=3)
    e2 -= (e2 @ e1) * e1
    e2 /= np.linalg.norm(e2)
    fit = fit_circle(Polyline3(circle3([1, 2, 3], 0.75, e1, e2), closed=True))
    assert fit.center.as_array() == pytest.approx([1, 2, 3], abs=1e-12)
    assert fit.radius == pytest.approx(0.75, abs=1e-12)


# ---------------------------------------------------------------------------
# collinearity_deviation
# ---------------------------------------------------------------------------


def test_collinearity_on_axis_points():
    pts = np.stack([np.linspace(-3, 3, 20), np.zeros(20), np.zeros(20)], axis=1)
    assert collinearity_deviation(Polyline3(pts)) < 1e-14


def test_collinearity_of_singular_fiber_image():
    # psi=0 sweep lands on the line z=0, w=1
    assert collinearity_deviation(stereo_fiber(0.7, 0.0, 256)) < 1e-9


def test_collinearity_of_circle_is_radius_scale():
    dev = collinearity_deviation(
        Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]))
    )
    assert dev >= 0.5


# ---------------------------------------------------------------------------
# linking_number
# ---------------------------------------------------------------------------


def test_linking_far_circles_unlinked():
    a = Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    b = Polyline3(circle3([10, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    res = linking_number(a, b)
    assert res.link == 0
    assert abs(res.residual) < 0.05


def test_linking_fiber_images(rng):
    signs = set()
    for _ in range(10):
        phi1, phi2 = rng.uniform(0, TAU, size=2)
        psi1, psi2 = rng.uniform(0.5, math.pi - 0.2, size=2)
        if abs(psi1 - psi2) < 0.05 and abs(phi1 - phi2) < 0.05:
            continue
        res = linking_number(stereo_fiber(phi1, psi1), stereo_fiber(phi2, psi2))
        assert abs(res.link) == 1
        assert abs(res.residual) < 0.05
        signs.add(res.link)
    assert len(signs) == 1


def test_linking_circle_with_closed_line():
    # stereo images of the psi=pi fiber (a circle) and the psi=0 fiber (the
    # line z=0, w=1, closed into a far rectangle) pierce once
    circle = stereo_fiber(0.0, math.pi, 512)
    rect = close_segment_to_rectangle(Point3(-1, 0, 1), Point3(1, 0, 1))
    res = linking_number(circle, rect)
    assert abs(res.link) == 1
    assert abs(res.residual) < 0.05


def test_linking_antisymmetry_and_rigid_invariance(rng):
    a = stereo_fiber(0.3, 1.1)
    b = stereo_fiber(2.1, 2.0)
    res = linking_number(a, b)
    reversed_b = Polyline3(b.vertices[::-1], closed=True)
    assert linking_number(a, reversed_b).link == -res.link
    # fixed rigid motion applied to both curves jointly
    rot_rng = np.random.default_rng(7)
    m = np.linalg.qr(rot_rng.normal(size=(3, 3)))[0]
    if np.linalg.det(m) < 0:
        m[:, 0] = -m[:, 0]
    shift = np.array([0.4, -2.0, 3.3])
    a2 = Polyline3(a.vertices @ m.T + shift, closed=True)
    b2 = Polyline3(b.vertices @ m.T + shift, closed=True)
    assert linking_number(a2, b2).link == res.link


def test_linking_rejects_touching_curves():
    a = Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    with pytest.raises(CurvesTooClose):
        linking_number(a, a)


def test_linking_requires_closed():
    a = Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    open_b = Polyline3(circle3([10, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=False)
    with pytest.raises(ValueError):
        linking_number(a, open_b)


# ---------------------------------------------------------------------------
# min_distance
# ---------------------------------------------------------------------------


def test_min_distance_identical_curves():
    a = sample_fiber(BaseAngles(0.3, 1.0), 64)
    assert min_distance(a, a) == 0.0


def test_min_distance_polar_fibers():
    # fibers of the two base poles live in the (x,y) and (z,w) planes; every
    # point pair is sqrt(2) apart (chord sagitta needs dense sampling)
    north = sample_fiber(BaseAngles(0, 0), 3072)
    south = sample_fiber(BaseAngles(0, math.pi), 3072)
    d = min_distance(north, south)
    assert d == pytest.approx(SQ2, abs=1e-6)


def test_min_distance_tangent_circles():
    a = Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    b = Polyline3(circle3([2, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    assert min_distance(a, b) < 1e-3


def test_min_distance_interior_minimum():
    # closest approach in the middle of both segments, away from all vertices
    a = Polyline3(np.array([[-1.0, 0, 0], [1, 0, 0]]))
    b = Polyline3(np.array([[0.0, -1, 0.25], [0, 1, 0.25]]))
    assert min_distance(a, b) == pytest.approx(0.25, abs=1e-14)


def test_min_distance_dimension_mismatch():
    a = Polyline3(circle3([0, 0, 0], 1.0, [1, 0, 0], [0, 1, 0]), closed=True)
    b = sample_fiber(BaseAngles(0, 1.0), 16)
    with pytest.raises(DimensionMismatch):
        min_distance(a, b)


def test_min_distance_brute_force_oracle(rng):
    # dense point sampling bounds the segment-based answer from above and the
    # two agree to the sampling resolution
    for _ in range(5):
        c1 = rng.normal(size=3)
        c2 = rng.normal(size=3) + 3.0
        a = Polyline3(circle3(c1, 1.3, [1, 0, 0], [0, 1, 0], 64), closed=True)
        b = Polyline3(circle3(c2, 0.8, [0, 1, 0], [0, 0, 1], 64), closed=True)
        dense_a = circle3(c1, 1.3, [1, 0, 0], [0, 1, 0], 1500)
        dense_b = circle3(c2, 0.8, [0, 1, 0], [0, 0, 1], 1500)
        d2 = np.sum((dense_a[:, None, :] - dense_b[None, :, :]) ** 2, axis=2)
        dense = math.sqrt(d2.min())
        # inscribed 64-gons sit within one chord sagitta of their circles
        assert min_distance(a, b) == pytest.approx(dense, abs=5e-3)


def test_min_distance_4d_symmetry(rng):
    a = sample_fiber(BaseAngles(0.2, 0.9), 128)
    b = sample_fiber(BaseAngles(1.7, 2.1), 128)
    assert min_distance(a, b) == pytest.approx(min_distance(b, a), abs=1e-15)
    assert min_distance(a, b) > 0.0


# ---------------------------------------------------------------------------
# fit_cylinder
# ---------------------------------------------------------------------------


def cylinder_points(radius, axis_point, n=300):
    t = TAU * np.arange(n) / n
    zs = np.linspace(-1, 1, n)
    return np.stack(
        [
            axis_point[0] + radius * np.cos(t),
            axis_point[1] + radius * np.sin(t),
            zs,
        ],
        axis=1,
    )


def test_fit_cylinder_z_axis():
    pts = cylinder_points(SQ2 / 2, [0.0, 1.0])
    fit = fit_cylinder(Polyline3(pts), Point3(0, 0, 1))
    assert fit.radius == pytest.approx(SQ2 / 2, abs=1e-12)
    assert fit.max_dev < 1e-10
    assert fit.axis_point.x == pytest.approx(0.0, abs=1e-12)
    assert fit.axis_point.y == pytest.approx(1.0, abs=1e-12)


def test_fit_cylinder_sphere_negative_control(rng):
    v = rng.normal(size=(200, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    fit = fit_cylinder(Polyline3(v), Point3(0, 0, 1))
    assert fit.max_dev > 0.1


def test_fit_cylinder_degenerate_input():
    with pytest.raises(DegenerateInput):
        fit_cylinder(Polyline3(np.zeros((2, 3)) + [[0, 0, 0], [1, 1, 1]]), Point3(0, 0, 1))
    pts = np.stack([np.zeros(10), np.zeros(10), np.linspace(0, 1, 10)], axis=1)
    with pytest.raises(DegenerateInput):
        fit_cylinder(Polyline3(pts), Point3(0, 0, 1))
    with pytest.raises(DegenerateInput):
        fit_cylinder(Polyline3(cylinder_points(1.0, [0, 0])), Point3(0, 0, 0))
