"""Scene documents: the serialized boundary between the geometry engine and
external viewers.

A scene collects points, polylines, meshes, and spheres tagged by the image
space they live in (base, xi, omega, stereo).  Objects produced from one
4-space source share a ``meta.group`` key, mirroring linked visibility groups.
Serialization is canonical: sorted keys, 17-significant-digit floats, flat
vertex arrays; building the same scene twice yields byte-identical files.
"""

from __future__ import annotations

import colorsys
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from . import arrangements, surfaces
from .errors import (
    EmptySelection,
    Hopf4dError,
    ParseError,
    UnknownRequest,
    UnknownVersion,
)
from .geometry import TAU, BaseAngles, Point4, sample_fiber, spherical_point
from .projection import (
    DEFAULT_FRAME,
    ViewFrame,
    fiber_passes_through_center,
    n_fiber_image_segment,
    omega_image_array,
    stereo_image_array,
    translate_array,
    xi_image_array,
)

SCENE_VERSION = 1

KINDS = ("point", "polyline", "mesh", "sphere")
SPACES = ("base", "xi", "omega", "stereo")

SPACE_COLORS = {
    "base": "#555555",
    "xi": "#1f77b4",
    "omega": "#d62728",
    "stereo": "#2ca02c",
}
FRAME_COLOR = "#bbbbbb"

MetaValue = str | int | float | bool


@dataclass(frozen=True)
class Style:
    color: str = "#555555"
    opacity: float = 1.0

    def __post_init__(self) -> None:
        c = self.color
        if len(c) != 7 or c[0] != "#" or any(ch not in "0123456789abcdef" for ch in c[1:]):
            raise ValueError(f"color must be lowercase #rrggbb, got {c!r}")
        if not 0.0 <= self.opacity <= 1.0:
            raise ValueError(f"opacity must be in [0, 1], got {self.opacity}")


@dataclass(frozen=True, eq=False)
class SceneObject:
    id: str
    kind: str
    space: str
    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray | None = None  # (m, 4) for meshes
    style: Style = Style()
    meta: dict[str, MetaValue] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("object id must be nonempty")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or not np.all(np.isfinite(v)):
            raise ValueError("vertices must be a finite (n, 3) array")
        if self.kind == "mesh":
            if self.faces is None:
                raise ValueError("mesh objects require faces")
            f = np.asarray(self.faces, dtype=np.int64)
            if f.ndim != 2 or f.shape[1] != 4:
                raise ValueError("faces must be an (m, 4) index array")
            if f.size and (f.min() < 0 or f.max() >= v.shape[0]):
                raise ValueError("face index out of range")
            object.__setattr__(self, "faces", f)
        elif self.faces is not None:
            raise ValueError(f"{self.kind} objects must not carry faces")
        if self.kind == "sphere":
            if v.shape[0] != 1:
                raise ValueError("sphere objects carry exactly one center vertex")
            if "radius" not in self.meta:
                raise ValueError("sphere objects require meta['radius']")
        if "group" not in self.meta:
            raise ValueError("objects require a meta['group'] key")
        for key, value in self.meta.items():
            if isinstance(value, (np.floating, np.integer, np.bool_)):
                self.meta[key] = value.item()
            elif not isinstance(value, (str, int, float, bool)):
                raise ValueError(f"meta[{key!r}] has unsupported type {type(value)}")
        object.__setattr__(self, "vertices", v)


@dataclass(frozen=True, eq=False)
class SceneDocument:
    objects: tuple[SceneObject, ...]
    frame: ViewFrame = DEFAULT_FRAME
    version: int = SCENE_VERSION

    def __post_init__(self) -> None:
        if self.version != SCENE_VERSION:
            raise UnknownVersion(f"unsupported scene version {self.version}")
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate object ids: {dup}")
        object.__setattr__(self, "objects", tuple(self.objects))

    def by_id(self, object_id: str) -> SceneObject:
        for o in self.objects:
            if o.id == object_id:
                return o
        raise KeyError(object_id)

    def groups(self) -> dict[str, list[SceneObject]]:
        out: dict[str, list[SceneObject]] = {}
        for o in self.objects:
            out.setdefault(str(o.meta["group"]), []).append(o)
        return out


def validate_groups(doc: SceneDocument) -> None:
    """Every group that carries image-space objects must be complete: a base
    trace plus xi, omega, and stereo siblings."""
    for name, objs in doc.groups().items():
        spaces = {o.space for o in objs}
        if spaces & {"xi", "omega", "stereo"} and name != "frame":
            missing = {"base", "xi", "omega", "stereo"} - spaces
            if missing:
                raise ValueError(f"group {name!r} is missing spaces {sorted(missing)}")


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(float(x), ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _encode(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(float(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda kv: kv[0])
        return "{" + ",".join(f"{json.dumps(k)}:{_encode(v)}" for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _encode(value.tolist())
    raise TypeError(f"cannot serialize {type(value)}")


def _object_payload(o: SceneObject) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "id": o.id,
        "kind": o.kind,
        "space": o.space,
        "vertices": [float(x) for x in o.vertices.reshape(-1)],
        "style": {"color": o.style.color, "opacity": float(o.style.opacity)},
        "meta": dict(o.meta),
    }
    if o.faces is not None:
        payload["faces"] = [[int(i) for i in quad] for quad in o.faces]
    return payload


def write_scene(doc: SceneDocument) -> bytes:
    """Canonical UTF-8 JSON bytes; read(write(doc)) reproduces the document."""
    frame = doc.frame
    payload = {
        "version": doc.version,
        "frame": {
            "sphere_center": list(frame.sphere_center.as_array()),
            "projection_center": list(frame.projection_center.as_array()),
            "tangent_point": list(frame.tangent_point.as_array()),
        },
        "objects": [_object_payload(o) for o in doc.objects],
    }
    return _encode(payload).encode("utf-8")


def read_scene(data: bytes | str) -> SceneDocument:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ParseError("top-level value must be an object")
    version = raw.get("version")
    if version != SCENE_VERSION:
        raise UnknownVersion(f"unsupported scene version {version!r}")
    try:
        frame_raw = raw["frame"]
        frame = ViewFrame(
            sphere_center=Point4(*frame_raw["sphere_center"]),
            projection_center=Point4(*frame_raw["projection_center"]),
            tangent_point=Point4(*frame_raw["tangent_point"]),
        )
        objects = []
        for entry in raw["objects"]:
            flat = np.asarray(entry["vertices"], dtype=float)
            if flat.size % 3 != 0:
                raise ParseError(f"object {entry.get('id')!r}: vertex array not triples")
            style_raw = entry.get("style", {})
            objects.append(
                SceneObject(
                    id=entry["id"],
                    kind=entry["kind"],
                    space=entry["space"],
                    vertices=flat.reshape(-1, 3),
                    faces=np.asarray(entry["faces"], dtype=np.int64)
                    if "faces" in entry
                    else None,
                    style=Style(
                        color=style_raw.get("color", "#555555"),
                        opacity=float(style_raw.get("opacity", 1.0)),
                    ),
                    meta=dict(entry.get("meta", {})),
                )
            )
    except (KeyError, TypeError, IndexError) as e:
        raise ParseError(f"malformed scene document: {e}") from e
    return SceneDocument(objects=tuple(objects), frame=frame, version=version)


# ---------------------------------------------------------------------------
# OBJ export
# ---------------------------------------------------------------------------


def export_obj(doc: SceneDocument, space_filter: str) -> bytes:
    """Wavefront OBJ of the meshes and polylines in one image space.

    One ``o <id>`` group per object, ordered by id; 1-based global vertex
    indices; quad ``f`` records for meshes and ``l`` records for polylines
    (closed polylines repeat their first vertex).
    """
    if space_filter not in SPACES:
        raise ValueError(f"unknown space {space_filter!r}")
    exportable = sorted(
        (
            o
            for o in doc.objects
            if o.space == space_filter and o.kind in ("mesh", "polyline")
        ),
        key=lambda o: o.id,
    )
    if not exportable:
        raise EmptySelection(f"no mesh or polyline objects in space {space_filter!r}")
    lines: list[str] = []
    offset = 1
    for o in exportable:
        lines.append(f"o {o.id}")
        for v in o.vertices:
            lines.append(f"v {_fmt_float(v[0])} {_fmt_float(v[1])} {_fmt_float(v[2])}")
        if o.kind == "mesh":
            for quad in o.faces:
                a, b, c, d = (int(i) + offset for i in quad)
                lines.append(f"f {a} {b} {c} {d}")
        else:
            idx = [str(i + offset) for i in range(o.vertices.shape[0])]
            if bool(o.meta.get("closed", False)):
                idx.append(str(offset))
            lines.append("l " + " ".join(idx))
        offset += o.vertices.shape[0]
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# scene builders
# ---------------------------------------------------------------------------

_BASE_SHIFT = np.array([0.0, 1.0, 0.0])  # B^2 is drawn about (0, 1, 0)


def _ramp_color(index: int, total: int) -> str:
    t = index / max(total - 1, 1)
    r, g, b = colorsys.hsv_to_rgb(0.66 * (1.0 - t), 0.75, 0.92)
    return "#{:02x}{:02x}{:02x}".format(int(r * 255), int(g * 255), int(b * 255))


def _frame_objects() -> list[SceneObject]:
    style = Style(color=FRAME_COLOR, opacity=0.15)
    meta = {"group": "frame", "radius": 1.0}
    return [
        SceneObject(
            "base-sphere", "sphere", "base", np.array([[0.0, 1.0, 0.0]]), style=style,
            meta=dict(meta),
        ),
        SceneObject(
            "contour-xi", "sphere", "xi", np.array([[0.0, 1.0, 0.0]]), style=style,
            meta=dict(meta),
        ),
        SceneObject(
            "contour-omega", "sphere", "omega", np.array([[0.0, -1.0, 0.0]]),
            style=style, meta=dict(meta),
        ),
    ]


def _space_style(space: str, color: str | None, opacity: float = 1.0) -> Style:
    return Style(color=color or SPACE_COLORS[space], opacity=opacity)


def _fiber_objects(
    prefix: str,
    b: BaseAngles,
    samples: int,
    group: str,
    color: str | None = None,
) -> list[SceneObject]:
    """Base point plus the three images of one fiber."""
    meta = {"group": group, "phi": b.phi, "psi": b.psi}
    base_vertex = spherical_point(b).as_array() + _BASE_SHIFT
    fiber4 = sample_fiber(b, samples).vertices
    translated = translate_array(fiber4)
    objs = [
        SceneObject(
            f"{prefix}-base", "point", "base", base_vertex[None, :],
            style=_space_style("base", color), meta=dict(meta),
        ),
        SceneObject(
            f"{prefix}-xi", "polyline", "xi", xi_image_array(translated),
            style=_space_style("xi", color), meta=dict(meta) | {"closed": True},
        ),
        SceneObject(
            f"{prefix}-omega", "polyline", "omega", omega_image_array(translated),
            style=_space_style("omega", color), meta=dict(meta) | {"closed": True},
        ),
    ]
    if fiber_passes_through_center(b.psi):
        objs.append(
            SceneObject(
                f"{prefix}-stereo", "polyline", "stereo", n_fiber_image_segment(),
                style=_space_style("stereo", color),
                meta=dict(meta) | {"closed": False, "at_infinity": True},
            )
        )
    else:
        img, valid = stereo_image_array(fiber4)
        objs.append(
            SceneObject(
                f"{prefix}-stereo", "polyline", "stereo", img[valid],
                style=_space_style("stereo", color), meta=dict(meta) | {"closed": True},
            )
        )
    return objs


def _mesh_object(
    object_id: str,
    mesh: surfaces.SurfaceMesh,
    group: str,
    meta: dict[str, MetaValue],
    color: str | None = None,
    opacity: float = 0.85,
) -> SceneObject:
    return SceneObject(
        object_id, "mesh", mesh.space_tag, mesh.vertices, faces=mesh.faces,
        style=_space_style(mesh.space_tag, color, opacity),
        meta={"group": group} | meta,
    )


def _torus_objects(
    prefix: str, bundle: surfaces.TorusBundle, group: str, color: str | None = None,
    extra_meta: dict[str, MetaValue] | None = None,
) -> list[SceneObject]:
    angle_key = "psi" if bundle.mode == "kappa" else "phi"
    meta: dict[str, MetaValue] = {"mode": bundle.mode, angle_key: bundle.angle}
    meta |= extra_meta or {}
    base_pts = bundle.base_circle_points() + _BASE_SHIFT
    stereo = surfaces.torus_stereo(bundle)
    return [
        SceneObject(
            f"{prefix}-base", "polyline", "base", base_pts,
            style=_space_style("base", color),
            meta={"group": group} | meta | {"closed": bundle.mode == "kappa"},
        ),
        _mesh_object(f"{prefix}-xi", bundle.xi, group, meta, color),
        _mesh_object(f"{prefix}-omega", bundle.omega, group, meta, color),
        _mesh_object(f"{prefix}-stereo", stereo, group, meta, color),
    ]


def _parse_grid(raw, mode: str) -> surfaces.ParamGrid | None:
    if raw is None:
        return None
    n_u, n_v = int(raw[0]), int(raw[1])
    if mode == "kappa":
        return surfaces.ParamGrid(n_u, n_v)
    return surfaces.ParamGrid(n_u, n_v, v_range=(0.0, math.pi), closed_v=False)


def _build_fiber(req: Mapping) -> list[SceneObject]:
    b = BaseAngles(float(req["phi"]), float(req["psi"]))
    samples = int(req.get("samples", 256))
    return _fiber_objects("fiber", b, samples, "fiber")


def _build_torus(req: Mapping) -> list[SceneObject]:
    mode = str(req["mode"])
    if mode == "kappa":
        bundle = surfaces.torus_kappa(float(req["psi"]), _parse_grid(req.get("grid"), mode))
    elif mode == "mu":
        bundle = surfaces.torus_mu(float(req["phi"]), _parse_grid(req.get("grid"), mode))
    else:
        raise ValueError(f"unknown torus mode {mode!r}")
    return _torus_objects("torus", bundle, "torus")


def _build_nested(req: Mapping) -> list[SceneObject]:
    family = str(req.get("family", "xy"))
    if family == "xy":
        count = int(req.get("count", 12))
        fam = surfaces.nested_family_xy(count, _parse_grid(req.get("grid"), "kappa"))
    elif family == "z":
        count = int(req.get("count", 6))
        fam = surfaces.nested_family_z(count, _parse_grid(req.get("grid"), "mu"))
    else:
        raise ValueError(f"unknown nested family {family!r}")
    objs: list[SceneObject] = []
    total = len(fam.members)
    for k, member in enumerate(fam.members):
        color = _ramp_color(k, total)
        meta: dict[str, MetaValue] = {"family": family, "family_index": k}
        if member.kind == "torus":
            objs.extend(
                _torus_objects(
                    f"torus-{k:02d}", member.torus, f"torus-{k:02d}", color, meta
                )
            )
        else:
            angles = BaseAngles(0.0, member.angle)
            objs.extend(
                o_with_meta(o, meta)
                for o in _fiber_objects(
                    f"circle-{k:02d}", angles, 128, f"circle-{k:02d}", color
                )
            )
    return objs


def o_with_meta(o: SceneObject, extra: dict[str, MetaValue]) -> SceneObject:
    return SceneObject(
        o.id, o.kind, o.space, o.vertices, faces=o.faces, style=o.style,
        meta=dict(o.meta) | extra,
    )


def _build_curve_lift(req: Mapping) -> list[SceneObject]:
    rows = req["curve"]
    samples = tuple(BaseAngles(float(r[0]), float(r[1])) for r in rows)
    curve = surfaces.BaseCurve(samples, closed=bool(req.get("closed", True)))
    bundle = surfaces.lift_base_curve(curve, int(req.get("n_beta", 96)))
    base_pts = curve.sphere_points() + _BASE_SHIFT
    meta: dict[str, MetaValue] = {"n_curve": len(curve.samples)}
    return [
        SceneObject(
            "lift-base", "polyline", "base", base_pts,
            style=_space_style("base", None),
            meta={"group": "lift", "closed": curve.closed} | meta,
        ),
        _mesh_object("lift-xi", bundle.xi, "lift", meta),
        _mesh_object("lift-omega", bundle.omega, "lift", meta),
        _mesh_object("lift-stereo", bundle.stereo, "lift", meta),
    ]


def _build_arcs_shape(req: Mapping) -> list[SceneObject]:
    arcs = [
        surfaces.Arc2(
            center=(float(a["center"][0]), float(a["center"][1])),
            radius=float(a["radius"]),
            theta0=float(a["theta0"]),
            theta1=float(a["theta1"]),
        )
        for a in req["arcs"]
    ]
    shape = surfaces.arcs_shape_pipeline(
        arcs,
        samples_per_arc=int(req.get("samples_per_arc", 48)),
        n_beta=int(req.get("n_beta", 96)),
    )
    objs: list[SceneObject] = []
    total = len(shape.parts)
    for k, part in enumerate(shape.parts):
        color = _ramp_color(k, max(total, 2))
        group = f"arc-{k:02d}"
        meta: dict[str, MetaValue] = {"arc_index": k}
        base_pts = part.curve.sphere_points() + _BASE_SHIFT
        objs.append(
            SceneObject(
                f"{group}-base", "polyline", "base", base_pts,
                style=_space_style("base", color),
                meta={"group": group, "closed": part.curve.closed} | meta,
            )
        )
        objs.append(_mesh_object(f"{group}-xi", part.xi, group, meta, color))
        objs.append(_mesh_object(f"{group}-omega", part.omega, group, meta, color))
        objs.append(_mesh_object(f"{group}-stereo", part.stereo, group, meta, color))
    for k, junction in enumerate(shape.junctions):
        objs.extend(
            _fiber_objects(f"junction-{k:02d}", junction, 96, f"junction-{k:02d}")
        )
    return objs


def _build_modulation(req: Mapping) -> list[SceneObject]:
    vs = arrangements.polyhedron_vertices(str(req["poly"]))
    m = int(req["m"])
    beta_offset = float(req.get("beta_offset", 0.0))
    constellation = arrangements.modulation_constellation(vs, m, beta_offset)
    meta: dict[str, MetaValue] = {"poly": vs.name, "m": m, "count": len(vs) * m}
    translated = translate_array(constellation.points4)
    stereo_pts, valid = stereo_image_array(constellation.points4)
    objs = [
        SceneObject(
            "constellation-base", "point", "base", vs.points + _BASE_SHIFT,
            style=_space_style("base", None), meta={"group": "constellation"} | meta,
        ),
        SceneObject(
            "constellation-xi", "point", "xi", xi_image_array(translated),
            style=_space_style("xi", None), meta={"group": "constellation"} | meta,
        ),
        SceneObject(
            "constellation-omega", "point", "omega", omega_image_array(translated),
            style=_space_style("omega", None), meta={"group": "constellation"} | meta,
        ),
        SceneObject(
            "constellation-stereo", "point", "stereo", stereo_pts[valid],
            style=_space_style("stereo", None),
            meta={"group": "constellation"} | meta
            | {"masked": int(np.sum(~valid))},
        ),
    ]
    for k, b in enumerate(vs.base_angles()):
        objs.extend(
            _fiber_objects(
                f"fiber-{k:02d}", b, 128, f"fiber-{k:02d}",
                _ramp_color(k, len(vs)),
            )
        )
    return objs


def _disk_circle_points(center: np.ndarray, radius: float, n: int = 96) -> np.ndarray:
    """Circle of angular radius ``radius`` around a unit vector, on B^2."""
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(center)))] = 1.0
    e1 = np.cross(center, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(center, e1)
    t = TAU * np.arange(n) / n
    ring = (
        math.cos(radius) * center[None, :]
        + math.sin(radius)
        * (np.cos(t)[:, None] * e1[None, :] + np.sin(t)[:, None] * e2[None, :])
    )
    return ring


def _build_packing(req: Mapping) -> list[SceneObject]:
    vs = arrangements.polyhedron_vertices(str(req["poly"]))
    radius = req.get("radius")
    graph = arrangements.disk_tangency_graph(vs, None if radius is None else float(radius))
    samples = int(req.get("samples", 256))
    backbones = arrangements.filament_backbones(vs, samples)
    objs: list[SceneObject] = []
    for k, (q, backbone) in enumerate(zip(vs.points, backbones)):
        group = f"filament-{k:02d}"
        color = _ramp_color(k, len(vs))
        neighbors = sorted(j for (i, j) in graph.edges if i == k) + sorted(
            i for (i, j) in graph.edges if j == k
        )
        meta: dict[str, MetaValue] = {
            "group": group,
            "vertex_index": k,
            "disk_radius": graph.disk_radius,
            "neighbors": ",".join(str(n) for n in sorted(neighbors)),
        }
        objs.append(
            SceneObject(
                f"{group}-base", "point", "base", (q + _BASE_SHIFT)[None, :],
                style=_space_style("base", color), meta=dict(meta),
            )
        )
        objs.append(
            SceneObject(
                f"{group}-disk", "polyline", "base",
                _disk_circle_points(q, graph.disk_radius) + _BASE_SHIFT,
                style=_space_style("base", color), meta=dict(meta) | {"closed": True},
            )
        )
        translated = translate_array(backbone.fiber.vertices)
        objs.append(
            SceneObject(
                f"{group}-xi", "polyline", "xi", xi_image_array(translated),
                style=_space_style("xi", color), meta=dict(meta) | {"closed": True},
            )
        )
        objs.append(
            SceneObject(
                f"{group}-omega", "polyline", "omega", omega_image_array(translated),
                style=_space_style("omega", color), meta=dict(meta) | {"closed": True},
            )
        )
        objs.append(
            SceneObject(
                f"{group}-stereo", "polyline", "stereo", backbone.stereo.vertices,
                style=_space_style("stereo", color),
                meta=dict(meta)
                | {"closed": backbone.stereo.closed, "at_infinity": backbone.at_infinity},
            )
        )
    return objs


_BUILDERS = {
    "fiber": _build_fiber,
    "torus": _build_torus,
    "nested": _build_nested,
    "curve_lift": _build_curve_lift,
    "arcs_shape": _build_arcs_shape,
    "modulation": _build_modulation,
    "packing": _build_packing,
}


def build_scene(request: Mapping) -> SceneDocument:
    """Compose a scene for one request; every 4-space source contributes its
    base trace plus xi/omega/stereo images under a shared group key."""
    kind = request.get("request")
    builder = _BUILDERS.get(kind)
    if builder is None:
        raise UnknownRequest(f"unknown request kind {kind!r}")
    try:
        objs = builder(request)
    except Hopf4dError as e:
        raise type(e)(f"{kind} request failed: {e}") from e
    return SceneDocument(objects=tuple(_frame_objects() + objs))
