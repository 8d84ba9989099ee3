"""hopf4d: Hopf fibration geometry engine with double orthogonal projection,
stereographic imaging, Hopf tori, constellations, filament packings, and a
scene-document interface for external viewers."""

from .geometry import (
    BaseAngles,
    Circle4,
    ComplexPair,
    FiberParams,
    Point3,
    Point4,
    Polyline3,
    Polyline4,
    angles_from_base_point,
    antipodal_point,
    fiber_circle,
    fiber_point,
    hopf_map,
    sample_fiber,
    spherical_point,
)
from .projection import (
    DEFAULT_FRAME,
    LatitudeSphere,
    ViewFrame,
    inverse_stereo_plane_to_base,
    latitude_sphere_of,
    omega_image,
    stereographic_closed_form,
    stereographic_point,
    stereographic_sphere_image,
    translate_to_view,
    xi_image,
)
from .scene import SceneDocument, SceneObject, build_scene, export_obj, read_scene, write_scene

__all__ = [
    "BaseAngles",
    "Circle4",
    "ComplexPair",
    "FiberParams",
    "Point3",
    "Point4",
    "Polyline3",
    "Polyline4",
    "angles_from_base_point",
    "antipodal_point",
    "fiber_circle",
    "fiber_point",
    "hopf_map",
    "sample_fiber",
    "spherical_point",
    "DEFAULT_FRAME",
    "LatitudeSphere",
    "ViewFrame",
    "inverse_stereo_plane_to_base",
    "latitude_sphere_of",
    "omega_image",
    "stereographic_closed_form",
    "stereographic_point",
    "stereographic_sphere_image",
    "translate_to_view",
    "xi_image",
    "SceneDocument",
    "SceneObject",
    "build_scene",
    "export_obj",
    "read_scene",
    "write_scene",
]

__version__ = "0.1.0"
