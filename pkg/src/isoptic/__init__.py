"""Solid-angle fields of convex polyhedra and isoptic surface extraction.

The isoptic surface of a body for a solid angle alpha is the locus of
points from which the body subtends exactly alpha steradians.  This
package models convex polyhedra in face/vertex and halfspace form,
evaluates the subtended solid angle anywhere in space via spherical
excess, cross-checks it against independent oracles, and extracts
isoptic surfaces as watertight triangle meshes.
"""

from .errors import (
    BadAlpha,
    CountMismatch,
    Degenerate,
    EmptySurface,
    IndexOutOfRange,
    IsopticError,
    MeshFormatError,
    NonPlanarFace,
    NotClosed,
    NotConvex,
    OffSyntaxError,
    OnFace,
    SingularRay,
    UnknownSolid,
)
from .field import (
    FieldMode,
    FieldValue,
    SolidAngleField,
    face_solid_angle,
    face_visible,
    field_values,
    isoptic_field,
    polygon_solid_angle,
    wedge_angle,
)
from .geometry import (
    Face,
    HalfspaceSystem,
    PointLocation,
    Polyhedron,
    build_polyhedron,
    circumsphere,
    contains_point,
)
from .isosurface import (
    GridSpec,
    ScalarGrid,
    TriangleMesh,
    bounding_radius,
    extract_isoptic,
    marching_cubes,
    mesh_residual,
    sample_field_grid,
)
from .meshio import parse_off, write_obj, write_off, write_stl
from .oracles import (
    McEstimate,
    fan_face_solid_angle,
    mc_field,
    ray_hits,
    sphere_directions,
    vos_triangle,
)
from .solids import SOLID_NAMES, canonical_solid

__version__ = "0.1.0"

__all__ = [
    "BadAlpha",
    "CountMismatch",
    "Degenerate",
    "EmptySurface",
    "Face",
    "FieldMode",
    "FieldValue",
    "GridSpec",
    "HalfspaceSystem",
    "IndexOutOfRange",
    "IsopticError",
    "McEstimate",
    "MeshFormatError",
    "NonPlanarFace",
    "NotClosed",
    "NotConvex",
    "OffSyntaxError",
    "OnFace",
    "PointLocation",
    "Polyhedron",
    "ScalarGrid",
    "SingularRay",
    "SolidAngleField",
    "SOLID_NAMES",
    "TriangleMesh",
    "UnknownSolid",
    "bounding_radius",
    "build_polyhedron",
    "canonical_solid",
    "circumsphere",
    "contains_point",
    "extract_isoptic",
    "face_solid_angle",
    "face_visible",
    "fan_face_solid_angle",
    "field_values",
    "isoptic_field",
    "marching_cubes",
    "mc_field",
    "mesh_residual",
    "parse_off",
    "polygon_solid_angle",
    "ray_hits",
    "sample_field_grid",
    "sphere_directions",
    "vos_triangle",
    "wedge_angle",
    "write_obj",
    "write_off",
    "write_stl",
]
