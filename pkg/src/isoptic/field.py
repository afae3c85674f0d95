"""Solid-angle field of a convex polyhedron.

The field at an exterior point is the sum, over faces visible from the
point, of the unsigned solid angle subtended by each face; equivalently
half the sum over all faces, because projecting the whole closed
surface covers the visible silhouette twice.  Face solid angles come
from the spherical-excess formula: project the face cycle onto the unit
sphere around the viewpoint and take

    omega = theta - (n - 2) * pi  =  2 * pi - sum_j arccos(c_j),

where theta is the sum of the spherical polygon's interior angles and
c_j is the normalized dot product of the cross products of rays to
consecutive vertex pairs.  Points inside or on the body are assigned
the full sphere, 4*pi.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import OnFace, SingularRay
from .geometry import PointLocation, Polyhedron, contains_point

FULL_SPHERE = 4.0 * math.pi


class FieldMode(enum.Enum):
    """Field evaluation route: visible faces only, or half of all faces."""

    VISIBLE_SUM = "visible"
    HALF_SUM = "half"


@dataclass(frozen=True)
class FieldValue:
    """Field evaluation result: omega in steradians plus the indices of
    the faces visible from the query point (empty for interior and
    boundary points)."""

    omega: float
    visible_faces: tuple[int, ...]


def face_visible(poly: Polyhedron, i: int, point) -> int:
    """Visibility indicator of face ``i``: 1 iff the point lies strictly
    on the outer side of the face plane, else 0."""
    f = poly.faces[i]
    return int(float(f.normal @ np.asarray(point, dtype=float)) > f.offset)


def wedge_angle(x, v_prev, v, v_next, eps_singular: float = 1e-12) -> float:
    """Interior angle at the projection of ``v`` on the unit sphere
    around ``x``, for the spherical polygon through the projections of
    ``v_prev``, ``v``, ``v_next``.

    Computed as pi minus the angle between the planes spanned by
    consecutive ray pairs.  Raises ``SingularRay`` when either cross
    product of consecutive rays has norm below ``eps_singular`` (the
    viewpoint lies on the line through two consecutive vertices).
    """
    x = np.asarray(x, dtype=float)
    u1 = np.cross(np.asarray(v_prev, float) - x, np.asarray(v, float) - x)
    u2 = np.cross(np.asarray(v, float) - x, np.asarray(v_next, float) - x)
    n1 = np.linalg.norm(u1)
    n2 = np.linalg.norm(u2)
    if n1 < eps_singular or n2 < eps_singular:
        raise SingularRay(
            f"viewpoint within {eps_singular:.1e} of a vertex line "
            f"(cross norms {n1:.3e}, {n2:.3e})"
        )
    c = float(u1 @ u2) / (n1 * n2)
    return math.pi - math.acos(max(-1.0, min(1.0, c)))


def _cross_rows(a, b):
    """Row-wise cross product of (N, 3) arrays (faster than np.cross)."""
    out = np.empty_like(a)
    out[:, 0] = a[:, 1] * b[:, 2] - a[:, 2] * b[:, 1]
    out[:, 1] = a[:, 2] * b[:, 0] - a[:, 0] * b[:, 2]
    out[:, 2] = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return out


def _polygon_omega_batch(polygon, points, eps_singular):
    """Spherical-excess solid angle of one polygon from many viewpoints.

    Parameters
    ----------
    polygon : (n, 3) ndarray
        Planar convex cycle.
    points : (N, 3) ndarray
        Viewpoints.
    eps_singular : float
        Cross-product norm threshold marking a point singular.

    Returns
    -------
    omega : (N,) ndarray
        Unsigned solid angles in [0, 2*pi], clamped below at 0 against
        roundoff; garbage where singular.
    singular : (N,) ndarray of bool
        True where some consecutive-ray cross product fell below the
        threshold.
    """
    n = len(polygon)
    rays = [polygon[j] - points for j in range(n)]
    crosses = [_cross_rows(rays[j - 1], rays[j]) for j in range(n)]
    norms = [np.linalg.norm(c, axis=1) for c in crosses]
    singular = np.zeros(len(points), dtype=bool)
    for nrm in norms:
        singular |= nrm < eps_singular
    acc = np.zeros(len(points))
    for j in range(n):
        k = (j + 1) % n
        den = norms[j] * norms[k]
        den = np.where(den == 0.0, 1.0, den)
        cosv = np.einsum("ij,ij->i", crosses[j], crosses[k]) / den
        acc += np.arccos(np.clip(cosv, -1.0, 1.0))
    return np.maximum(2.0 * math.pi - acc, 0.0), singular


def _point_in_convex_polygon(point, polygon, normal, eps):
    """True when a point coplanar with a convex cycle lies inside it or
    within ``eps`` of its boundary."""
    m = len(polygon)
    for i in range(m):
        edge = polygon[(i + 1) % m] - polygon[i]
        # Inward side test: cross(edge, normal) points out of the polygon.
        outward = np.cross(edge, normal)
        outward /= np.linalg.norm(outward)
        if (point - polygon[i]) @ outward > eps:
            return False
    return True


def _check_vertex_line_alignment(x, polygon, eps_singular, label=""):
    """Raise ``SingularRay`` when ``x`` sits on (or within ``eps_singular``
    cross-product norm of) a line through two consecutive cycle vertices."""
    rays = polygon - x
    for j in range(len(polygon)):
        if np.linalg.norm(np.cross(rays[j - 1], rays[j])) < eps_singular:
            raise SingularRay(
                f"query point aligned with a vertex line{label}"
            )


def polygon_solid_angle(x, polygon, eps_singular: float | None = None) -> float:
    """Unsigned solid angle subtended by a planar convex polygon at ``x``.

    Returns exactly 0.0 when ``x`` is coplanar with the polygon but
    outside it.  Raises ``OnFace`` when ``x`` lies inside the polygon
    (the two one-sided limits differ there) and ``SingularRay`` when
    ``x`` is on the line through two consecutive vertices.
    """
    x = np.asarray(x, dtype=float)
    polygon = np.asarray(polygon, dtype=float)
    center = polygon.mean(axis=0)
    scale = float(np.linalg.norm(polygon - center, axis=1).max())
    if eps_singular is None:
        eps_singular = 1e-12 * scale
    rel = polygon - center
    normal = np.zeros(3)
    for i in range(len(polygon)):
        normal += np.cross(rel[i], rel[(i + 1) % len(polygon)])
    normal /= np.linalg.norm(normal)
    eps_plane = 1e-9 * scale
    if abs((x - center) @ normal) <= eps_plane:
        _check_vertex_line_alignment(x, polygon, eps_singular)
        if _point_in_convex_polygon(x, polygon, normal, eps_plane):
            raise OnFace("viewpoint lies inside the polygon")
        return 0.0
    omega, singular = _polygon_omega_batch(polygon, x[None, :], eps_singular)
    if singular[0]:
        raise SingularRay("viewpoint on a line through consecutive vertices")
    return float(omega[0])


def face_solid_angle(poly: Polyhedron, i: int, point) -> float:
    """Unsigned solid angle of face ``i`` seen from ``point``.

    Coplanar viewpoints outside the face polygon give exactly 0; inside
    the polygon raises ``OnFace``.  Independent of cycle orientation and
    starting vertex.
    """
    x = np.asarray(point, dtype=float)
    f = poly.faces[i]
    pts = poly.face_points(i)
    if abs(float(f.normal @ x) - f.offset) <= poly.plane_tolerance:
        _check_vertex_line_alignment(
            x, pts, poly.singular_tolerance, label=f" of face {i}"
        )
        if _point_in_convex_polygon(x, pts, f.normal, poly.plane_tolerance):
            raise OnFace(f"point lies on face {i}")
        return 0.0
    omega, singular = _polygon_omega_batch(pts, x[None, :], poly.singular_tolerance)
    if singular[0]:
        raise SingularRay(f"point aligned with an edge line of face {i}")
    return float(omega[0])


def isoptic_field(poly: Polyhedron, point, mode: FieldMode = FieldMode.VISIBLE_SUM) -> FieldValue:
    """Solid angle subtended by the whole polyhedron at ``point``.

    Interior and boundary points give the full sphere ``4*pi`` with no
    visible faces.  For exterior points the two modes agree: the sum of
    visible-face solid angles equals half the all-face sum.
    """
    x = np.asarray(point, dtype=float)
    if contains_point(poly, x) is not PointLocation.OUTSIDE:
        return FieldValue(omega=FULL_SPHERE, visible_faces=())
    # Alignment with any edge line is out of domain in both modes, even
    # when the faces carrying that edge are invisible and their
    # contribution would not be summed.
    prev, cur = poly.cycle_pairs
    rays = poly.vertices - x
    crossings = _cross_rows(rays[prev], rays[cur])
    if (np.linalg.norm(crossings, axis=1) < poly.singular_tolerance).any():
        raise SingularRay("query point aligned with a body edge line")
    slack = poly.halfspaces.slacks(x)
    visible = tuple(int(i) for i in np.nonzero(slack > 0.0)[0])
    if mode is FieldMode.VISIBLE_SUM:
        omega = sum(face_solid_angle(poly, i, x) for i in visible)
    else:
        omega = 0.5 * sum(
            face_solid_angle(poly, i, x) for i in range(len(poly.faces))
        )
    return FieldValue(omega=float(omega), visible_faces=visible)


def field_values(poly: Polyhedron, points, mode: FieldMode = FieldMode.VISIBLE_SUM):
    """Vectorized field evaluation over an (N, 3) array of points.

    Returns ``(omega, singular)``: the field values (interior and
    boundary points get exactly ``4*pi``) and a boolean mask of points
    whose evaluation hit the wedge-angle singularity.  Singular entries
    hold unusable values and should be re-queried after a small offset.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    slack = poly.halfspaces.slacks(points)
    eps = poly.plane_tolerance
    outside = slack.max(axis=1) > eps
    omega = np.full(len(points), FULL_SPHERE)
    singular = np.zeros(len(points), dtype=bool)
    out_idx = np.nonzero(outside)[0]
    if len(out_idx) == 0:
        return omega, singular
    acc = np.zeros(len(out_idx))
    for i in range(len(poly.faces)):
        pts = poly.face_points(i)
        if mode is FieldMode.VISIBLE_SUM:
            sub = np.nonzero(slack[out_idx, i] > 0.0)[0]
            if len(sub) == 0:
                continue
            om, sing = _polygon_omega_batch(
                pts, points[out_idx[sub]], poly.singular_tolerance
            )
            acc[sub] += om
            singular[out_idx[sub]] |= sing
        else:
            om, sing = _polygon_omega_batch(
                pts, points[out_idx], poly.singular_tolerance
            )
            acc += om
            singular[out_idx] |= sing
    if mode is FieldMode.HALF_SUM:
        acc *= 0.5
    omega[out_idx] = acc
    return omega, singular


@dataclass(frozen=True)
class SolidAngleField:
    """A polyhedron bound to an evaluation mode, exposing the field as a
    plain scalar function plus its vectorized form."""

    polyhedron: Polyhedron
    mode: FieldMode = FieldMode.VISIBLE_SUM

    def value(self, point) -> FieldValue:
        return isoptic_field(self.polyhedron, point, self.mode)

    def values(self, points):
        """Vectorized evaluation; see ``field_values``."""
        return field_values(self.polyhedron, points, self.mode)
