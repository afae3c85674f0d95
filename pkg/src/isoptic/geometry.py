"""Convex polyhedron model: face/vertex structure plus the derived
halfspace inequality system.

A polyhedron is carried in two aligned representations: the list of
vertices with ordered face cycles, and the system ``A x <= b`` with one
row per face.  Construction validates closedness, planarity and
convexity, and normalizes orientation so every face cycle is
counterclockwise seen from outside and every halfspace normal is an
outward unit vector.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import Degenerate, NonPlanarFace, NotClosed, NotConvex

# Tolerances are scale-invariant: distances are compared against
# these factors times the circumradius.
PLANE_TOL_FACTOR = 1e-9
SINGULAR_TOL_FACTOR = 1e-12


class PointLocation(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Face:
    """One planar face: an ordered vertex cycle with its plane.

    ``normal`` is the outward unit normal and ``offset`` the plane
    constant, so the face plane is ``normal . x == offset`` and the body
    lies in ``normal . x <= offset``.
    """

    cycle: tuple[int, ...]
    normal: np.ndarray
    offset: float


@dataclass(frozen=True)
class HalfspaceSystem:
    """Inequality system ``normals @ x <= offsets``, row i == face i.

    Normals are unit length so that slacks are geometric distances.
    """

    normals: np.ndarray  # (m, 3)
    offsets: np.ndarray  # (m,)

    def __len__(self):
        return len(self.offsets)

    def slacks(self, points):
        """Signed distances ``normals @ p - offsets``; negative inside.

        ``points`` may be a single 3-vector or an (N, 3) array.
        """
        points = np.asarray(points, dtype=float)
        return points @ self.normals.T - self.offsets


@dataclass(frozen=True)
class Polyhedron:
    """Validated closed convex polyhedron.

    Instances are immutable after construction; all query operations are
    read-only and safe for concurrent use.
    """

    vertices: np.ndarray  # (n, 3)
    faces: tuple[Face, ...]
    halfspaces: HalfspaceSystem
    centroid: np.ndarray  # (3,)
    circumradius: float
    name: str = field(default="", compare=False)

    @property
    def plane_tolerance(self) -> float:
        return PLANE_TOL_FACTOR * self.circumradius

    @property
    def singular_tolerance(self) -> float:
        return SINGULAR_TOL_FACTOR * self.circumradius

    @property
    def edge_count(self) -> int:
        return sum(len(f.cycle) for f in self.faces) // 2

    @cached_property
    def cycle_pairs(self):
        """Index arrays (prev, cur) of consecutive cycle vertices over
        all faces; one entry per directed face edge."""
        prev, cur = [], []
        for f in self.faces:
            c = f.cycle
            for j in range(len(c)):
                prev.append(c[j - 1])
                cur.append(c[j])
        return np.array(prev), np.array(cur)

    def face_points(self, i):
        """Vertex coordinates of face ``i`` in cycle order, (n_i, 3)."""
        return self.vertices[list(self.faces[i].cycle)]

    def cycles(self):
        """All face cycles as a list of index tuples."""
        return [f.cycle for f in self.faces]


def _newell_normal(points):
    """Area-weighted normal of a closed cycle (Newell's method)."""
    n = np.zeros(3)
    m = len(points)
    for i in range(m):
        a = points[i]
        b = points[(i + 1) % m]
        n += np.cross(a, b)
    return n


def build_polyhedron(vertices, cycles, name: str = "") -> Polyhedron:
    """Build and validate a convex polyhedron from vertices and face cycles.

    Parameters
    ----------
    vertices : (n, 3) array_like
        Vertex coordinates, n >= 4, all finite.
    cycles : sequence of index sequences
        One ordered vertex cycle per face, each with >= 3 distinct
        in-range indices.  Either winding is accepted; cycles are stored
        counterclockwise as seen from outside.
    name : str
        Optional label carried along for reporting.

    Raises
    ------
    Degenerate
        Fewer than 4 vertices, nonfinite input, a cycle with repeated or
        out-of-range indices, or a zero-area/collinear cycle.
    NonPlanarFace
        A cycle's vertices deviate from their best-fit plane by more
        than the plane tolerance.
    NotClosed
        The cycles do not form a closed surface (an edge not shared by
        exactly two faces with opposite direction, or Euler count != 2).
    NotConvex
        Some vertex lies strictly outside some face plane.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 3:
        raise Degenerate(f"expected (n, 3) vertex array, got {verts.shape}")
    if len(verts) < 4:
        raise Degenerate(f"need at least 4 vertices, got {len(verts)}")
    if not np.all(np.isfinite(verts)):
        raise Degenerate("nonfinite vertex coordinate")

    centroid = verts.mean(axis=0)
    circumradius = float(np.linalg.norm(verts - centroid, axis=1).max())
    if circumradius <= 0.0:
        raise Degenerate("all vertices coincide")
    eps = PLANE_TOL_FACTOR * circumradius

    norm_cycles = []
    normals = []
    offsets = []
    for ci, cyc in enumerate(cycles):
        cyc = tuple(int(i) for i in cyc)
        if len(cyc) < 3:
            raise Degenerate(f"face {ci}: cycle has {len(cyc)} < 3 vertices")
        if len(set(cyc)) != len(cyc):
            raise Degenerate(f"face {ci}: repeated vertex index")
        if min(cyc) < 0 or max(cyc) >= len(verts):
            raise Degenerate(f"face {ci}: vertex index out of range")
        pts = verts[list(cyc)]
        n = _newell_normal(pts)
        nn = np.linalg.norm(n)
        # Newell norm is twice the projected area; vanishes for
        # collinear or zero-area cycles.
        if nn <= 2.0 * eps * circumradius:
            raise Degenerate(f"face {ci}: zero-area or collinear cycle")
        n = n / nn
        offset = float(n @ pts.mean(axis=0))
        dev = np.abs(pts @ n - offset).max()
        if dev > eps:
            raise NonPlanarFace(
                f"face {ci}: vertices deviate {dev:.3e} from plane "
                f"(tolerance {eps:.3e})"
            )
        # Normalize orientation: outward means the body centroid is on
        # the negative side.
        if n @ centroid > offset:
            n = -n
            offset = -offset
            cyc = cyc[::-1]
        norm_cycles.append(cyc)
        normals.append(n)
        offsets.append(offset)

    _check_closed(len(verts), norm_cycles)

    A = np.array(normals)
    b = np.array(offsets)
    slack = verts @ A.T - b
    worst = slack.max()
    if worst > eps:
        raise NotConvex(
            f"vertex {int(np.unravel_index(slack.argmax(), slack.shape)[0])} "
            f"lies {worst:.3e} outside a face plane"
        )
    if (A @ centroid - b).max() >= -eps:
        raise Degenerate("centroid not strictly interior (flat polyhedron)")

    faces = tuple(
        Face(cycle=c, normal=n, offset=o)
        for c, n, o in zip(norm_cycles, normals, offsets)
    )
    return Polyhedron(
        vertices=verts,
        faces=faces,
        halfspaces=HalfspaceSystem(normals=A, offsets=b),
        centroid=centroid,
        circumradius=circumradius,
        name=name,
    )


def _check_closed(n_vertices, cycles):
    """Closed 2-manifold check on oriented cycles.

    Every directed edge must appear exactly once and be matched by its
    reverse, and V - E + F must equal 2.
    """
    directed = set()
    for cyc in cycles:
        m = len(cyc)
        for i in range(m):
            e = (cyc[i], cyc[(i + 1) % m])
            if e in directed:
                raise NotClosed(f"directed edge {e} used by two faces")
            directed.add(e)
    for e in directed:
        if (e[1], e[0]) not in directed:
            raise NotClosed(f"edge {e} has no opposite-direction twin")
    n_edges = len(directed) // 2
    euler = n_vertices - n_edges + len(cycles)
    if euler != 2:
        raise NotClosed(
            f"Euler count V-E+F = {n_vertices}-{n_edges}+{len(cycles)} "
            f"= {euler}, expected 2"
        )


def contains_point(poly: Polyhedron, point) -> PointLocation:
    """Classify a point against the halfspace system.

    Inside means strictly inside every halfspace, boundary means within
    the plane tolerance of the nearest plane without violating any
    other, outside otherwise.
    """
    s = poly.halfspaces.slacks(np.asarray(point, dtype=float))
    worst = s.max()
    eps = poly.plane_tolerance
    if worst > eps:
        return PointLocation.OUTSIDE
    if worst >= -eps:
        return PointLocation.BOUNDARY
    return PointLocation.INSIDE


def circumsphere(poly: Polyhedron):
    """Center (vertex centroid) and radius of the enclosing sphere."""
    return poly.centroid.copy(), poly.circumradius
