"""Canonical convex solids with unit edge length, centered at the origin.

Exact vertex coordinates (before any scaling):

* tetrahedron: A1 = (0, 0, sqrt(2/3) - 1/(2 sqrt 6)), A2..A4 on the
  plane z = -1/(2 sqrt 6); edge 1, circumradius sqrt(3/8).
* cube: (+-1/2, +-1/2, +-1/2).
* octahedron: (+-1/sqrt 2, 0, 0) and permutations.
* dodecahedron: (+-1, +-1, +-1) and cyclic permutations of
  (0, +-1/phi, +-phi), all scaled by phi/2.
* icosahedron: cyclic permutations of (0, +-1/2, +-phi/2).
* truncated_cube: permutations of (+-(sqrt 2 - 1), +-1, +-1),
  scaled by (sqrt 2 + 1)/2.
* truncated_octahedron: permutations of (0, +-1, +-2), scaled by
  1/sqrt 2.

phi is the golden ratio.  The tetrahedron and cube carry explicit face
cycles; the remaining solids derive theirs from the convex hull of the
vertex set, merging coplanar hull triangles into n-gon faces.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np
from scipy.spatial import ConvexHull

from .errors import UnknownSolid
from .geometry import Polyhedron, build_polyhedron

PHI = (1.0 + np.sqrt(5.0)) / 2.0

SOLID_NAMES = (
    "tetrahedron",
    "cube",
    "octahedron",
    "dodecahedron",
    "icosahedron",
    "truncated_cube",
    "truncated_octahedron",
)


def _sign_permutations(base):
    """All coordinate permutations and sign flips of a triple, deduplicated."""
    out = set()
    for p in permutations(range(3)):
        for signs in product((1.0, -1.0), repeat=3):
            out.add(tuple(signs[i] * base[p[i]] for i in range(3)))
    return np.array(sorted(out))


def _cyclic_sign_permutations(base):
    """Cyclic coordinate permutations and sign flips of a triple."""
    out = set()
    for signs in product((1.0, -1.0), repeat=3):
        v = tuple(s * b for s, b in zip(signs, base))
        for k in range(3):
            out.add((v[k], v[(k + 1) % 3], v[(k + 2) % 3]))
    return np.array(sorted(out))


def _tetrahedron_data():
    s3, s6 = np.sqrt(3.0), np.sqrt(6.0)
    verts = np.array(
        [
            [0.0, 0.0, np.sqrt(2.0 / 3.0) - 1.0 / (2.0 * s6)],
            [-1.0 / (2.0 * s3), -0.5, -1.0 / (2.0 * s6)],
            [-1.0 / (2.0 * s3), 0.5, -1.0 / (2.0 * s6)],
            [1.0 / s3, 0.0, -1.0 / (2.0 * s6)],
        ]
    )
    cycles = [(1, 2, 3), (2, 1, 0), (3, 0, 1), (0, 3, 2)]
    return verts, cycles


def _cube_data():
    verts = 0.5 * np.array(sorted(product((-1.0, 1.0), repeat=3)))
    cycles = [
        (0, 1, 3, 2),  # x = -1/2
        (4, 6, 7, 5),  # x = +1/2
        (0, 4, 5, 1),  # y = -1/2
        (2, 3, 7, 6),  # y = +1/2
        (0, 2, 6, 4),  # z = -1/2
        (1, 5, 7, 3),  # z = +1/2
    ]
    return verts, cycles


def _hull_cycles(verts):
    """Face cycles of a convex vertex set via hull-triangle merging.

    Coplanar hull simplices are grouped by their (rounded) plane
    equation; each group's vertices are ordered by angle around the face
    centroid, oriented counterclockwise from outside, and the cycle is
    rotated to start at its smallest index.  Faces are sorted by plane
    equation, which makes the output deterministic.
    """
    hull = ConvexHull(verts)
    groups: dict[tuple, tuple[set, np.ndarray]] = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq, 6))
        groups.setdefault(key, (set(), eq))[0].update(int(v) for v in simplex)
    cycles = []
    for key in sorted(groups):
        idxs, eq = groups[key]
        n = eq[:3]
        idxs = sorted(idxs)
        pts = verts[idxs]
        center = pts.mean(axis=0)
        seed = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        u = np.cross(n, seed)
        u /= np.linalg.norm(u)
        v = np.cross(n, u)
        angles = np.arctan2((pts - center) @ v, (pts - center) @ u)
        cyc = [idxs[k] for k in np.argsort(angles)]
        # Orient counterclockwise about the outward hull normal.
        rim = np.zeros(3)
        for i in range(len(cyc)):
            rim += np.cross(verts[cyc[i]], verts[cyc[(i + 1) % len(cyc)]])
        if rim @ n < 0.0:
            cyc.reverse()
        k = cyc.index(min(cyc))
        cycles.append(tuple(cyc[k:] + cyc[:k]))
    return cycles


def canonical_solid(name: str) -> Polyhedron:
    """Return a canonical solid by name, unit edge, centered at the origin.

    Valid names are listed in ``SOLID_NAMES``.  Raises ``UnknownSolid``
    otherwise.
    """
    if name == "tetrahedron":
        verts, cycles = _tetrahedron_data()
    elif name == "cube":
        verts, cycles = _cube_data()
    elif name == "octahedron":
        verts = _sign_permutations((1.0 / np.sqrt(2.0), 0.0, 0.0))
        cycles = _hull_cycles(verts)
    elif name == "dodecahedron":
        corners = np.array(sorted(product((-1.0, 1.0), repeat=3)))
        rect = _cyclic_sign_permutations((0.0, 1.0 / PHI, PHI))
        verts = np.vstack([corners, rect]) * (PHI / 2.0)
        cycles = _hull_cycles(verts)
    elif name == "icosahedron":
        verts = _cyclic_sign_permutations((0.0, 0.5, PHI / 2.0))
        cycles = _hull_cycles(verts)
    elif name == "truncated_cube":
        xi = np.sqrt(2.0) - 1.0
        verts = _sign_permutations((xi, 1.0, 1.0)) / (2.0 * xi)
        cycles = _hull_cycles(verts)
    elif name == "truncated_octahedron":
        verts = _sign_permutations((0.0, 1.0, 2.0)) / np.sqrt(2.0)
        cycles = _hull_cycles(verts)
    else:
        raise UnknownSolid(
            f"unknown solid {name!r}; valid names: {', '.join(SOLID_NAMES)}"
        )
    return build_polyhedron(verts, cycles, name=name)
