"""Shared test machinery: independent oracles and symmetry tooling."""

import math

import numpy as np

from isoptic import PointLocation, contains_point


def axis_square_omega(half_side, distance):
    """Solid angle of an axis-aligned square of half-side a seen from
    distance d on its axis: 4 * arctan(a^2 / (d * sqrt(2 a^2 + d^2))).

    Standard closed form, independent of the spherical-excess path.
    """
    a, d = half_side, distance
    return 4.0 * math.atan(a * a / (d * math.sqrt(2 * a * a + d * d)))


def dense_segment_hit(poly, origin, direction, t_max, samples=4096):
    """Brute-force ray-hit oracle: classify many points along the ray."""
    ts = np.linspace(0.0, t_max, samples + 1)[1:]
    pts = np.asarray(origin, float) + ts[:, None] * np.asarray(direction, float)
    slack = poly.halfspaces.slacks(pts)
    return bool((slack.max(axis=1) < 0.0).any())


def edge_set(poly):
    """Undirected body edges as sorted index pairs."""
    edges = set()
    for f in poly.faces:
        c = f.cycle
        for i in range(len(c)):
            edges.add(tuple(sorted((c[i], c[(i + 1) % len(c)]))))
    return edges


def rotation_group(poly, decimals=6):
    """All rotation matrices mapping the vertex set onto itself.

    Candidate frames map one vertex and an edge-adjacent partner to
    every compatible image pair; candidates are kept when they are
    orthogonal with determinant +1 and permute the vertex set.
    """
    v = poly.vertices - poly.centroid
    i0 = 0
    partners = sorted(
        b for a, b in edge_set(poly) if a == i0
    ) or sorted(a for a, b in edge_set(poly) if b == i0)
    i1 = partners[0]
    a0, a1 = v[i0], v[i1]
    frame = np.column_stack([a0, a1, np.cross(a0, a1)])
    frame_inv = np.linalg.inv(frame)
    n0, n1, d01 = np.linalg.norm(a0), np.linalg.norm(a1), a0 @ a1
    vset = {tuple(q) for q in np.round(v, decimals)}
    found = {}
    for j0 in range(len(v)):
        w0 = v[j0]
        if abs(np.linalg.norm(w0) - n0) > 1e-9:
            continue
        for j1 in range(len(v)):
            w1 = v[j1]
            if abs(np.linalg.norm(w1) - n1) > 1e-9 or abs(w0 @ w1 - d01) > 1e-9:
                continue
            rot = np.column_stack([w0, w1, np.cross(w0, w1)]) @ frame_inv
            if abs(np.linalg.det(rot) - 1.0) > 1e-8:
                continue
            if np.abs(rot @ rot.T - np.eye(3)).max() > 1e-9:
                continue
            image = np.round(v @ rot.T, decimals)
            if not all(tuple(q) in vset for q in image):
                continue
            found.setdefault(tuple(np.round(rot, decimals).ravel()), rot)
    return list(found.values())


def parse_obj(text):
    """Minimal OBJ re-parser: vertices, triangles (0-based), normals."""
    verts, norms, tris = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "vn":
            norms.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:4]]
            tris.append(idx)
    return (
        np.array(verts),
        np.array(tris, dtype=int),
        np.array(norms) if norms else None,
    )


def assert_strictly_outside(poly, points):
    for p in points:
        assert contains_point(poly, p) is PointLocation.OUTSIDE
