"""Reference computations independent of the spherical-excess path.

Two oracles validate the field implementation: Monte Carlo estimation
of the covered sphere fraction by ray casting, and the Van Oosterom
Strackee triangle formula summed over a fan triangulation of each face.
Neither shares code with the primary path.

Monte Carlo directions come from a counter-based splitmix64 stream so
that estimates are bit-reproducible from the seed alone and can be
split across workers at arbitrary offsets:

    z = seed + (counter + 1) * 0x9E3779B97F4A7C15      (mod 2^64)
    z = (z ^ z>>30) * 0xBF58476D1CE4E5B9               (mod 2^64)
    z = (z ^ z>>27) * 0x94D049BB133111EB               (mod 2^64)
    u = ((z ^ z>>31) + 1) * 2^-64                      in (0, 1]

Direction j consumes uniforms 4j..4j+3: three standard normals via
Box-Muller (cos, sin, cos branches), normalized to the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Degenerate
from .geometry import PointLocation, Polyhedron, contains_point

FULL_SPHERE = 4.0 * math.pi

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

_CHUNK = 1 << 17


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo field estimate with its binomial standard error."""

    estimate: float
    stderr: float
    samples: int
    seed: int


def _uniforms(start, count, seed):
    """Uniform doubles in (0, 1] at stream positions [start, start+count)."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return (z.astype(np.float64) + 1.0) * 2.0**-64


def sphere_directions(count, seed, start=0):
    """Directions [start, start+count) of the seeded uniform-sphere stream.

    Gaussian 3-vectors normalized to unit length; the stream is a pure
    function of (seed, index), so disjoint ranges form independent
    deterministic substreams.
    """
    u = _uniforms(4 * start, 4 * count, seed).reshape(count, 4)
    r = np.sqrt(-2.0 * np.log(u[:, 0]))
    g = np.empty((count, 3))
    g[:, 0] = r * np.cos(2.0 * math.pi * u[:, 1])
    g[:, 1] = r * np.sin(2.0 * math.pi * u[:, 1])
    g[:, 2] = np.sqrt(-2.0 * np.log(u[:, 2])) * np.cos(2.0 * math.pi * u[:, 3])
    norms = np.linalg.norm(g, axis=1)
    norms = np.where(norms < 1e-12, 1.0, norms)
    return g / norms[:, None]


def ray_hits_batch(poly: Polyhedron, origin, directions):
    """Boolean hit mask for rays origin + t*d (t > 0), d per row.

    Slab clipping against the halfspace system: each row bounds the ray
    parameter from one side; the ray meets the body iff the intersected
    interval is nonempty with positive exit parameter.
    """
    origin = np.asarray(origin, dtype=float)
    A = poly.halfspaces.normals
    s = poly.halfspaces.offsets - A @ origin
    denom = directions @ A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = s / denom
    t_hi = np.where(denom > 0.0, t, np.inf).min(axis=1)
    t_lo = np.where(denom < 0.0, t, -np.inf).max(axis=1)
    blocked = ((denom == 0.0) & (s < 0.0)).any(axis=1)
    return (t_lo <= t_hi) & (t_hi > 0.0) & ~blocked


def ray_hits(poly: Polyhedron, origin, direction) -> bool:
    """True iff the ray from an exterior origin intersects the body."""
    d = np.asarray(direction, dtype=float)
    return bool(ray_hits_batch(poly, origin, d[None, :])[0])


def mc_field(poly: Polyhedron, point, samples: int, seed: int) -> McEstimate:
    """Monte Carlo estimate of the solid angle subtended at ``point``.

    Casts ``samples`` uniformly distributed rays and scales the hit
    fraction to the full sphere.  Interior and boundary points return
    exactly 4*pi with zero error.  Same (seed, samples) always yields
    the identical estimate.
    """
    if samples < 1000:
        raise ValueError(f"need samples >= 1000, got {samples}")
    if contains_point(poly, point) is not PointLocation.OUTSIDE:
        return McEstimate(estimate=FULL_SPHERE, stderr=0.0, samples=samples, seed=seed)
    hits = 0
    for start in range(0, samples, _CHUNK):
        n = min(_CHUNK, samples - start)
        dirs = sphere_directions(n, seed, start=start)
        hits += int(ray_hits_batch(poly, point, dirs).sum())
    p = hits / samples
    return McEstimate(
        estimate=FULL_SPHERE * p,
        stderr=FULL_SPHERE * math.sqrt(p * (1.0 - p) / samples),
        samples=samples,
        seed=seed,
    )


def seeded_exterior_points(poly: Polyhedron, count: int, seed: int, max_factor: float = 5.0):
    """Deterministic exterior points within ``max_factor`` circumradii.

    Directions come from the seeded sphere stream; distances are spread
    uniformly between 1.2 and ``max_factor`` circumradii, which keeps
    every point strictly outside the body.
    """
    dirs = sphere_directions(count, seed)
    u = _uniforms(4 * count, count, seed)
    radii = poly.circumradius * (1.2 + (max_factor - 1.2) * u)
    return poly.centroid + dirs * radii[:, None]


def seeded_interior_points(poly: Polyhedron, count: int, seed: int):
    """Deterministic strictly interior points by rejection sampling
    from the circumball (radii drawn from a decorrelated sub-stream)."""
    radius_seed = (seed ^ 0x5851F42D4C957F2D) & 0xFFFFFFFFFFFFFFFF
    out = []
    start = 0
    while len(out) < count:
        batch = 4 * count
        dirs = sphere_directions(batch, seed, start=start)
        u = _uniforms(start, batch, radius_seed)
        pts = poly.centroid + dirs * (poly.circumradius * np.cbrt(u)[:, None])
        s = poly.halfspaces.slacks(pts)
        keep = s.max(axis=1) < -10.0 * poly.plane_tolerance
        out.extend(pts[keep])
        start += batch
        if start > 10000 * count:
            raise RuntimeError("interior sampling failed to converge")
    return np.array(out[:count])


def vos_triangle(x, v1, v2, v3) -> float:
    """Unsigned solid angle of a triangle via the Van Oosterom Strackee
    identity tan(omega/2) = |det[r1 r2 r3]| / (l1 l2 l3 + sum (ri.rj) lk).

    Raises ``Degenerate`` when the query point makes both determinant
    and denominator vanish (on a vertex or an edge line).
    """
    x = np.asarray(x, dtype=float)
    r = np.array([np.asarray(v, float) - x for v in (v1, v2, v3)])
    l1, l2, l3 = np.linalg.norm(r, axis=1)
    num = abs(float(np.linalg.det(r)))
    den = (
        l1 * l2 * l3
        + float(r[0] @ r[1]) * l3
        + float(r[0] @ r[2]) * l2
        + float(r[1] @ r[2]) * l1
    )
    scale = max(l1, l2, l3) ** 3
    if num < 1e-12 * scale and abs(den) < 1e-12 * scale:
        raise Degenerate("triangle solid angle undefined: degenerate viewpoint")
    return 2.0 * math.atan2(num, den)


def fan_face_solid_angle(poly: Polyhedron, i: int, point) -> float:
    """Face solid angle by fan triangulation from the face's first
    cycle vertex, each triangle evaluated with ``vos_triangle``.

    The central projection maps the fan triangles onto a partition of
    the projected polygon, so the unsigned pieces add up to the face
    value for any viewpoint off the face plane.
    """
    pts = poly.face_points(i)
    return sum(
        vos_triangle(point, pts[0], pts[j], pts[j + 1])
        for j in range(1, len(pts) - 1)
    )
