"""Level-set extraction: turn F(x) = alpha into a triangle mesh.

The pipeline bounds the level set with a guaranteed enclosing radius,
samples F - alpha on a regular grid, and polygonizes the zero crossing
with the standard 256-case marching cubes.  The grid is sampled so that
the body interior is strictly positive and the box boundary strictly
negative, which forces a closed output surface.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._mc_tables import TRI_TABLE
from .errors import BadAlpha, EmptySurface
from .field import FieldMode, field_values
from .geometry import Polyhedron

TWO_PI = 2.0 * math.pi

# Cell corner offsets and the corner pairs joined by each of the 12
# cube edges, in the numbering the lookup tables use.
_CORNERS = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
)
_EDGE_CORNERS = (
    (0, 1), (1, 2), (2, 3), (3, 0),
    (4, 5), (5, 6), (6, 7), (7, 4),
    (0, 4), (1, 5), (2, 6), (3, 7),
)
# Axis along which each edge runs and the offset of its low corner.
_EDGE_AXIS = []
_EDGE_BASE = []
for _a, _b in _EDGE_CORNERS:
    _ca, _cb = _CORNERS[_a], _CORNERS[_b]
    _EDGE_AXIS.append(next(d for d in range(3) if _ca[d] != _cb[d]))
    _EDGE_BASE.append(tuple(min(_ca[d], _cb[d]) for d in range(3)))
_EDGE_AXIS = tuple(_EDGE_AXIS)
_EDGE_BASE = tuple(_EDGE_BASE)

_SAMPLE_CHUNK = 1 << 16


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned sampling lattice: box corners and node counts."""

    lo: np.ndarray
    hi: np.ndarray
    res: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))
        object.__setattr__(self, "res", tuple(int(r) for r in self.res))
        if not np.all(self.lo < self.hi):
            raise ValueError("grid box corners must satisfy lo < hi componentwise")
        if min(self.res) < 8:
            raise ValueError(f"need at least 8 nodes per axis, got {self.res}")

    @property
    def spacing(self):
        return (self.hi - self.lo) / (np.array(self.res) - 1)

    def node_count(self) -> int:
        nx, ny, nz = self.res
        return nx * ny * nz

    def points_for(self, flat_index):
        """Node coordinates for flat C-order node indices."""
        nx, ny, nz = self.res
        k = flat_index % nz
        j = (flat_index // nz) % ny
        i = flat_index // (ny * nz)
        return self.lo + np.stack([i, j, k], axis=-1) * self.spacing


@dataclass(frozen=True)
class ScalarGrid:
    """Sampled values of F(x) - alpha on a GridSpec lattice."""

    spec: GridSpec
    values: np.ndarray  # res-shaped


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle mesh with optional per-vertex unit normals."""

    vertices: np.ndarray  # (n, 3)
    triangles: np.ndarray  # (t, 3) int
    normals: np.ndarray | None = None  # (n, 3)

    def edges(self):
        """Undirected edge set as a dict {edge: incident triangle count}."""
        count: dict[tuple[int, int], int] = {}
        for tri in self.triangles:
            for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
                e = (int(min(a, b)), int(max(a, b)))
                count[e] = count.get(e, 0) + 1
        return count

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges()) + len(self.triangles)

    def is_watertight(self) -> bool:
        """Every edge shared by exactly two triangles."""
        counts = self.edges().values()
        return len(self.triangles) > 0 and all(c == 2 for c in counts)


def bounding_radius(poly: Polyhedron, alpha: float) -> float:
    """Guaranteed enclosing radius for the level set F = alpha.

    The body sits inside its circumsphere, so F is dominated by the
    spherical-cap angle of that sphere, which drops below alpha beyond

        d = R / sqrt(1 - (1 - alpha/(2 pi))^2).

    Every point with F(x) = alpha therefore lies within distance d of
    the centroid.
    """
    if not 0.0 < alpha < TWO_PI:
        raise BadAlpha(f"alpha must be in (0, 2*pi), got {alpha}")
    c = 1.0 - alpha / TWO_PI
    return poly.circumradius / math.sqrt(1.0 - c * c)


def _field_minus_alpha(poly, alpha, points, spacing):
    """Field samples with deterministic nudging of singular points."""
    omega, singular = field_values(poly, points, FieldMode.VISIBLE_SUM)
    if singular.any():
        for scale in (1e-7, 1e-6, 1e-5):
            moved = points[singular] + scale * spacing
            om2, sing2 = field_values(poly, moved, FieldMode.VISIBLE_SUM)
            omega[singular] = om2
            still = np.zeros(len(points), dtype=bool)
            still[np.nonzero(singular)[0][sing2]] = True
            singular = still
            if not singular.any():
                break
        else:
            raise RuntimeError("singular grid nodes survived jittering")
    return omega - alpha


def _sample_chunk_task(args):
    poly, alpha, spec, start, stop = args
    pts = spec.points_for(np.arange(start, stop))
    return _field_minus_alpha(poly, alpha, pts, spec.spacing)


def sample_field_grid(
    poly: Polyhedron, alpha: float, spec: GridSpec, workers: int = 1
) -> ScalarGrid:
    """Sample F(x) - alpha at every grid node.

    Interior and boundary nodes get 4*pi - alpha.  Nodes that hit the
    wedge-angle singularity are re-evaluated after a deterministic
    nudge of 1e-7 cell along (1, 1, 1), so every sample is finite.  The
    grid box must contain the ball of radius 1.05 * bounding_radius
    around the centroid.  Results do not depend on ``workers``.
    """
    d = bounding_radius(poly, alpha)
    if np.any(spec.lo > poly.centroid - 1.05 * d) or np.any(
        spec.hi < poly.centroid + 1.05 * d
    ):
        raise ValueError("grid box does not cover the guaranteed bounding sphere")
    total = spec.node_count()
    bounds = list(range(0, total, _SAMPLE_CHUNK)) + [total]
    tasks = [
        (poly, alpha, spec, bounds[i], bounds[i + 1])
        for i in range(len(bounds) - 1)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sample_chunk_task, tasks))
    else:
        parts = [_sample_chunk_task(t) for t in tasks]
    values = np.concatenate(parts).reshape(spec.res)
    return ScalarGrid(spec=spec, values=values)


def _boundary_all_negative(values) -> bool:
    return (
        (values[0] < 0).all() and (values[-1] < 0).all()
        and (values[:, 0] < 0).all() and (values[:, -1] < 0).all()
        and (values[:, :, 0] < 0).all() and (values[:, :, -1] < 0).all()
    )


def marching_cubes(grid: ScalarGrid) -> TriangleMesh:
    """Extract the zero level set of a sampled grid as a triangle mesh.

    Standard 256-configuration tables with linear interpolation of the
    zero crossing along cell edges.  Crossing vertices are welded by
    grid edge, so the output of a grid whose boundary samples are all
    negative is a closed 2-manifold.  Triangles wind so normals point
    toward decreasing values (outward); per-vertex normals come from
    central-difference gradients of the grid.

    Raises ``EmptySurface`` when the grid has no sign change.
    """
    vals = grid.values
    if not _boundary_all_negative(vals):
        raise ValueError("grid boundary must be strictly negative")
    nx, ny, nz = vals.shape
    neg = vals < 0.0
    case = np.zeros((nx - 1, ny - 1, nz - 1), dtype=np.uint16)
    for bit, (di, dj, dk) in enumerate(_CORNERS):
        block = neg[di:di + nx - 1, dj:dj + ny - 1, dk:dk + nz - 1]
        case |= block.astype(np.uint16) << bit
    active = np.argwhere((case != 0) & (case != 255))
    if len(active) == 0:
        raise EmptySurface("no sign change in the sampled grid")

    lo = grid.spec.lo
    h = grid.spec.spacing
    vertex_ids: dict[tuple[int, int, int, int], int] = {}
    positions: list[np.ndarray] = []
    triangles: list[tuple[int, int, int]] = []

    def edge_vertex(ci, cj, ck, edge):
        base = _EDGE_BASE[edge]
        axis = _EDGE_AXIS[edge]
        gi, gj, gk = ci + base[0], cj + base[1], ck + base[2]
        key = (axis, gi, gj, gk)
        vid = vertex_ids.get(key)
        if vid is not None:
            return vid
        v0 = vals[gi, gj, gk]
        hi_idx = [gi, gj, gk]
        hi_idx[axis] += 1
        v1 = vals[tuple(hi_idx)]
        t = v0 / (v0 - v1)
        p = lo + np.array([gi, gj, gk]) * h
        p[axis] += t * h[axis]
        vid = len(positions)
        positions.append(p)
        vertex_ids[key] = vid
        return vid

    for ci, cj, ck in active:
        rows = TRI_TABLE[case[ci, cj, ck]]
        for t0 in range(0, len(rows), 3):
            a = edge_vertex(ci, cj, ck, rows[t0])
            b = edge_vertex(ci, cj, ck, rows[t0 + 1])
            c = edge_vertex(ci, cj, ck, rows[t0 + 2])
            if a == b or b == c or a == c:
                continue
            triangles.append((a, b, c))

    verts = np.array(positions)
    tris = np.array(triangles, dtype=np.int64)

    # Drop zero-area slivers (interpolation landing on cell corners).
    ab = verts[tris[:, 1]] - verts[tris[:, 0]]
    ac = verts[tris[:, 2]] - verts[tris[:, 0]]
    area2 = np.linalg.norm(np.cross(ab, ac), axis=1)
    tris = tris[area2 > 2.0 * 1e-14]
    if len(tris) == 0:
        raise EmptySurface("all candidate triangles degenerate")

    # With corners flagged on negative values, the tables wind triangles
    # so right-hand normals point toward decreasing field, i.e. outward.
    normals = _vertex_normals(grid, verts)
    return TriangleMesh(vertices=verts, triangles=tris, normals=normals)


def _vertex_normals(grid, verts):
    """Outward unit normals from trilinearly interpolated gradients."""
    h = grid.spec.spacing
    gx, gy, gz = np.gradient(grid.values, h[0], h[1], h[2])
    coords = (verts - grid.spec.lo) / h
    g = np.stack(
        [_trilinear(gx, coords), _trilinear(gy, coords), _trilinear(gz, coords)],
        axis=1,
    )
    norms = np.linalg.norm(g, axis=1)
    norms = np.where(norms == 0.0, 1.0, norms)
    # Gradient points toward increasing field, i.e. toward the body.
    return -g / norms[:, None]


def _trilinear(field, coords):
    """Trilinear interpolation of a node field at fractional coordinates."""
    shape = np.array(field.shape)
    base = np.clip(np.floor(coords).astype(int), 0, shape - 2)
    f = coords - base
    out = np.zeros(len(coords))
    for di, dj, dk in _CORNERS:
        w = (
            (f[:, 0] if di else 1.0 - f[:, 0])
            * (f[:, 1] if dj else 1.0 - f[:, 1])
            * (f[:, 2] if dk else 1.0 - f[:, 2])
        )
        out += w * field[base[:, 0] + di, base[:, 1] + dj, base[:, 2] + dk]
    return out


def extract_isoptic(
    poly: Polyhedron, alpha: float, res: int = 96, workers: int = 1
) -> TriangleMesh:
    """Extract the isoptic surface {x : F(x) = alpha} as a closed mesh.

    The sampling box is the centroid-centered cube of half-width
    1.05 * bounding_radius with ``res`` nodes per axis (res >= 16).
    """
    if not 0.0 < alpha < TWO_PI:
        raise BadAlpha(f"alpha must be in (0, 2*pi), got {alpha}")
    if res < 16:
        raise ValueError(f"need res >= 16, got {res}")
    half = 1.05 * bounding_radius(poly, alpha)
    spec = GridSpec(
        lo=poly.centroid - half, hi=poly.centroid + half, res=(res, res, res)
    )
    grid = sample_field_grid(poly, alpha, spec, workers=workers)
    return marching_cubes(grid)


def mesh_residual(poly: Polyhedron, alpha: float, mesh: TriangleMesh):
    """Re-evaluate the field at mesh vertices: (max, rms) of |F - alpha|.

    Vertices flagged singular by the evaluator are excluded.
    """
    if len(mesh.vertices) == 0:
        raise ValueError("empty mesh")
    omega, singular = field_values(poly, mesh.vertices, FieldMode.VISIBLE_SUM)
    dev = np.abs(omega[~singular] - alpha)
    return float(dev.max()), float(np.sqrt(np.mean(dev * dev)))
