import math

import numpy as np
import pytest

from isoptic import (
    BadAlpha,
    EmptySurface,
    GridSpec,
    ScalarGrid,
    bounding_radius,
    extract_isoptic,
    marching_cubes,
    mesh_residual,
    sample_field_grid,
)

TWO_PI = 2 * math.pi


def sphere_grid(res=64, extent=2.0):
    ax = np.linspace(-extent, extent, res)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    values = 1.0 - (x * x + y * y + z * z)
    spec = GridSpec(lo=(-extent,) * 3, hi=(extent,) * 3, res=(res,) * 3)
    return ScalarGrid(spec=spec, values=values)


class TestBoundingRadius:
    def test_cube_two_thirds_pi(self, solids):
        cube = solids["cube"]
        r = cube.circumradius
        d = bounding_radius(cube, 2 * math.pi / 3)
        assert d == pytest.approx(3 * r / math.sqrt(5), abs=1e-13)
        # the known isoptic point (0, 0, 1) lies inside the bound
        assert 1.0 < d

    def test_pi_case(self, solids):
        cube = solids["cube"]
        assert bounding_radius(cube, math.pi) == pytest.approx(
            2 * cube.circumradius / math.sqrt(3), abs=1e-13
        )

    def test_collapses_to_circumradius(self, solids):
        cube = solids["cube"]
        d = bounding_radius(cube, TWO_PI - 1e-9)
        assert d == pytest.approx(cube.circumradius, rel=1e-4)

    @pytest.mark.parametrize("alpha", [0.0, -1.0, TWO_PI, 7.0])
    def test_bad_alpha(self, solids, alpha):
        with pytest.raises(BadAlpha):
            bounding_radius(solids["cube"], alpha)

    def test_bound_is_sound(self, solids):
        # every extracted vertex within the bound plus one cell diagonal
        for name in ("tetrahedron", "cube", "truncated_octahedron"):
            poly = solids[name]
            for alpha in (math.pi / 8, math.pi / 7, math.pi / 2, 2 * math.pi / 3, math.pi):
                mesh = extract_isoptic(poly, alpha, res=32)
                d = bounding_radius(poly, alpha)
                cell = 2 * 1.05 * d / 31 * math.sqrt(3)
                dist = np.linalg.norm(mesh.vertices - poly.centroid, axis=1)
                assert dist.max() <= d + cell


class TestSampleFieldGrid:
    def test_node_values(self, solids):
        cube = solids["cube"]
        alpha = math.pi / 2
        d = bounding_radius(cube, alpha)
        spec = GridSpec(lo=-1.05 * d * np.ones(3), hi=1.05 * d * np.ones(3), res=(16, 16, 16))
        grid = sample_field_grid(cube, alpha, spec)
        assert grid.values.shape == (16, 16, 16)
        assert np.isfinite(grid.values).all()
        # box corner node: far exterior, negative
        assert grid.values[0, 0, 0] < 0
        # boundary belt entirely negative
        for face in (grid.values[0], grid.values[-1], grid.values[:, 0],
                     grid.values[:, -1], grid.values[:, :, 0], grid.values[:, :, -1]):
            assert (face < 0).all()

    def test_interior_fill(self, solids):
        cube = solids["cube"]
        alpha = 1.0
        d = bounding_radius(cube, alpha)
        spec = GridSpec(lo=-1.05 * d * np.ones(3), hi=1.05 * d * np.ones(3), res=(17, 17, 17))
        grid = sample_field_grid(cube, alpha, spec)
        # odd resolution puts a node exactly at the centroid
        assert grid.values[8, 8, 8] == pytest.approx(4 * math.pi - alpha, abs=0.0)

    def test_box_must_cover_bound(self, solids):
        cube = solids["cube"]
        with pytest.raises(ValueError):
            sample_field_grid(
                cube, math.pi / 2,
                GridSpec(lo=(-1, -1, -1), hi=(1, 1, 1), res=(16, 16, 16)),
            )

    def test_worker_independence(self, solids):
        octa = solids["octahedron"]
        alpha = math.pi / 3
        d = bounding_radius(octa, alpha)
        spec = GridSpec(lo=-1.05 * d * np.ones(3), hi=1.05 * d * np.ones(3), res=(24, 24, 24))
        serial = sample_field_grid(octa, alpha, spec, workers=1)
        parallel = sample_field_grid(octa, alpha, spec, workers=2)
        assert np.array_equal(serial.values, parallel.values)


class TestMarchingCubes:
    def test_sphere_oracle(self):
        mesh = marching_cubes(sphere_grid(64))
        radii = np.linalg.norm(mesh.vertices, axis=1)
        assert radii.min() > 0.99 and radii.max() < 1.01
        # residual against the synthetic field itself
        dev = np.abs(1.0 - radii**2)
        assert math.sqrt((dev**2).mean()) <= 1e-3
        assert mesh.is_watertight()
        assert mesh.euler_characteristic() == 2
        # windings and gradient normals both point outward
        tri_normals = np.cross(
            mesh.vertices[mesh.triangles[:, 1]] - mesh.vertices[mesh.triangles[:, 0]],
            mesh.vertices[mesh.triangles[:, 2]] - mesh.vertices[mesh.triangles[:, 0]],
        )
        centers = mesh.vertices[mesh.triangles].mean(axis=1)
        assert (np.einsum("ij,ij->i", tri_normals, centers) > 0).all()
        radial = mesh.vertices / radii[:, None]
        assert (np.einsum("ij,ij->i", mesh.normals, radial) > 0.99).all()
        assert np.allclose(np.linalg.norm(mesh.normals, axis=1), 1.0, atol=1e-12)

    def test_all_negative_grid(self):
        spec = GridSpec(lo=(-1, -1, -1), hi=(1, 1, 1), res=(8, 8, 8))
        with pytest.raises(EmptySurface):
            marching_cubes(ScalarGrid(spec=spec, values=-np.ones((8, 8, 8))))

    def test_positive_boundary_rejected(self):
        spec = GridSpec(lo=(-1, -1, -1), hi=(1, 1, 1), res=(8, 8, 8))
        values = np.ones((8, 8, 8))
        with pytest.raises(ValueError):
            marching_cubes(ScalarGrid(spec=spec, values=values))

    def test_no_degenerate_triangles(self):
        mesh = marching_cubes(sphere_grid(32))
        a = mesh.vertices[mesh.triangles[:, 0]]
        b = mesh.vertices[mesh.triangles[:, 1]]
        c = mesh.vertices[mesh.triangles[:, 2]]
        areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
        assert areas.min() > 1e-14


class TestExtractIsoptic:
    def test_closed_genus_zero(self, solids):
        mesh = extract_isoptic(solids["cube"], math.pi / 2, res=48)
        assert mesh.is_watertight()
        assert mesh.euler_characteristic() == 2

    def test_bad_parameters(self, solids):
        with pytest.raises(BadAlpha):
            extract_isoptic(solids["cube"], 7.0)
        with pytest.raises(ValueError):
            extract_isoptic(solids["cube"], 1.0, res=8)

    def test_nesting(self, solids):
        from isoptic import field_values

        cube = solids["cube"]
        inner = extract_isoptic(cube, 2.0, res=40)
        omega, singular = field_values(cube, inner.vertices)
        # the alpha=2 surface lies inside the alpha=1 surface
        assert (omega[~singular] >= 1.0).all()

    def test_residual_improves_with_resolution(self, solids):
        octa = solids["octahedron"]
        alpha = math.pi / 7
        coarse = mesh_residual(octa, alpha, extract_isoptic(octa, alpha, res=32))
        fine = mesh_residual(octa, alpha, extract_isoptic(octa, alpha, res=64))
        assert fine[0] < coarse[0]
        assert fine[1] < coarse[1]

    def test_field_level_symmetry(self, solids):
        from helpers import rotation_group
        from isoptic import field_values
        from isoptic.oracles import seeded_exterior_points

        tet = solids["tetrahedron"]
        rotations = rotation_group(tet)
        assert len(rotations) == 12
        pts = seeded_exterior_points(tet, 200, seed=23)
        base, _ = field_values(tet, pts)
        for rot in rotations:
            rotated, _ = field_values(tet, pts @ rot.T)
            assert np.abs(rotated - base).max() < 1e-9


def test_mesh_residual_requires_vertices(solids):
    from isoptic import TriangleMesh

    with pytest.raises(ValueError):
        mesh_residual(
            solids["cube"], 1.0,
            TriangleMesh(vertices=np.zeros((0, 3)), triangles=np.zeros((0, 3), int)),
        )
