import math

import numpy as np
import pytest

from helpers import assert_strictly_outside, axis_square_omega, dense_segment_hit
from isoptic import (
    Degenerate,
    face_solid_angle,
    fan_face_solid_angle,
    mc_field,
    polygon_solid_angle,
    ray_hits,
    sphere_directions,
    vos_triangle,
)
from isoptic.oracles import seeded_exterior_points, seeded_interior_points

OCTANT = np.array([(1.0, 0, 0), (0, 1.0, 0), (0, 0, 1.0)])


class TestSphereDirections:
    def test_deterministic_and_splittable(self):
        a = sphere_directions(100, seed=42)
        b = sphere_directions(100, seed=42)
        assert np.array_equal(a, b)
        tail = sphere_directions(60, seed=42, start=40)
        assert np.array_equal(a[40:], tail)
        assert not np.allclose(a, sphere_directions(100, seed=43))

    def test_unit_length_and_coverage(self):
        d = sphere_directions(200000, seed=7)
        assert np.allclose(np.linalg.norm(d, axis=1), 1.0, atol=1e-12)
        # centered and octant-balanced for a uniform distribution
        assert np.abs(d.mean(axis=0)).max() < 0.01
        assert abs((d[:, 2] > 0).mean() - 0.5) < 0.01


class TestRayHits:
    def test_axis_examples(self, solids):
        cube = solids["cube"]
        x = (0.0, 0.0, 1.0)
        assert ray_hits(cube, x, (0, 0, -1.0)) is True
        assert ray_hits(cube, x, (0, 0, 1.0)) is False
        assert ray_hits(cube, x, (1.0, 0, 0)) is False
        # brute-force check of the same three rays
        for d, expected in [((0, 0, -1.0), True), ((0, 0, 1.0), False), ((1.0, 0, 0), False)]:
            assert dense_segment_hit(cube, x, d, t_max=6.0) is expected

    @pytest.mark.parametrize("name", ["tetrahedron", "cube", "dodecahedron"])
    def test_agrees_with_dense_sampling(self, solids, name):
        poly = solids[name]
        origins = seeded_exterior_points(poly, 40, seed=11, max_factor=3.0)
        dirs = sphere_directions(40 * 16, seed=13).reshape(40, 16, 3)
        t_max = 8.0 * poly.circumradius
        disagreements = 0
        for origin, bundle in zip(origins, dirs):
            for d in bundle:
                fast = ray_hits(poly, origin, d)
                slow = dense_segment_hit(poly, origin, d, t_max)
                disagreements += fast is not slow
        assert disagreements == 0


class TestMcField:
    def test_interior_exact(self, solids):
        est = mc_field(solids["cube"], (0, 0, 0), samples=1000, seed=1)
        assert est.estimate == 4 * math.pi
        assert est.stderr == 0.0

    def test_reproducible(self, solids):
        a = mc_field(solids["cube"], (0, 0, 1.0), samples=20000, seed=5)
        b = mc_field(solids["cube"], (0, 0, 1.0), samples=20000, seed=5)
        assert a == b

    def test_cube_axis_concordance(self, solids):
        est = mc_field(solids["cube"], (0, 0, 1.0), samples=10**6, seed=3)
        assert abs(est.estimate - 2 * math.pi / 3) <= 4 * est.stderr
        assert est.stderr == pytest.approx(
            4 * math.pi * math.sqrt(
                (est.estimate / (4 * math.pi))
                * (1 - est.estimate / (4 * math.pi)) / est.samples
            ),
            rel=1e-12,
        )

    def test_unbiased_over_seeds(self, solids):
        # closed-form cube-axis value within 4 stderr in >= 19 of 20 runs
        cube = solids["cube"]
        exact = axis_square_omega(0.5, 0.5)
        hits = 0
        for seed in range(20):
            est = mc_field(cube, (0, 0, 1.0), samples=10**5, seed=seed)
            hits += abs(est.estimate - exact) <= 4 * est.stderr
        assert hits >= 19

    def test_sample_floor(self, solids):
        with pytest.raises(ValueError):
            mc_field(solids["cube"], (0, 0, 1.0), samples=10, seed=0)


class TestVosTriangle:
    def test_octant(self):
        assert vos_triangle((0, 0, 0), *OCTANT) == pytest.approx(
            math.pi / 2, abs=1e-15
        )

    def test_matches_excess_formula_on_random_triangles(self):
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(1000):
            tri = rng.normal(size=(3, 3))
            x = 2.0 * rng.normal(size=3)
            try:
                a = polygon_solid_angle(x, tri)
                b = vos_triangle(x, *tri)
            except Exception:
                continue
            worst = max(worst, abs(a - b))
        assert worst <= 1e-10

    def test_coplanar_outside_zero(self):
        tri = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0)], float)
        assert vos_triangle((5.0, 7.0, 0.0), *tri) == pytest.approx(0.0, abs=1e-15)

    def test_degenerate_viewpoint(self):
        tri = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0)], float)
        with pytest.raises(Degenerate):
            vos_triangle((0.5, 0.0, 0.0), *tri)  # inside an edge segment
        with pytest.raises(Degenerate):
            vos_triangle((1.0, 0.0, 0.0), *tri)  # on a vertex
        # the edge line extension is fine: determinant 0 but denominator > 0
        assert vos_triangle((2.0, 0.0, 0.0), *tri) == 0.0


class TestFanFaceSolidAngle:
    def test_triangle_face_equals_vos(self, solids):
        tet = solids["tetrahedron"]
        x = np.array([0.4, -1.3, 2.0])
        pts = tet.face_points(2)
        assert fan_face_solid_angle(tet, 2, x) == vos_triangle(x, *pts)

    def test_pentagon_equivalence(self, solids):
        dode = solids["dodecahedron"]
        for k, x in enumerate(seeded_exterior_points(dode, 25, seed=19)):
            for i in range(len(dode.faces)):
                assert fan_face_solid_angle(dode, i, x) == pytest.approx(
                    face_solid_angle(dode, i, x), abs=1e-10
                )

    def test_coplanar_exterior_point_zero(self, solids):
        cube = solids["cube"]
        top = next(
            i for i, f in enumerate(cube.faces) if abs(f.normal[2] - 1) < 1e-12
        )
        assert fan_face_solid_angle(cube, top, (4.0, 0.25, 0.5)) == pytest.approx(
            0.0, abs=1e-14
        )


class TestSeededPoints:
    def test_exterior_outside_and_bounded(self, solids):
        for name, poly in solids.items():
            pts = seeded_exterior_points(poly, 64, seed=4)
            assert_strictly_outside(poly, pts)
            dist = np.linalg.norm(pts - poly.centroid, axis=1)
            assert (dist <= 5.0 * poly.circumradius + 1e-12).all()

    def test_interior_inside(self, solids):
        for name, poly in solids.items():
            pts = seeded_interior_points(poly, 32, seed=4)
            assert (poly.halfspaces.slacks(pts).max(axis=1) < 0).all()

    def test_deterministic(self, solids):
        poly = solids["cube"]
        assert np.array_equal(
            seeded_exterior_points(poly, 10, seed=1),
            seeded_exterior_points(poly, 10, seed=1),
        )
        assert np.array_equal(
            seeded_interior_points(poly, 10, seed=1),
            seeded_interior_points(poly, 10, seed=1),
        )
