import math
import struct

import numpy as np
import pytest

from helpers import parse_obj
from isoptic import (
    CountMismatch,
    IndexOutOfRange,
    OffSyntaxError,
    TriangleMesh,
    build_polyhedron,
    extract_isoptic,
    parse_off,
    write_obj,
    write_off,
    write_stl,
)

TET_OFF = """\
# reference tetrahedron
OFF
4 4 0
0.0 0.0 0.6123724357
-0.2886751346 -0.5 -0.2041241452
-0.2886751346 0.5 -0.2041241452
0.5773502692 0.0 -0.2041241452
3 1 2 3
3 2 1 0
3 3 0 1
3 0 3 2
"""


class TestParseOff:
    def test_reference_tetrahedron(self):
        verts, cycles = parse_off(TET_OFF)
        assert len(verts) == 4 and len(cycles) == 4
        assert np.allclose(verts[0], [0.0, 0.0, 0.6123724357], atol=1e-12)
        poly = build_polyhedron(verts, cycles)
        assert poly.circumradius == pytest.approx(math.sqrt(3 / 8), abs=1e-9)

    def test_crlf_and_comments(self):
        text = TET_OFF.replace("\n", "\r\n") + "# trailing comment\r\n"
        verts, cycles = parse_off(text)
        assert len(verts) == 4
        inline = TET_OFF.replace("4 4 0", "4 4 0 # counts")
        assert len(parse_off(inline)[0]) == 4

    def test_empty_geometry(self):
        with pytest.raises(CountMismatch):
            parse_off("OFF\n0 0 0\n")

    def test_missing_header(self):
        with pytest.raises(OffSyntaxError) as err:
            parse_off("4 4 0\n")
        assert err.value.line == 1

    def test_truncated_vertices(self):
        with pytest.raises(CountMismatch):
            parse_off("OFF\n4 4 0\n0 0 0\n")

    def test_bad_vertex_row(self):
        with pytest.raises(OffSyntaxError) as err:
            parse_off("OFF\n1 1 0\n0 0\n3 0 0 0\n")
        assert err.value.line == 3

    def test_index_out_of_range(self):
        text = "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 9\n"
        with pytest.raises(IndexOutOfRange) as err:
            parse_off(text)
        assert err.value.line == 7

    def test_face_count_mismatch_within_row(self):
        text = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1\n"
        with pytest.raises(OffSyntaxError):
            parse_off(text)

    def test_extra_rows(self):
        with pytest.raises(CountMismatch):
            parse_off(TET_OFF + "3 0 1 2\n")


class TestWriteOff:
    @pytest.mark.parametrize(
        "name",
        [
            "tetrahedron", "cube", "octahedron", "dodecahedron",
            "icosahedron", "truncated_cube", "truncated_octahedron",
        ],
    )
    def test_round_trip_exact(self, solids, name):
        poly = solids[name]
        text = write_off(poly.vertices, poly.cycles())
        verts, cycles = parse_off(text)
        assert np.array_equal(verts, poly.vertices)
        assert cycles == poly.cycles()
        # byte-for-byte deterministic
        assert write_off(poly.vertices, poly.cycles()) == text

    def test_cube_counts_line(self, solids):
        text = write_off(solids["cube"].vertices, solids["cube"].cycles())
        assert text.splitlines()[1] == "8 6 0"

    def test_empty_geometry_rejected(self):
        with pytest.raises(CountMismatch):
            write_off(np.zeros((0, 3)), [])

    def test_seventeen_digit_round_trip(self):
        v = np.array([[math.pi, -1 / 3, 1e-17], [0.1, 0.2, 0.3],
                      [1, 0, 0], [0, 1, 0]])
        cycles = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
        verts, _ = parse_off(write_off(v, cycles))
        assert np.array_equal(verts, v)


def one_triangle_mesh(with_normals=False):
    normals = np.array([[0.0, 0, 1], [0, 0, 1], [0, 0, 1]]) if with_normals else None
    return TriangleMesh(
        vertices=np.array([(0.0, 0, 0), (1.0, 0, 0), (0, 1.0, 0)]),
        triangles=np.array([[0, 1, 2]]),
        normals=normals,
    )


class TestWriteObj:
    def test_one_triangle(self):
        text = write_obj(one_triangle_mesh())
        lines = text.splitlines()
        assert sum(l.startswith("v ") for l in lines) == 3
        assert lines[-1] == "f 1 2 3"

    def test_normals_syntax(self):
        text = write_obj(one_triangle_mesh(with_normals=True))
        assert "vn 0 0 1" in text
        assert text.splitlines()[-1] == "f 1//1 2//2 3//3"

    def test_extracted_mesh_reparses(self, solids):
        mesh = extract_isoptic(solids["cube"], math.pi / 2, res=24)
        verts, tris, normals = parse_obj(write_obj(mesh))
        assert np.array_equal(verts, mesh.vertices)
        assert np.array_equal(tris, mesh.triangles)
        assert np.array_equal(normals, mesh.normals)


class TestWriteStl:
    def test_one_triangle_size(self):
        data = write_stl(one_triangle_mesh())
        assert len(data) == 84 + 50
        assert data[:7] == b"isoptic"
        assert struct.unpack("<I", data[80:84])[0] == 1
        normal = struct.unpack("<3f", data[84:96])
        assert normal == (0.0, 0.0, 1.0)

    def test_extracted_mesh_size_and_determinism(self, solids):
        mesh = extract_isoptic(solids["tetrahedron"], math.pi / 4, res=20)
        data = write_stl(mesh)
        assert len(data) == 84 + 50 * len(mesh.triangles)
        assert struct.unpack("<I", data[80:84])[0] == len(mesh.triangles)
        assert write_stl(mesh) == data
        # no NaN normals
        for t in range(len(mesh.triangles)):
            chunk = data[84 + 50 * t: 84 + 50 * t + 12]
            assert all(math.isfinite(v) for v in struct.unpack("<3f", chunk))
