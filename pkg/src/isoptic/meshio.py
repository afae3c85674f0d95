"""Mesh file formats: OFF input/output, OBJ and binary STL output.

OFF carries polyhedron face/vertex data; halfspaces are always
re-derived at build time, never read from a file.  Text writers emit 17
significant digits so 64-bit floats round-trip exactly, and always LF
line endings; parsers accept both LF and CRLF.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import CountMismatch, IndexOutOfRange, OffSyntaxError


def _significant_lines(text):
    """(line_number, tokens) for rows that carry data.

    Blank lines are skipped and everything after a '#' is a comment.
    """
    for lineno, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def parse_off(text: str):
    """Parse an OFF document into (vertices, cycles).

    Grammar: optional comments, the literal header ``OFF``, a counts row
    ``V F E`` (E may be 0 and is ignored), V rows of three reals, then F
    rows of ``n i1 ... in`` with n >= 3.

    Returns an (V, 3) float array and a list of index tuples, ready for
    polyhedron construction.  Raises ``OffSyntaxError`` (with the line
    number), ``CountMismatch``, or ``IndexOutOfRange``.
    """
    rows = _significant_lines(text)

    try:
        lineno, tokens = next(rows)
    except StopIteration:
        raise CountMismatch("empty document") from None
    if tokens != ["OFF"]:
        raise OffSyntaxError(f"expected header 'OFF', got {' '.join(tokens)!r}", lineno)

    try:
        lineno, tokens = next(rows)
    except StopIteration:
        raise CountMismatch("missing counts row") from None
    if len(tokens) != 3:
        raise OffSyntaxError("counts row must be 'V F E'", lineno)
    try:
        n_verts, n_faces, _ = (int(t) for t in tokens)
    except ValueError:
        raise OffSyntaxError("counts must be integers", lineno) from None
    if n_verts <= 0 or n_faces <= 0:
        raise CountMismatch(f"no geometry: {n_verts} vertices, {n_faces} faces", lineno)

    vertices = np.empty((n_verts, 3))
    for i in range(n_verts):
        try:
            lineno, tokens = next(rows)
        except StopIteration:
            raise CountMismatch(
                f"declared {n_verts} vertices but found {i}"
            ) from None
        if len(tokens) != 3:
            raise OffSyntaxError(
                f"vertex row needs 3 coordinates, got {len(tokens)}", lineno
            )
        try:
            vertices[i] = [float(t) for t in tokens]
        except ValueError:
            raise OffSyntaxError("vertex coordinates must be numeric", lineno) from None

    cycles = []
    for i in range(n_faces):
        try:
            lineno, tokens = next(rows)
        except StopIteration:
            raise CountMismatch(f"declared {n_faces} faces but found {i}") from None
        try:
            numbers = [int(t) for t in tokens]
        except ValueError:
            raise OffSyntaxError("face row must be integers", lineno) from None
        if not numbers or numbers[0] < 3:
            raise OffSyntaxError("face row needs a count of at least 3", lineno)
        if len(numbers) != numbers[0] + 1:
            raise OffSyntaxError(
                f"face row declares {numbers[0]} indices but has {len(numbers) - 1}",
                lineno,
            )
        cycle = numbers[1:]
        for idx in cycle:
            if not 0 <= idx < n_verts:
                raise IndexOutOfRange(
                    f"vertex index {idx} out of range [0, {n_verts})", lineno
                )
        cycles.append(tuple(cycle))

    extra = next(rows, None)
    if extra is not None:
        raise CountMismatch("more rows than declared counts", extra[0])
    return vertices, cycles


def write_off(vertices, cycles) -> str:
    """Serialize indexed polygon geometry as an OFF document.

    Inverse of ``parse_off`` on the data.  Writing empty geometry raises
    ``CountMismatch`` since the output could not be re-parsed.
    """
    vertices = np.asarray(vertices, dtype=float)
    if len(vertices) == 0 or len(cycles) == 0:
        raise CountMismatch("refusing to write empty geometry")
    lines = ["OFF", f"{len(vertices)} {len(cycles)} 0"]
    for v in vertices:
        lines.append(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    for c in cycles:
        lines.append(f"{len(c)} " + " ".join(str(int(i)) for i in c))
    return "\n".join(lines) + "\n"


def write_obj(mesh) -> str:
    """Serialize a triangle mesh as Wavefront OBJ text.

    All ``v`` rows, then all ``vn`` rows (when normals are present),
    then ``f`` rows with 1-based indices, using ``a//a`` index pairs
    when normals exist.
    """
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    with_normals = mesh.normals is not None
    if with_normals:
        for n in mesh.normals:
            lines.append(f"vn {n[0]:.17g} {n[1]:.17g} {n[2]:.17g}")
    for t in mesh.triangles:
        a, b, c = (int(i) + 1 for i in t)
        if with_normals:
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
        else:
            lines.append(f"f {a} {b} {c}")
    return "\n".join(lines) + "\n"


def write_stl(mesh) -> bytes:
    """Serialize a triangle mesh as binary STL.

    80-byte zero-padded header tagged ``isoptic``, little-endian uint32
    triangle count, then per triangle the facet normal (normalized cross
    product of the first two edges) and three vertices as float32
    triplets plus a zero attribute word.  Output length is exactly
    84 + 50 * T bytes.
    """
    out = bytearray(b"isoptic".ljust(80, b"\0"))
    out += struct.pack("<I", len(mesh.triangles))
    for t in mesh.triangles:
        a, b, c = (mesh.vertices[int(i)] for i in t)
        n = np.cross(b - a, c - a)
        norm = float(np.linalg.norm(n))
        if norm > 0.0:
            n = n / norm
        out += struct.pack("<3f", *n)
        for v in (a, b, c):
            out += struct.pack("<3f", *v)
        out += struct.pack("<H", 0)
    return bytes(out)
