"""Exception types shared across the package."""


class IsopticError(Exception):
    """Base class for all errors raised by this package."""


class NonPlanarFace(IsopticError):
    """A face cycle does not lie in a single plane within tolerance."""


class NotClosed(IsopticError):
    """The face cycles do not describe a closed 2-manifold surface."""


class NotConvex(IsopticError):
    """Some vertex lies strictly outside a face plane."""


class Degenerate(IsopticError):
    """Degenerate geometry: collinear cycle, zero-area face, or a
    solid-angle query collapsing to measure zero."""


class UnknownSolid(IsopticError):
    """Requested canonical solid name is not in the catalog."""


class SingularRay(IsopticError):
    """The query point lies (within tolerance) on the line through two
    consecutive polygon vertices, where the wedge-angle formula is
    singular."""


class OnFace(IsopticError):
    """The query point lies inside a face polygon; the face solid angle
    has no single-sided limit there."""


class BadAlpha(IsopticError):
    """Target solid angle outside the open interval (0, 2*pi)."""


class EmptySurface(IsopticError):
    """Marching cubes found no sign change in the sampled grid."""


class MeshFormatError(IsopticError):
    """Base class for mesh file parsing errors."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OffSyntaxError(MeshFormatError):
    """Malformed token or row in an OFF document."""


class IndexOutOfRange(MeshFormatError):
    """A face row references a vertex index outside the declared range."""


class CountMismatch(MeshFormatError):
    """Declared counts disagree with the rows present (or geometry is
    empty)."""
