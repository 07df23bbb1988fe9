"""Exception types raised across the pipeline."""

from __future__ import annotations


class Footprint3dError(Exception):
    """Base class for all pipeline errors."""


class ParseError(Footprint3dError):
    """Input document could not be parsed at all."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


class DegeneratePolygonError(Footprint3dError):
    """Ring collapsed below a usable polygon (zero area or <4 vertices)."""


class NotOrthogonalizableError(Footprint3dError):
    """A vertex angle cannot be snapped to 90 or 270 degrees."""

    def __init__(self, vertex: int, angle_deg: float):
        super().__init__(
            f"vertex {vertex}: interior angle {angle_deg:.2f} deg cannot be "
            "snapped to 90 or 270"
        )
        self.vertex = vertex
        self.angle_deg = angle_deg


class PartitionStuckError(Footprint3dError):
    """No condition-satisfying dividing line while the body has >4 vertices."""

    def __init__(self, body_ring, quads_so_far):
        super().__init__(
            f"partition stuck with {len(body_ring)}-vertex body after "
            f"{len(quads_so_far)} cuts"
        )
        self.body_ring = body_ring
        self.quads_so_far = quads_so_far


class CutRejectedError(Footprint3dError):
    """Executing a dividing line would leave a non-simple body."""


class AdjacencyNotFoundError(Footprint3dError):
    """No quad contains the checking point of an active edge."""


class DegenerateQuadError(Footprint3dError):
    """Quadrilateral too thin or malformed to orient."""


class RoofParameterError(Footprint3dError):
    """Roof parameters incompatible with the rectangle dimensions."""


class ExportError(Footprint3dError):
    """Output file could not be written."""

    def __init__(self, path: str, cause: Exception):
        super().__init__(f"failed to write {path}: {cause}")
        self.path = path
