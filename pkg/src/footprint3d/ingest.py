"""Footprint ingestion: GeoJSON parsing, orientation, and vertex filtering."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace

from shapely.geometry import Polygon as ShapelyPolygon

from . import geometry as geo
from .errors import DegeneratePolygonError, ParseError
from .geometry import Point

log = logging.getLogger(__name__)

ROOF_TYPES = frozenset({"flat", "gable", "hipped"})

REQUIRED_PROPERTIES = ("stories", "roof_type", "roof_material", "wall_material")

DEFAULT_COLLINEAR_TOL_DEG = 2.0

_AREA_EPS = 1e-9


@dataclass(frozen=True)
class BuildingAttributes:
    stories: int
    roof_type: str
    roof_material: str
    wall_material: str


@dataclass
class FootprintPolygon:
    """Closed simple 2D ring (stored open, clockwise) plus attributes."""

    id: str
    vertices: list[Point]
    attributes: BuildingAttributes


def parse_footprints(document: str) -> tuple[list[FootprintPolygon], list[str]]:
    """Parse a GeoJSON FeatureCollection of building footprints.

    Returns the accepted polygons plus one diagnostic string per skipped
    feature. Raises ParseError (with a byte offset) on malformed JSON or a
    document that is not a FeatureCollection.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", offset=exc.pos) from exc

    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise ParseError("document is not a GeoJSON FeatureCollection")

    polygons: list[FootprintPolygon] = []
    diagnostics: list[str] = []
    for index, feature in enumerate(data.get("features", [])):
        fid = _feature_id(feature, index)
        problem = _extract(feature, fid)
        if isinstance(problem, str):
            diagnostics.append(problem)
            log.warning("%s", problem)
        else:
            polygons.append(problem)
    return polygons, diagnostics


def _feature_id(feature: dict, index: int) -> str:
    props = feature.get("properties") or {}
    for candidate in (feature.get("id"), props.get("id")):
        if candidate is not None:
            return str(candidate)
    return f"building_{index}"


def _extract(feature: dict, fid: str) -> FootprintPolygon | str:
    geom = feature.get("geometry") or {}
    if geom.get("type") != "Polygon":
        return f"{fid}: geometry type {geom.get('type')!r} is not Polygon, skipped"
    rings = geom.get("coordinates") or []
    if not rings:
        return f"{fid}: empty coordinates, skipped"
    if len(rings) > 1:
        return f"{fid}: polygon with hole (interior ring), skipped"

    props = feature.get("properties") or {}
    missing = [k for k in REQUIRED_PROPERTIES if k not in props]
    if missing:
        return f"{fid}: missing attribute {', '.join(missing)}, skipped"

    stories = props["stories"]
    if not isinstance(stories, int) or isinstance(stories, bool) or stories < 1:
        return f"{fid}: stories must be a positive integer, skipped"
    roof_type = props["roof_type"]
    if roof_type not in ROOF_TYPES:
        return f"{fid}: unsupported roof type {roof_type!r}, skipped"

    ring = [(float(x), float(y)) for x, y in rings[0]]
    if len(ring) >= 2 and geo.dist(ring[0], ring[-1]) <= 1e-12:
        ring = ring[:-1]
    if len(ring) < 4:
        return f"{fid}: fewer than 4 vertices, skipped"

    attrs = BuildingAttributes(
        stories=stories,
        roof_type=roof_type,
        roof_material=str(props["roof_material"]),
        wall_material=str(props["wall_material"]),
    )
    poly = FootprintPolygon(id=fid, vertices=ring, attributes=attrs)
    try:
        return normalize_orientation(poly)
    except DegeneratePolygonError:
        return f"{fid}: zero-area ring, skipped"


def normalize_orientation(poly: FootprintPolygon) -> FootprintPolygon:
    """Return the polygon with a clockwise ring, keeping vertex 0 first."""
    ring = poly.vertices
    area2 = geo.shoelace_sum(ring)
    if abs(area2) < 2.0 * _AREA_EPS:
        raise DegeneratePolygonError(f"{poly.id}: zero-area ring")
    if area2 < 0.0:
        return poly
    reversed_ring = [ring[0]] + list(reversed(ring[1:]))
    return replace(poly, vertices=reversed_ring)


def filter_collinear(
    poly: FootprintPolygon, tol_deg: float = DEFAULT_COLLINEAR_TOL_DEG
) -> FootprintPolygon:
    """Drop vertices whose interior angle is within tol_deg of 180 degrees.

    Vertices are removed one at a time, nearest-to-180 first, so the result
    is stable and idempotent at a fixed tolerance.
    """
    ring = filter_collinear_ring(list(poly.vertices), tol_deg)
    if len(ring) < 4:
        raise DegeneratePolygonError(
            f"{poly.id}: fewer than 4 vertices after collinear filtering"
        )
    return replace(poly, vertices=ring)


def filter_collinear_ring(ring: list[Point], tol_deg: float) -> list[Point]:
    """Ring-level worker for filter_collinear; may return rings shorter than 4."""
    while len(ring) > 3:
        angles = geo.interior_angles_deg(ring)
        deviations = [(abs(a - 180.0), i) for i, a in enumerate(angles)]
        worst, index = min(deviations)
        if worst > tol_deg:
            break
        del ring[index]
    return ring


def validate(poly: FootprintPolygon) -> list[str]:
    """Return one diagnostic per violated ring property (empty when valid)."""
    diagnostics: list[str] = []
    ring = poly.vertices
    if len(ring) < 4:
        diagnostics.append("fewer than 4 vertices")
    if len(ring) >= 2 and geo.dist(ring[0], ring[-1]) <= 1e-12:
        diagnostics.append("duplicate closing vertex")
    if len(ring) >= 3:
        if abs(geo.signed_area(ring)) < _AREA_EPS:
            diagnostics.append("zero area")
        elif not geo.is_clockwise(ring):
            diagnostics.append("not clockwise")
        if not _is_simple(ring):
            diagnostics.append("not simple")
    return diagnostics


def _is_simple(ring: list[Point]) -> bool:
    if not geo.ring_is_simple(ring):
        return False
    try:
        return ShapelyPolygon(ring).is_valid
    except Exception:
        return False
