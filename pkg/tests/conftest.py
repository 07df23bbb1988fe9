"""Shared canonical shapes and input builders."""

from __future__ import annotations

import json

import pytest

from footprint3d.ingest import BuildingAttributes, FootprintPolygon

# All rings clockwise (negative shoelace, y-up), no closing duplicate.
SQUARE = [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]

L_SHAPE = [(0.0, 0.0), (0.0, 5.0), (2.0, 5.0), (2.0, 2.0), (4.0, 2.0), (4.0, 0.0)]

T_SHAPE = [
    (0.0, 3.0), (0.0, 5.0), (6.0, 5.0), (6.0, 3.0),
    (4.0, 3.0), (4.0, 0.0), (2.0, 0.0), (2.0, 3.0),
]

PLUS_SHAPE = [
    (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (0.0, 4.0), (2.0, 4.0), (2.0, 6.0),
    (4.0, 6.0), (4.0, 4.0), (6.0, 4.0), (6.0, 2.0), (4.0, 2.0), (4.0, 0.0),
]

# 22 vertices, 9 L turns: a four-toothed comb with one stepped corner.
COMB22 = [
    (0.0, 0.0), (0.0, 2.0), (1.0, 2.0), (1.0, 4.0), (2.0, 4.0), (2.0, 2.0),
    (4.0, 2.0), (4.0, 4.0), (5.0, 4.0), (5.0, 2.0), (7.0, 2.0), (7.0, 4.0),
    (8.0, 4.0), (8.0, 2.0), (10.0, 2.0), (10.0, 4.0), (11.0, 4.0), (11.0, 2.0),
    (14.0, 2.0), (14.0, 1.0), (12.0, 1.0), (12.0, 0.0),
]

CANONICAL = {"square": SQUARE, "L": L_SHAPE, "T": T_SHAPE, "plus": PLUS_SHAPE}


def make_attrs(stories=1, roof_type="gable", roof_material="tile", wall_material="brick"):
    return BuildingAttributes(stories, roof_type, roof_material, wall_material)


def make_polygon(ring, pid="p0", **attr_kwargs) -> FootprintPolygon:
    return FootprintPolygon(id=pid, vertices=list(ring), attributes=make_attrs(**attr_kwargs))


def feature(fid, ring, stories=1, roof_type="gable", roof_material="tile",
            wall_material="brick", close=True, **extra_props):
    coords = [list(p) for p in ring]
    if close:
        coords.append(list(ring[0]))
    props = {
        "stories": stories,
        "roof_type": roof_type,
        "roof_material": roof_material,
        "wall_material": wall_material,
    }
    props.update(extra_props)
    return {
        "type": "Feature",
        "id": fid,
        "properties": props,
        "geometry": {"type": "Polygon", "coordinates": [coords]},
    }


def feature_collection(features) -> str:
    return json.dumps({"type": "FeatureCollection", "features": list(features)})


@pytest.fixture
def l_polygon():
    return make_polygon(L_SHAPE, "L0")
