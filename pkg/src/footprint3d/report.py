"""Roof plane areas and the per-building roof damage assessment report."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from shapely.geometry import Polygon as ShapelyPolygon
from shapely.ops import unary_union

from .geometry import Point
from .modelgen import BuildingModel

log = logging.getLogger(__name__)

REPORT_FIELDS = (
    "building_id",
    "footprint_area",
    "plan_roof_area",
    "true_roof_area",
    "damaged_plan_area",
    "damaged_true_area",
    "damage_fraction",
)


@dataclass
class DamageRecord:
    building_id: str
    footprint_area: float
    plan_roof_area: float
    true_roof_area: float
    damaged_plan_area: float
    damaged_true_area: float
    damage_fraction: float


def roof_plane_areas(model: BuildingModel) -> list[tuple[int, float, float, float]]:
    """Per plane: (plane id, plan area, slope-corrected true area, slope)."""
    out = []
    for i, plane in enumerate(model.roof_planes):
        plan = plane.plan_area()
        out.append((i, plan, plan / math.cos(plane.slope), plane.slope))
    return out


def damage_assess(
    model: BuildingModel, damage_regions: Sequence[Sequence[Point]]
) -> DamageRecord:
    """Clip each roof plane against the union of damage regions in plan.

    Damage polygons are nadir-view 2D outlines in the footprint coordinate
    system; invalid regions are skipped with a diagnostic.
    """
    shapes = []
    for k, region in enumerate(damage_regions):
        try:
            shape = ShapelyPolygon(region)
        except Exception:
            shape = None
        if shape is None or shape.is_empty or not shape.is_valid:
            log.warning("damage region %d invalid, skipped", k)
            continue
        shapes.append(shape)
    union = unary_union(shapes) if shapes else None

    plan_total = true_total = damaged_plan = damaged_true = 0.0
    for plane in model.roof_planes:
        plan = plane.plan_area()
        cos_slope = math.cos(plane.slope)
        plan_total += plan
        true_total += plan / cos_slope
        if union is None or plan == 0.0:
            continue
        hit = ShapelyPolygon(plane.plan).intersection(union).area
        damaged_plan += hit
        damaged_true += hit / cos_slope

    fraction = damaged_true / true_total if true_total > 0.0 else 0.0
    return DamageRecord(
        building_id=model.id,
        footprint_area=model.footprint_area,
        plan_roof_area=plan_total,
        true_roof_area=true_total,
        damaged_plan_area=damaged_plan,
        damaged_true_area=damaged_true,
        damage_fraction=min(1.0, fraction),
    )


def emit_report(records: Sequence[DamageRecord], format: str = "csv") -> str:
    """Render records as CSV (3-decimal fields) or a JSON array, input order."""
    if format == "csv":
        lines = [",".join(REPORT_FIELDS)]
        for r in records:
            lines.append(
                "{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}".format(
                    r.building_id,
                    r.footprint_area,
                    r.plan_roof_area,
                    r.true_roof_area,
                    r.damaged_plan_area,
                    r.damaged_true_area,
                    r.damage_fraction,
                )
            )
        return "\n".join(lines) + "\n"
    if format == "json":
        payload = [
            {
                "building_id": r.building_id,
                "footprint_area": round(r.footprint_area, 3),
                "plan_roof_area": round(r.plan_roof_area, 3),
                "true_roof_area": round(r.true_roof_area, 3),
                "damaged_plan_area": round(r.damaged_plan_area, 3),
                "damaged_true_area": round(r.damaged_true_area, 3),
                "damage_fraction": round(r.damage_fraction, 3),
            }
            for r in records
        ]
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown report format {format!r}")
