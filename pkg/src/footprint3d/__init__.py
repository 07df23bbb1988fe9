"""footprint3d: orthogonal building footprints to watertight 3D models.

Pipeline: GeoJSON footprints -> turn-string partition into quadrilaterals ->
rectification into a gap-free orthogonal rectangle layout -> parametric
flat/gable/hipped roof solids -> OBJ export and roof-damage reporting.
"""

__version__ = "0.1.0"

from .errors import Footprint3dError
from .ingest import BuildingAttributes, FootprintPolygon, parse_footprints
from .modelgen import BuildingModel, RoofParams, assemble_building, export_obj
from .partition import PartitionResult, partition
from .rectify import RectifiedLayout, main_angle, rectify_all, validate_layout
from .report import DamageRecord, damage_assess, emit_report

__all__ = [
    "__version__",
    "Footprint3dError",
    "BuildingAttributes",
    "FootprintPolygon",
    "parse_footprints",
    "BuildingModel",
    "RoofParams",
    "assemble_building",
    "export_obj",
    "PartitionResult",
    "partition",
    "RectifiedLayout",
    "main_angle",
    "rectify_all",
    "validate_layout",
    "DamageRecord",
    "damage_assess",
    "emit_report",
]
