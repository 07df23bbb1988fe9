"""Batch pipeline CLI: footprints GeoJSON in, OBJ models and a damage report out.

Coordinates are assumed to be in a planar meter-based projection already; no
geodetic reprojection is performed.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import logging
import math
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .errors import Footprint3dError, ParseError
from .geometry import Point
from .ingest import (
    DEFAULT_COLLINEAR_TOL_DEG,
    FootprintPolygon,
    filter_collinear,
    parse_footprints,
    validate,
)
from .modelgen import OpeningSpec, RoofParams, assemble_building, mtl_text, obj_text
from .partition import partition
from .rectify import main_angle, rectify_all, validate_layout
from .report import DamageRecord, damage_assess, emit_report
from .svgdebug import partition_svg, rectified_svg

log = logging.getLogger(__name__)

WORKERS_ENV_VAR = "FOOTPRINT3D_WORKERS"


@dataclass
class PipelineConfig:
    input_path: str
    out_dir: str
    damage_path: str | None = None
    roof_params: RoofParams = field(default_factory=RoofParams)
    collinear_tol_deg: float = DEFAULT_COLLINEAR_TOL_DEG
    report_format: str = "csv"
    debug_svg: bool = False
    workers: int = 1


@dataclass
class PipelineSummary:
    exit_code: int
    processed: int = 0
    skipped: int = 0
    warnings: int = 0
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class _BuildingOutput:
    building_id: str
    ok: bool
    obj: str = ""
    record: DamageRecord | None = None
    svgs: dict[str, str] = field(default_factory=dict)
    layout_clean: bool = True
    error: str = ""


def _process_building(
    footprint: FootprintPolygon,
    params: RoofParams,
    tol_deg: float,
    damage_regions: list[list[Point]],
    debug_svg: bool,
) -> _BuildingOutput:
    """validate -> filter -> partition -> rectify -> assemble -> obj/report."""
    out = _BuildingOutput(building_id=footprint.id, ok=False)
    try:
        problems = validate(footprint)
        if problems:
            out.error = "; ".join(problems)
            return out
        filtered = filter_collinear(footprint, tol_deg)
        parted = partition(filtered, tol_deg)
        theta = main_angle(filtered)
        layout = rectify_all(parted, theta)
        check = validate_layout(layout)
        out.layout_clean = check.is_clean()
        model = assemble_building(
            footprint.id, layout, footprint.attributes, params, OpeningSpec()
        )
        out.record = damage_assess(model, damage_regions)
        out.obj = obj_text(model)
        if debug_svg:
            out.svgs[f"{footprint.id}.partition.svg"] = partition_svg(
                filtered.vertices, parted
            )
            out.svgs[f"{footprint.id}.rectified.svg"] = rectified_svg(layout)
        out.ok = True
    except Footprint3dError as exc:
        out.error = str(exc)
    return out


def _worker(args: tuple) -> _BuildingOutput:
    return _process_building(*args)


def run_pipeline(config: PipelineConfig) -> PipelineSummary:
    """Process every footprint, write OBJ/MTL/report files, never abort the
    batch on a single bad building."""
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            document = fh.read()
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return PipelineSummary(exit_code=2, diagnostics=[str(exc)])

    try:
        footprints, parse_diags = parse_footprints(document)
    except ParseError as exc:
        log.error("%s", exc)
        return PipelineSummary(exit_code=2, diagnostics=[str(exc)])

    damage_regions: list[list[Point]] = []
    if config.damage_path:
        try:
            with open(config.damage_path, "r", encoding="utf-8") as fh:
                damage_regions = _parse_damage_regions(fh.read())
        except (OSError, ParseError) as exc:
            log.error("cannot read damage regions: %s", exc)
            return PipelineSummary(exit_code=2, diagnostics=[str(exc)])

    jobs = [
        (fp, config.roof_params, config.collinear_tol_deg, damage_regions, config.debug_svg)
        for fp in footprints
    ]
    if config.workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            outputs = list(pool.map(_worker, jobs, chunksize=32))
    else:
        outputs = [_worker(job) for job in jobs]

    os.makedirs(config.out_dir, exist_ok=True)
    prefix = os.path.join(config.out_dir, "")
    summary = PipelineSummary(exit_code=0)
    summary.diagnostics.extend(parse_diags)
    summary.skipped += len(parse_diags)

    materials: list[str] = []
    records = []
    for out in outputs:
        if not out.ok:
            summary.skipped += 1
            summary.diagnostics.append(f"{out.building_id}: {out.error}")
            log.warning("%s skipped: %s", out.building_id, out.error)
            continue
        summary.processed += 1
        if not out.layout_clean:
            summary.warnings += 1
            summary.diagnostics.append(f"{out.building_id}: layout gap/overlap residuals")
        _write(f"{prefix}{out.building_id}.obj", out.obj)
        for name, svg in out.svgs.items():
            _write(f"{prefix}{name}", svg)
        records.append(out.record)
        for line in out.obj.splitlines():
            if line.startswith("usemtl "):
                tag = line.split(" ", 1)[1]
                if tag not in materials:
                    materials.append(tag)

    _write(f"{prefix}materials.mtl", mtl_text(materials))
    ext = "json" if config.report_format == "json" else "csv"
    _write(f"{prefix}report.{ext}", emit_report(records, config.report_format))

    if summary.processed == 0:
        summary.exit_code = 1
    return summary


def _write(path: str, content: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def _parse_damage_regions(document: str) -> list[list[Point]]:
    import json

    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed damage GeoJSON: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise ParseError("damage document is not a GeoJSON FeatureCollection")
    regions = []
    for feature in data.get("features", []):
        geometry = feature.get("geometry") or {}
        if geometry.get("type") != "Polygon":
            continue
        rings = geometry.get("coordinates") or []
        if rings:
            ring = [(float(x), float(y)) for x, y in rings[0]]
            regions.append(ring)
    return regions


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="footprint3d",
        description=(
            "Generate watertight 3D building models with parametric roofs from "
            "2D orthogonal footprints, and report roof damage areas. Input "
            "coordinates must already be planar meters (no reprojection)."
        ),
    )
    parser.add_argument("--input", required=True, help="footprints GeoJSON file")
    parser.add_argument("--damage", help="damage regions GeoJSON file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--slope", type=float, default=30.0, help="roof slope (degrees)")
    parser.add_argument("--eaves", type=float, default=0.5, help="eaves length (m)")
    parser.add_argument("--rf-offs", type=float, default=0.05, help="roof board offset (m)")
    parser.add_argument("--thick-rf", type=float, default=0.15, help="roof board thickness (m)")
    parser.add_argument(
        "--floor-height", type=float, default=3.0, help="floor-to-floor height (m)"
    )
    parser.add_argument(
        "--collinear-tol",
        type=float,
        default=DEFAULT_COLLINEAR_TOL_DEG,
        help="near-180-degree vertex filter tolerance (degrees)",
    )
    parser.add_argument("--report-format", choices=("json", "csv"), default="csv")
    parser.add_argument("--debug-svg", action="store_true", help="write partition/rectify SVGs")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"parallel workers (default: ${WORKERS_ENV_VAR} or 1)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)

    workers = args.workers
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))

    config = PipelineConfig(
        input_path=args.input,
        out_dir=args.out,
        damage_path=args.damage,
        roof_params=RoofParams(
            theta_slope=math.radians(args.slope),
            eaves23=args.eaves,
            eaves12=args.eaves,
            rf_offs=args.rf_offs,
            thick_rf=args.thick_rf,
            floor_height=args.floor_height,
        ),
        collinear_tol_deg=args.collinear_tol,
        report_format=args.report_format,
        debug_svg=args.debug_svg,
        workers=max(1, workers),
    )
    summary = run_pipeline(config)
    print(
        f"processed={summary.processed} skipped={summary.skipped} "
        f"warnings={summary.warnings}"
    )
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())
