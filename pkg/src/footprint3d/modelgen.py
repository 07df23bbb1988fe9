"""Parametric building solids on rectified rectangles.

Bodies are boxes of height floor_height * stories. Gable roofs follow the
roof-board equations (wid_rfb, ratio_s, cp_rf placement): two thin boxes whose
top faces meet over the ridge line. Hipped roofs are four slope-equal boards
tiling the eaves-expanded rectangle in plan; flat roofs are slabs. Window
openings are recessed insets on facade grid cells, suppressed wherever an
edge is shared with a neighboring rectangle.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
from dataclasses import dataclass, field, replace

from . import geometry as geo
from . import mesh
from .errors import ExportError, RoofParameterError
from .geometry import Point
from .ingest import BuildingAttributes
from .mesh import MeshBuilder, Vec3
from .rectify import MainAngle, OrientedQuad, RectifiedLayout, number_quad

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoofParams:
    theta_slope: float = math.radians(30.0)  # roof slope vs horizontal
    eaves23: float = 0.5  # eaves length along the slope, edge23 direction
    eaves12: float = 0.5  # gable-end overhang along edge12
    rf_offs: float = 0.05  # roof board offset from the supporting prism
    thick_rf: float = 0.15  # roof board thickness
    floor_height: float = 3.0

    def validated(self) -> "RoofParams":
        if not 0.0 <= self.theta_slope < 0.5 * math.pi:
            raise RoofParameterError(f"theta_slope {self.theta_slope} outside [0, pi/2)")
        if self.thick_rf <= 0.0:
            raise RoofParameterError("thick_rf must be positive")
        if self.floor_height <= 0.0:
            raise RoofParameterError("floor_height must be positive")
        if min(self.eaves23, self.eaves12, self.rf_offs) < 0.0:
            raise RoofParameterError("eaves and rf_offs must be non-negative")
        return self


@dataclass(frozen=True)
class OpeningSpec:
    width: float = 1.2
    height: float = 1.0
    sill: float = 0.9
    margin: float = 0.3  # clearance from facade ends and shared segments
    pitch: float = 2.5  # horizontal spacing budget per window
    depth: float = 0.1  # recess depth into the wall


@dataclass
class RoofPlane:
    slope: float  # radians vs horizontal
    plan: list[Point]  # plan-projected outline of the plane

    def plan_area(self) -> float:
        return geo.abs_area(self.plan)

    def true_area(self) -> float:
        return self.plan_area() / math.cos(self.slope)


@dataclass
class Solid:
    vertices: list[Vec3]
    triangles: list[tuple[int, int, int]]
    material: str
    roof_plane: RoofPlane | None = None
    meta: dict | None = None


@dataclass
class BuildingModel:
    id: str
    solids: list[Solid]
    footprint_area: float
    roof_planes: list[RoofPlane] = field(default_factory=list)


@dataclass
class RoofQuantities:
    st_heit: float
    side23L: float
    wid_rfb: float
    ratio_s: float
    cp_rf1: Point
    cp_rf2: Point


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def derived_roof_quantities(
    rect: OrientedQuad, p: RoofParams, stories: int
) -> RoofQuantities:
    """Roof-board quantities for a gable roof on an oriented rectangle."""
    theta = p.theta_slope
    tan_t, cos_t, sin_t = math.tan(theta), math.cos(theta), math.sin(theta)
    w_S = rect.w_S

    st_heit = p.floor_height * stories
    side23L = 0.5 * w_S * math.sqrt(1.0 + tan_t * tan_t)
    wid_rfb = side23L + p.eaves23 + p.rf_offs * tan_t
    ratio_s = (
        0.25
        - 0.5 * (p.eaves23 * cos_t + p.rf_offs * sin_t) / w_S
        + p.thick_rf * sin_t / w_S
    )
    if not 0.0 < ratio_s < 0.5:
        raise RoofParameterError(
            f"ratio_s {ratio_s:.4f} outside (0, 0.5): eaves/offset too large for "
            f"w_S={w_S:.3f}"
        )
    pt12 = geo.lerp(rect.pts[0], rect.pts[1], 0.5)
    pt34 = geo.lerp(rect.pts[2], rect.pts[3], 0.5)
    cp_rf1 = geo.lerp(pt12, pt34, ratio_s)
    cp_rf2 = geo.lerp(pt12, pt34, 1.0 - ratio_s)
    return RoofQuantities(st_heit, side23L, wid_rfb, ratio_s, cp_rf1, cp_rf2)


def _rect_frame(rect: OrientedQuad) -> tuple[Point, Point, Point]:
    """(center, ridge direction u along edge12, cross direction s)."""
    pt12 = geo.lerp(rect.pts[0], rect.pts[1], 0.5)
    pt34 = geo.lerp(rect.pts[2], rect.pts[3], 0.5)
    center = geo.lerp(pt12, pt34, 0.5)
    u = geo.unit(geo.sub(rect.pts[1], rect.pts[0]))
    s = geo.unit(geo.sub(pt34, pt12))
    return center, u, s


def _expanded_ring(rect: OrientedQuad, along12: float, along23: float) -> list[Point]:
    """Rectangle ring grown by plan offsets along the edge12/edge23 axes."""
    _, u, s = _rect_frame(rect)
    du, ds = geo.scale(u, along12), geo.scale(s, along23)
    p1, p2, p3, p4 = rect.pts
    return [
        geo.sub(geo.sub(p1, du), ds),
        geo.sub(geo.add(p2, du), ds),
        geo.add(geo.add(p3, du), ds),
        geo.add(geo.sub(p4, du), ds),
    ]


# ---------------------------------------------------------------------------
# body
# ---------------------------------------------------------------------------

def build_body(
    rect: OrientedQuad, stories: int, p: RoofParams, wall_material: str = "wall"
) -> Solid:
    """Axis-pair-aligned box from z=0 to the start height."""
    st_heit = p.floor_height * stories
    plan = list(rect.pts)
    builder = MeshBuilder()
    _plain_box(builder, plan, 0.0, st_heit)
    return Solid(
        vertices=builder.vertices,
        triangles=builder.triangles,
        material=wall_material,
        meta={"plan": plan, "start_index": rect.start_index, "z0": 0.0, "z1": st_heit},
    )


def _plain_box(builder: MeshBuilder, plan: list[Point], z0: float, z1: float) -> None:
    bottom = [mesh.v3(x, y, z0) for x, y in plan]
    top = [mesh.v3(x, y, z1) for x, y in plan]
    builder.quad(bottom[0], bottom[1], bottom[2], bottom[3])
    builder.quad(top[0], top[3], top[2], top[1])
    for i in range(4):
        j = (i + 1) % 4
        builder.quad(bottom[i], top[i], top[j], bottom[j])


def planned_openings(
    plan: list[Point],
    start_index: int,
    rect_id: int,
    layout: RectifiedLayout,
    spec: OpeningSpec,
    p: RoofParams,
    stories: int,
) -> dict[int, list[tuple[float, float, float, float]]]:
    """Opening rectangles per plan edge, shared segments excluded.

    plan is the oriented ring (rotated by start_index against the layout
    rectangle), so shared intervals are looked up on the matching layout
    edge index.
    """
    openings: dict[int, list[tuple[float, float, float, float]]] = {}
    for edge in range(4):
        a, b = plan[edge], plan[(edge + 1) % 4]
        length = geo.dist(a, b)
        layout_edge = (start_index + edge) % 4
        blocked = _shared_intervals(rect_id, layout_edge, length, layout)
        rects = _layout_openings(length, blocked, spec, p, stories)
        if rects:
            openings[edge] = rects
    return openings


def place_openings(
    body: Solid,
    rect_id: int,
    layout: RectifiedLayout,
    spec: OpeningSpec,
    p: RoofParams,
    stories: int,
) -> Solid:
    """Rebuild the body with recessed window insets on unshared facades."""
    if body.meta is None or "plan" not in body.meta:
        raise ValueError("body solid carries no construction metadata")
    plan: list[Point] = body.meta["plan"]
    z1: float = body.meta["z1"]

    openings = planned_openings(
        plan, body.meta.get("start_index", 0), rect_id, layout, spec, p, stories
    )
    if not openings:
        return body

    builder = MeshBuilder()
    _gridded_box(builder, plan, 0.0, z1, openings, spec.depth)
    defects = mesh.mesh_defects(builder.vertices, builder.triangles)
    if defects:
        log.warning("openings left mesh defects (%s); keeping plain body", defects[0])
        return body
    return replace(
        body, vertices=builder.vertices, triangles=builder.triangles
    )


def _shared_intervals(
    rect_id: int, edge: int, length: float, layout: RectifiedLayout
) -> list[tuple[float, float]]:
    """Facade sub-intervals (meters along the edge) shared with neighbors."""
    quads = {q.id: q for q in layout.quads}
    own = quads[rect_id]
    a, b = own.verts_post[edge], own.verts_post[(edge + 1) % 4]
    intervals: list[tuple[float, float]] = []
    for adj in layout.adjacencies:
        if adj.quad_id == rect_id and adj.own_edge == edge:
            intervals.append((0.0, length))
        elif adj.neighbor_id == rect_id and adj.neighbor_edge == edge:
            branch = quads[adj.quad_id]
            t0 = geo.segment_param(branch.verts_post[3], a, b)
            t1 = geo.segment_param(branch.verts_post[0], a, b)
            lo, hi = sorted((t0, t1))
            lo, hi = max(0.0, lo) * length, min(1.0, hi) * length
            if hi > lo:
                intervals.append((lo, hi))
    return intervals


def _free_intervals(
    length: float, blocked: list[tuple[float, float]]
) -> list[tuple[float, float]]:
    free = [(0.0, length)]
    for lo, hi in sorted(blocked):
        nxt = []
        for fa, fb in free:
            if hi <= fa or lo >= fb:
                nxt.append((fa, fb))
                continue
            if lo > fa:
                nxt.append((fa, lo))
            if hi < fb:
                nxt.append((hi, fb))
        free = nxt
    return free


def _layout_openings(
    length: float,
    blocked: list[tuple[float, float]],
    spec: OpeningSpec,
    p: RoofParams,
    stories: int,
) -> list[tuple[float, float, float, float]]:
    """Window rectangles (s0, s1, z0, z1) for one facade."""
    rows = []
    for story in range(stories):
        z0 = story * p.floor_height + spec.sill
        z1 = z0 + spec.height
        if z1 > (story + 1) * p.floor_height - 0.2:
            log.warning("window row skipped: does not fit a %.2f m story", p.floor_height)
            continue
        rows.append((z0, z1))
    if not rows:
        return []

    out = []
    for fa, fb in _free_intervals(length, blocked):
        usable = fb - fa - 2.0 * spec.margin
        if usable < spec.width:
            continue
        count = max(1, int(usable // spec.pitch))
        count = min(count, int(usable // spec.width))
        step = usable / count
        for k in range(count):
            center = fa + spec.margin + (k + 0.5) * step
            s0, s1 = center - 0.5 * spec.width, center + 0.5 * spec.width
            for z0, z1 in rows:
                out.append((s0, s1, z0, z1))
    return out


def _gridded_box(
    builder: MeshBuilder,
    plan: list[Point],
    z0: float,
    z1: float,
    openings: dict[int, list[tuple[float, float, float, float]]],
    depth: float,
) -> None:
    """Box whose side faces are grid cells, with opening cells recessed."""
    y_breaks = {z0, z1}
    for rects in openings.values():
        for _, _, za, zb in rects:
            y_breaks.update((za, zb))
    ys = sorted(y_breaks)

    lengths = [geo.dist(plan[i], plan[(i + 1) % 4]) for i in range(4)]
    min_side = min(geo.dist(plan[0], plan[1]), geo.dist(plan[1], plan[2]))
    dep = min(depth, 0.25 * min_side)

    ring_bottom: list[Vec3] = []
    ring_top: list[Vec3] = []
    for edge in range(4):
        a, b = plan[edge], plan[(edge + 1) % 4]
        length = lengths[edge]
        u = geo.unit(geo.sub(b, a))
        inward = (u[1], -u[0])  # right of travel on a clockwise ring
        x_breaks = {0.0, length}
        holes = openings.get(edge, [])
        for s0, s1, _, _ in holes:
            x_breaks.update((s0, s1))
        xs = sorted(x_breaks)

        def w(s: float, z: float) -> Vec3:
            return mesh.v3(a[0] + u[0] * s, a[1] + u[1] * s, z)

        for xi in range(len(xs) - 1):
            sa, sb = xs[xi], xs[xi + 1]
            sm = 0.5 * (sa + sb)
            for yi in range(len(ys) - 1):
                za, zb = ys[yi], ys[yi + 1]
                zm = 0.5 * (za + zb)
                hole = any(
                    s0 <= sm <= s1 and h0 <= zm <= h1 for s0, s1, h0, h1 in holes
                )
                if not hole:
                    builder.quad(w(sa, za), w(sa, zb), w(sb, zb), w(sb, za))
                    continue
                pa, pb = w(sa, za), w(sb, za)
                pc, pd = w(sb, zb), w(sa, zb)
                off = mesh.v3(inward[0] * dep, inward[1] * dep, 0.0)
                ra, rb = mesh.add3(pa, off), mesh.add3(pb, off)
                rc, rd = mesh.add3(pc, off), mesh.add3(pd, off)
                builder.quad(pb, pa, ra, rb)  # bottom reveal
                builder.quad(pc, pb, rb, rc)  # right reveal
                builder.quad(pd, pc, rc, rd)  # top reveal
                builder.quad(pa, pd, rd, ra)  # left reveal
                builder.quad(ra, rd, rc, rb)  # back panel

        for s in xs[:-1]:
            ring_bottom.append(w(s, z0))
            ring_top.append(w(s, z1))

    cx, cy = geo.centroid(plan)
    builder.fan(mesh.v3(cx, cy, z0), ring_bottom)
    builder.fan(mesh.v3(cx, cy, z1), list(reversed(ring_top)))


# ---------------------------------------------------------------------------
# roofs
# ---------------------------------------------------------------------------

def build_flat_roof(
    rect: OrientedQuad, p: RoofParams, stories: int, roof_material: str = "roof"
) -> Solid:
    """Slab of thickness thick_rf over the rectangle plus eaves overhang."""
    st_heit = p.floor_height * stories
    plan = _expanded_ring(rect, p.eaves12, p.eaves23)
    builder = MeshBuilder()
    _plain_box(builder, plan, st_heit, st_heit + p.thick_rf)
    plane = RoofPlane(slope=0.0, plan=plan)
    return Solid(builder.vertices, builder.triangles, roof_material, roof_plane=plane)


def build_gable_roof(
    rect: OrientedQuad,
    p: RoofParams,
    stories: int,
    roof_material: str = "roof",
    wall_material: str = "wall",
) -> list[Solid]:
    """Two roof boards whose top faces meet over the ridge, plus gable-end
    prisms closing the body up to the ridge."""
    q = derived_roof_quantities(rect, p, stories)
    theta = p.theta_slope
    tan_t, cos_t, sin_t = math.tan(theta), math.cos(theta), math.sin(theta)
    center, u, s = _rect_frame(rect)
    w_L, w_S = rect.w_L, rect.w_S

    ridge_rise = 0.5 * w_S * tan_t
    h_ridge = q.st_heit + ridge_rise + p.rf_offs / cos_t
    half_len = 0.5 * w_L + p.eaves12
    r1 = geo.add(center, geo.scale(u, -half_len))
    r2 = geo.add(center, geo.scale(u, half_len))

    solids: list[Solid] = []
    for upslope in (s, geo.scale(s, -1.0)):
        v_up = mesh.v3(upslope[0] * cos_t, upslope[1] * cos_t, sin_t)
        normal = mesh.v3(-upslope[0] * sin_t, -upslope[1] * sin_t, cos_t)
        top_r1 = mesh.v3(r1[0], r1[1], h_ridge)
        top_r2 = mesh.v3(r2[0], r2[1], h_ridge)
        top_e2 = mesh.sub3(top_r2, mesh.scale3(v_up, q.wid_rfb))
        top_e1 = mesh.sub3(top_r1, mesh.scale3(v_up, q.wid_rfb))
        builder = MeshBuilder()
        mesh.add_prism(
            builder, [top_r1, top_r2, top_e2, top_e1], mesh.scale3(normal, -p.thick_rf)
        )
        mesh.flip_if_inverted(builder)
        plan_w = q.wid_rfb * cos_t
        plane = RoofPlane(
            slope=theta,
            plan=[
                r1,
                r2,
                geo.sub(r2, geo.scale(upslope, plan_w)),
                geo.sub(r1, geo.scale(upslope, plan_w)),
            ],
        )
        solids.append(
            Solid(builder.vertices, builder.triangles, roof_material, roof_plane=plane)
        )

    if ridge_rise > 1e-9:
        t_end = min(p.thick_rf, 0.25 * w_L)
        for end in (-1.0, 1.0):
            apex_plan = geo.add(center, geo.scale(u, end * 0.5 * w_L))
            b1 = geo.add(apex_plan, geo.scale(s, -0.5 * w_S))
            b2 = geo.add(apex_plan, geo.scale(s, 0.5 * w_S))
            ring = [
                mesh.v3(b1[0], b1[1], q.st_heit),
                mesh.v3(b2[0], b2[1], q.st_heit),
                mesh.v3(apex_plan[0], apex_plan[1], q.st_heit + ridge_rise),
            ]
            offset = mesh.v3(-end * u[0] * t_end, -end * u[1] * t_end, 0.0)
            builder = MeshBuilder()
            mesh.add_prism(builder, ring, offset)
            mesh.flip_if_inverted(builder)
            solids.append(Solid(builder.vertices, builder.triangles, wall_material))
    return solids


def build_hipped_roof(
    rect: OrientedQuad, p: RoofParams, stories: int, roof_material: str = "roof"
) -> list[Solid]:
    """Two trapezoidal and two triangular boards tiling the expanded
    rectangle in plan, all at the same slope."""
    theta = p.theta_slope
    tan_t, cos_t, sin_t = math.tan(theta), math.cos(theta), math.sin(theta)
    center, u, s = _rect_frame(rect)
    st_heit = p.floor_height * stories

    length = rect.w_L + 2.0 * p.eaves12
    width = rect.w_S + 2.0 * p.eaves23
    if width > length:
        # over-eaved short axis: ridge flips to the other axis
        u, s = s, geo.scale(u, -1.0)
        length, width = width, length
    half_ridge = 0.5 * (length - width)
    ridge_z = st_heit + 0.5 * rect.w_S * tan_t
    eave_z = ridge_z - 0.5 * width * tan_t

    hl, hw = 0.5 * length, 0.5 * width

    def local(lx: float, ly: float) -> Point:
        return geo.add(center, geo.add(geo.scale(u, lx), geo.scale(s, ly)))

    faces: list[tuple[list[Point], Point]] = []  # (plan poly, inward downhill->uphill dir)
    for side in (-1.0, 1.0):
        poly = [
            local(-hl, side * hw),
            local(hl, side * hw),
            local(half_ridge, 0.0),
            local(-half_ridge, 0.0),
        ]
        faces.append((poly, geo.scale(s, -side)))
    for end in (-1.0, 1.0):
        poly = [
            local(end * hl, -hw),
            local(end * hl, hw),
            local(end * half_ridge, 0.0),
        ]
        faces.append((poly, geo.scale(u, -end)))

    solids = []
    for poly, inward in faces:
        poly = _dedupe_ring(poly)
        if len(poly) < 3:
            continue
        eave_pt = poly[0]
        ring = [
            mesh.v3(pt[0], pt[1], eave_z + geo.dot(geo.sub(pt, eave_pt), inward) * tan_t)
            for pt in poly
        ]
        normal = mesh.v3(-inward[0] * sin_t, -inward[1] * sin_t, cos_t)
        builder = MeshBuilder()
        mesh.add_prism(builder, ring, mesh.scale3(normal, -p.thick_rf))
        mesh.flip_if_inverted(builder)
        plane = RoofPlane(slope=theta, plan=poly)
        solids.append(
            Solid(builder.vertices, builder.triangles, roof_material, roof_plane=plane)
        )
    return solids


def _dedupe_ring(ring: list[Point]) -> list[Point]:
    out: list[Point] = []
    for pt in ring:
        if not out or geo.dist(pt, out[-1]) > 1e-9:
            out.append(pt)
    while len(out) > 1 and geo.dist(out[0], out[-1]) <= 1e-9:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# assembly and export
# ---------------------------------------------------------------------------

def assemble_building(
    building_id: str,
    layout: RectifiedLayout,
    attrs: BuildingAttributes,
    p: RoofParams,
    opening_spec: OpeningSpec | None = None,
) -> BuildingModel:
    """Body plus roof per rectangle, materials tagged from the attributes."""
    p = p.validated()
    spec = opening_spec or OpeningSpec()
    solids: list[Solid] = []
    planes: list[RoofPlane] = []
    footprint_area = 0.0

    for quad in layout.quads:
        rect = number_quad(quad.verts_post, layout.theta)
        footprint_area += geo.abs_area(quad.verts_post)
        body = build_body(rect, attrs.stories, p, attrs.wall_material)
        body = place_openings(body, quad.id, layout, spec, p, attrs.stories)
        solids.append(body)

        if attrs.roof_type == "flat":
            roof_solids = [build_flat_roof(rect, p, attrs.stories, attrs.roof_material)]
        elif attrs.roof_type == "gable":
            roof_solids = build_gable_roof(
                rect, p, attrs.stories, attrs.roof_material, attrs.wall_material
            )
        else:
            roof_solids = build_hipped_roof(rect, p, attrs.stories, attrs.roof_material)
        solids.extend(roof_solids)
        planes.extend(sd.roof_plane for sd in roof_solids if sd.roof_plane is not None)

    return BuildingModel(
        id=building_id, solids=solids, footprint_area=footprint_area, roof_planes=planes
    )


def obj_text(model: BuildingModel, mtl_name: str = "materials.mtl") -> str:
    """Deterministic Wavefront OBJ content for one building."""
    lines = [f"mtllib {mtl_name}"]
    offset = 1
    for n, solid in enumerate(model.solids):
        lines.append(f"o {model.id}/{n}")
        lines.append(f"usemtl {solid.material}")
        for x, y, z in solid.vertices:
            lines.append(
                "v {:.6f} {:.6f} {:.6f}".format(x + 0.0, y + 0.0, z + 0.0)
            )
        for a, b, c in solid.triangles:
            lines.append(f"f {a + offset} {b + offset} {c + offset}")
        offset += len(solid.vertices)
    return "\n".join(lines) + "\n"


def mtl_text(materials: list[str]) -> str:
    """Shared MTL with a stable pseudo-color per material tag."""
    lines = []
    for name in materials:
        digest = hashlib.md5(name.encode("utf-8")).digest()
        r, g, b = (0.25 + 0.7 * v / 255.0 for v in digest[:3])
        lines.append(f"newmtl {name}")
        lines.append(f"Kd {r:.4f} {g:.4f} {b:.4f}")
    return "\n".join(lines) + ("\n" if lines else "")


def export_obj(models: list[BuildingModel], path_prefix: str) -> list[str]:
    """One OBJ per building plus a shared MTL next to them."""
    written = []
    materials: list[str] = []
    for model in models:
        for solid in model.solids:
            if solid.material not in materials:
                materials.append(solid.material)

    mtl_path = f"{path_prefix}materials.mtl"
    try:
        _write_text(mtl_path, mtl_text(materials))
    except OSError as exc:
        raise ExportError(mtl_path, exc) from exc
    written.append(mtl_path)

    for model in models:
        path = f"{path_prefix}{model.id}.obj"
        try:
            _write_text(path, obj_text(model))
        except OSError as exc:
            raise ExportError(path, exc) from exc
        written.append(path)
    return written


def _write_text(path: str, content: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)
