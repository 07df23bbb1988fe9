"""Greedy partition of near-orthogonal polygons into quadrilaterals.

The polygon is encoded as a cyclic string of R (90 deg) / L (270 deg) turns.
Runs of >=2 consecutive R vertices between L vertices are branches; each L
vertex spawns up to two dividing lines (a forward one prolonging its incoming
edge and a backward one prolonging its outgoing edge in reverse). Condition
checks and a priority order select one dividing line per iteration; the cut
removes a quadrilateral and shrinks the body until four vertices remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import geometry as geo
from .errors import (
    CutRejectedError,
    NotOrthogonalizableError,
    PartitionStuckError,
)
from .geometry import Point
from .ingest import DEFAULT_COLLINEAR_TOL_DEG, FootprintPolygon, filter_collinear_ring

FDL = "FDL"
BDL = "BDL"
BODY = "BODY"

# Ray endpoints within this absolute distance of an existing vertex snap to it.
VERTEX_SNAP_TOL = 1e-6

# Digitizer noise makes a ray slide past the corner it would hit exactly in
# clean geometry, tunneling into regions it should never reach and leaving
# uncuttable sliver steps. A ray therefore stops at any vertex it passes
# within this distance, the noise-tolerant version of an exact vertex hit.
# Features smaller than this are outside the design envelope.
COARSE_VERTEX_SNAP = 0.2

_LEN_TIE_EPS = 1e-9


@dataclass
class RLExpression:
    """Cyclic turn labels, one R or L per vertex."""

    turns: str

    @property
    def n_R(self) -> int:
        return self.turns.count("R")

    @property
    def n_L(self) -> int:
        return self.turns.count("L")

    def __len__(self) -> int:
        return len(self.turns)


@dataclass
class Branch:
    start_L: int
    run: list[int]

    @property
    def n_R(self) -> int:
        return len(self.run)


@dataclass
class DividingLine:
    origin: int
    direction: str  # FDL or BDL
    endpoint: Point
    hit_edge: int
    length: float
    vertex_reduction: int
    snapped_vertex: int | None = None
    priority: int | None = None

    def key(self) -> tuple[int, str]:
        return (self.origin, self.direction)


@dataclass
class ConditionReport:
    cuts_one_rectangle: bool
    shorter_than_main_roof: bool
    vertices_unshared: bool

    def all_pass(self) -> bool:
        return (
            self.cuts_one_rectangle
            and self.shorter_than_main_roof
            and self.vertices_unshared
        )


@dataclass
class Quad:
    """One partitioned quadrilateral; verts_post is filled by rectification.

    The ring is clockwise; for branch quads the dividing line is always ring
    edge 3 (from vertex 3 back to vertex 0).
    """

    id: int
    verts_pre: list[Point]
    dividing_pattern: str  # FDL, BDL or BODY
    active_edge: int | None
    verts_post: list[Point] | None = None
    neighbor: tuple[int, int, int] | None = None  # (quad id, neighbor edge, mutual ring idx)


@dataclass
class PartitionResult:
    quads: list[Quad] = field(default_factory=list)

    @property
    def cut_count(self) -> int:
        return len(self.quads) - 1

    @property
    def body(self) -> Quad:
        return self.quads[-1]


def _ring_of(poly) -> list[Point]:
    if isinstance(poly, FootprintPolygon):
        return list(poly.vertices)
    return list(poly)


# ---------------------------------------------------------------------------
# turn classification
# ---------------------------------------------------------------------------

def rl_expression(poly) -> RLExpression:
    """Label each vertex R or L, snapping angles to 90/270 within +-45 deg."""
    ring = _ring_of(poly)
    turns = []
    for i, angle in enumerate(geo.interior_angles_deg(ring)):
        if 45.0 <= angle <= 135.0:
            turns.append("R")
        elif 225.0 <= angle <= 315.0:
            turns.append("L")
        else:
            raise NotOrthogonalizableError(i, angle)
    return RLExpression("".join(turns))


def detect_branches(rl: RLExpression) -> list[Branch]:
    """Maximal cyclic runs of >=2 consecutive R vertices between L vertices."""
    turns = rl.turns
    n = len(turns)
    l_positions = [i for i, t in enumerate(turns) if t == "L"]
    if not l_positions:
        return []
    branches = []
    for li in l_positions:
        run = []
        j = (li + 1) % n
        while turns[j] == "R":
            run.append(j)
            j = (j + 1) % n
        if len(run) >= 2:
            branches.append(Branch(start_L=li, run=run))
    return branches


# ---------------------------------------------------------------------------
# dividing-line enumeration
# ---------------------------------------------------------------------------

def _cast_dl(ring: list[Point], origin_idx: int, direction_tag: str) -> DividingLine | None:
    """Cast one dividing-line ray from an L vertex and clip it at the boundary."""
    n = len(ring)
    origin = ring[origin_idx]
    if direction_tag == FDL:
        # prolong the incoming edge through the vertex
        ray = geo.sub(origin, ring[(origin_idx - 1) % n])
    else:
        # prolong the outgoing edge backwards through the vertex
        ray = geo.sub(origin, ring[(origin_idx + 1) % n])
    if geo.norm(ray) == 0.0:
        return None
    ray = geo.unit(ray)

    best_edge: tuple[float, int] | None = None  # (t, edge index)
    for j in range(n):
        if j == origin_idx or j == (origin_idx - 1) % n:
            continue  # edges incident to the origin vertex
        a, b = ring[j], ring[(j + 1) % n]
        edge_len = geo.dist(a, b)
        if edge_len == 0.0:
            continue
        # skip glancing hits: real crossings of a near-orthogonal ring are
        # near-perpendicular, anything shallower is jittered collinearity
        if abs(geo.cross(ray, geo.sub(b, a))) < 0.5 * edge_len:
            continue
        hit = geo.ray_segment_intersection(origin, ray, a, b)
        if hit is None:
            continue
        t, _ = hit
        if t <= VERTEX_SNAP_TOL:
            continue
        if best_edge is None or t < best_edge[0]:
            best_edge = (t, j)

    best_vertex: tuple[float, int] | None = None  # (t along ray, vertex index)
    for k in range(n):
        if k in (origin_idx, (origin_idx - 1) % n, (origin_idx + 1) % n):
            continue
        offset = geo.sub(ring[k], origin)
        t = geo.dot(offset, ray)
        if t <= VERTEX_SNAP_TOL:
            continue
        if abs(geo.cross(ray, offset)) <= COARSE_VERTEX_SNAP:
            if best_vertex is None or t < best_vertex[0]:
                best_vertex = (t, k)

    if best_edge is None and best_vertex is None:
        return None
    use_vertex = best_vertex is not None and (
        best_edge is None or best_vertex[0] <= best_edge[0] + COARSE_VERTEX_SNAP
    )
    if use_vertex:
        t, snapped = best_vertex
        endpoint = ring[snapped]
        hit_edge = snapped  # endpoint starts this edge
    else:
        t, hit_edge = best_edge
        endpoint = geo.add(origin, geo.scale(ray, t))
        snapped = None

    if direction_tag == FDL:
        reduction = 4 if snapped == (origin_idx + 3) % n else 2
    else:
        reduction = 4 if snapped == (origin_idx - 3) % n else 2
    return DividingLine(
        origin=origin_idx,
        direction=direction_tag,
        endpoint=endpoint,
        hit_edge=hit_edge,
        length=geo.dist(origin, endpoint),
        vertex_reduction=reduction,
        snapped_vertex=snapped,
    )


def dls_from_l_vertex(poly, l_index: int) -> list[DividingLine]:
    """Both candidate dividing lines (forward and backward) of one L vertex."""
    ring = _ring_of(poly)
    out = []
    for tag in (FDL, BDL):
        dl = _cast_dl(ring, l_index, tag)
        if dl is not None:
            out.append(dl)
    return out


def candidate_dls(poly, branch: Branch) -> list[DividingLine]:
    """Candidate dividing lines of a branch's two bounding L vertices."""
    ring = _ring_of(poly)
    n = len(ring)
    end_l = (branch.run[-1] + 1) % n
    out: list[DividingLine] = []
    seen: set[tuple[int, str]] = set()
    for lv in (branch.start_L, end_l):
        for dl in dls_from_l_vertex(ring, lv):
            if dl.key() not in seen:
                seen.add(dl.key())
                out.append(dl)
    return out


def all_candidate_dls(poly) -> list[DividingLine]:
    """Deduplicated candidates over every branch of the polygon."""
    ring = _ring_of(poly)
    rl = rl_expression(ring)
    out: list[DividingLine] = []
    seen: set[tuple[int, str]] = set()
    for branch in detect_branches(rl):
        for dl in candidate_dls(ring, branch):
            if dl.key() not in seen:
                seen.add(dl.key())
                out.append(dl)
    return out


# ---------------------------------------------------------------------------
# condition checks
# ---------------------------------------------------------------------------

def _try_cut(ring: list[Point], dl: DividingLine) -> tuple[list[Point], list[Point]] | None:
    """Split the ring along dl into (quad ring, raw body ring), or None.

    Returns None when the cut-off region is not a single quadrilateral.
    The quad ring is clockwise with the dividing line as edge 3; the body
    ring still carries the (now collinear) origin vertex.
    """
    n = len(ring)
    i = dl.origin
    rl = rl_expression(ring).turns

    if dl.direction == FDL:
        v1, v2 = (i + 1) % n, (i + 2) % n
        if rl[v1] != "R" or rl[v2] != "R":
            return None
        if dl.snapped_vertex is not None:
            if dl.snapped_vertex != (i + 3) % n:
                return None
        elif dl.hit_edge != v2:
            return None
        quad = [ring[i], ring[v1], ring[v2], dl.endpoint]
        body = []
        for j in range(n):
            if j in (v1, v2):
                continue
            if j == (i + 3) % n and dl.snapped_vertex == j:
                body.append(dl.endpoint)
            else:
                body.append(ring[j])
        if dl.snapped_vertex is None:
            # endpoint becomes a new body vertex right after the origin
            body = _insert_after(body, ring[i], dl.endpoint)
    else:
        v1, v2 = (i - 1) % n, (i - 2) % n
        if rl[v1] != "R" or rl[v2] != "R":
            return None
        if dl.snapped_vertex is not None:
            if dl.snapped_vertex != (i - 3) % n:
                return None
        elif dl.hit_edge != (i - 3) % n:
            return None
        quad = [dl.endpoint, ring[v2], ring[v1], ring[i]]
        body = []
        for j in range(n):
            if j in (v1, v2):
                continue
            if j == (i - 3) % n and dl.snapped_vertex == j:
                body.append(dl.endpoint)
            else:
                body.append(ring[j])
        if dl.snapped_vertex is None:
            body = _insert_before(body, ring[i], dl.endpoint)

    if not geo.is_clockwise(quad) or geo.abs_area(quad) < 1e-12:
        return None
    if not geo.ring_is_simple(quad):
        return None
    return quad, body


def _insert_after(ring: list[Point], anchor: Point, new_point: Point) -> list[Point]:
    idx = ring.index(anchor)
    return ring[: idx + 1] + [new_point] + ring[idx + 1 :]


def _insert_before(ring: list[Point], anchor: Point, new_point: Point) -> list[Point]:
    idx = ring.index(anchor)
    return ring[:idx] + [new_point] + ring[idx:]


def _conditions_12(ring: list[Point], dl: DividingLine) -> tuple[bool, bool]:
    cut = _try_cut(ring, dl)
    if cut is None:
        return False, False
    _, body = cut
    direction = geo.unit(geo.sub(dl.endpoint, ring[dl.origin]))
    main_roof_width = geo.span_along(body, direction)
    return True, dl.length < main_roof_width


def check_dl_conditions(
    poly, dl: DividingLine, all_dls: Sequence[DividingLine]
) -> ConditionReport:
    """Evaluate the three selection conditions for one dividing line.

    (1) the cut-off region is a single quadrilateral; (2) the line is shorter
    than the remaining body's extent along the line's own direction (the main
    roof the branch roof extends into); (3) among condition-satisfying lines
    sharing an origin, only the shortest passes (equal lengths: FDL wins).
    """
    ring = _ring_of(poly)
    cond1, cond2 = _conditions_12(ring, dl)

    cond3 = True
    if cond1 and cond2:
        for other in all_dls:
            if other.key() == dl.key() or other.origin != dl.origin:
                continue
            o1, o2 = _conditions_12(ring, other)
            if not (o1 and o2):
                continue
            if other.length < dl.length - _LEN_TIE_EPS:
                cond3 = False
            elif abs(other.length - dl.length) <= _LEN_TIE_EPS:
                if dl.direction == BDL and other.direction == FDL:
                    cond3 = False
    return ConditionReport(cond1, cond2, cond3)


def prioritize(dls: Sequence[DividingLine]) -> list[DividingLine]:
    """Rank condition-satisfying lines: reduction 4 first, then shorter, then
    lowest origin index, forward before backward."""
    ranked = sorted(
        dls,
        key=lambda d: (-d.vertex_reduction, d.length, d.origin, 0 if d.direction == FDL else 1),
    )
    for rank, dl in enumerate(ranked):
        dl.priority = rank
    return ranked


# ---------------------------------------------------------------------------
# cutting
# ---------------------------------------------------------------------------

def execute_cut(
    poly, dl: DividingLine, tol_deg: float = DEFAULT_COLLINEAR_TOL_DEG
) -> tuple[Quad, list[Point]]:
    """Cut the quad off and return it with the reduced body ring.

    Raises CutRejectedError when the resulting body would be non-simple or
    degenerate; the caller falls through to the next-priority line.
    """
    ring = _ring_of(poly)
    cut = _try_cut(ring, dl)
    if cut is None:
        raise CutRejectedError(f"dividing line from vertex {dl.origin} cuts no quad")
    quad_ring, body = cut
    body = filter_collinear_ring(body, tol_deg)
    if len(body) < 4:
        raise CutRejectedError("cut would collapse the body below 4 vertices")
    if not geo.ring_is_simple(body):
        raise CutRejectedError("cut would leave a non-simple body")
    quad = Quad(
        id=-1,
        verts_pre=quad_ring,
        dividing_pattern=dl.direction,
        active_edge=3,
    )
    return quad, body


def partition(
    poly, tol_deg: float = DEFAULT_COLLINEAR_TOL_DEG
) -> PartitionResult:
    """Cut quadrilaterals off until the body has four vertices (body last)."""
    ring = _ring_of(poly)
    quads: list[Quad] = []
    max_iterations = max(1, (len(ring) - 4) // 2 + 1)
    iterations = 0

    while len(ring) > 4:
        iterations += 1
        if iterations > max_iterations:
            raise PartitionStuckError(ring, quads)
        candidates = all_candidate_dls(ring)
        passing = [
            dl for dl in candidates if check_dl_conditions(ring, dl, candidates).all_pass()
        ]
        if not passing:
            raise PartitionStuckError(ring, quads)
        for dl in prioritize(passing):
            try:
                quad, ring = execute_cut(ring, dl, tol_deg)
            except CutRejectedError:
                continue
            quad.id = len(quads)
            quads.append(quad)
            break
        else:
            raise PartitionStuckError(ring, quads)

    quads.append(Quad(id=len(quads), verts_pre=ring, dividing_pattern=BODY, active_edge=None))
    return PartitionResult(quads=quads)
