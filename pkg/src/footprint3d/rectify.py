"""Rectification of partitioned quadrilaterals into mutually orthogonal
rectangles.

The dominant edge direction modulo 90 degrees (length-weighted) becomes the
main angle; the body quad is rectified about its centroid first, then each
branch quad, in reverse cut order, finds its neighbor through a checking
point just beyond its active edge and is rebuilt as an exact rectangle
anchored at the rectified position of the mutual vertex (the generatrix).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geometry as geo
from .errors import AdjacencyNotFoundError, DegenerateQuadError
from .geometry import Point
from .partition import BODY, PartitionResult, Quad

MAIN_ANGLE_BIN_DEG = 1.0

# Checking-point offset: fraction of the active edge, clamped in meters.
CHECK_EPS_FRACTION = 1e-4
CHECK_EPS_MIN = 1e-6
CHECK_EPS_MAX = 0.01

_PARAM_SNAP = 1e-9
_AXIS_EPS = 1e-9


@dataclass
class MainAngle:
    theta: float  # radians in [0, pi/2)
    bin_support: float  # summed edge length in the winning bin

    def axes(self) -> tuple[Point, Point]:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return (c, s), (-s, c)


@dataclass
class OrientedQuad:
    """Quad corners renumbered so pt1 starts a long edge."""

    pts: tuple[Point, Point, Point, Point]
    w_L: float
    w_S: float
    start_index: int  # ring index of pt1 in the source quad


@dataclass
class Adjacency:
    quad_id: int
    neighbor_id: int
    own_edge: int
    neighbor_edge: int
    mutual_vertex: Point  # pre-rectification position
    mutual_ring_index: int  # index of the mutual vertex in the quad ring
    neighbor_param: float  # parametric position along the neighbor edge


@dataclass
class RectifiedLayout:
    theta: MainAngle
    quads: list[Quad]
    adjacencies: list[Adjacency] = field(default_factory=list)

    @property
    def rectangles(self) -> list[list[Point]]:
        return [q.verts_post for q in self.quads]


@dataclass
class AdjacencyCheck:
    quad_id: int
    neighbor_id: int
    collinearity_residual: float
    gap: float


@dataclass
class OverlapCheck:
    quad_id: int
    other_id: int
    area: float


@dataclass
class LayoutReport:
    adjacency_checks: list[AdjacencyCheck]
    overlaps: list[OverlapCheck]

    def max_residual(self) -> float:
        return max((c.collinearity_residual for c in self.adjacency_checks), default=0.0)

    def max_gap(self) -> float:
        return max((c.gap for c in self.adjacency_checks), default=0.0)

    def max_overlap(self) -> float:
        return max((o.area for o in self.overlaps), default=0.0)

    def is_clean(
        self,
        residual_tol: float = 1e-9,
        overlap_tol: float = 1e-12,
        gap_tol: float = 1e-9,
    ) -> bool:
        return (
            self.max_residual() <= residual_tol
            and self.max_overlap() <= overlap_tol
            and self.max_gap() <= gap_tol
        )


# ---------------------------------------------------------------------------
# main angle
# ---------------------------------------------------------------------------

def main_angle(poly) -> MainAngle:
    """Length-weighted dominant edge inclination modulo 90 degrees."""
    ring = poly.vertices if hasattr(poly, "vertices") else list(poly)
    half_pi = 0.5 * math.pi
    bin_width = math.radians(MAIN_ANGLE_BIN_DEG)
    n_bins = int(round(half_pi / bin_width))
    support = [0.0] * n_bins
    vec_sum = [(0.0, 0.0)] * n_bins

    for a, b in geo.ring_edges(ring):
        length = geo.dist(a, b)
        if length == 0.0:
            continue
        angle = math.atan2(b[1] - a[1], b[0] - a[0]) % half_pi
        idx = min(n_bins - 1, int(angle / bin_width))
        support[idx] += length
        cx, cy = vec_sum[idx]
        vec_sum[idx] = (cx + length * math.cos(4.0 * angle), cy + length * math.sin(4.0 * angle))

    winner = max(range(n_bins), key=lambda i: (support[i], -i))
    cx, cy = vec_sum[winner]
    theta = (math.atan2(cy, cx) / 4.0) % half_pi
    return MainAngle(theta=theta, bin_support=support[winner])


def snap_direction(v: Point, theta: MainAngle | float) -> Point:
    """Snap a vector to the nearest of the four main-angle frame axes."""
    t = theta.theta if isinstance(theta, MainAngle) else theta
    c, s = math.cos(t), math.sin(t)
    u = geo.unit(v)
    candidates = ((c, s), (-c, -s), (-s, c), (s, -c))
    return max(candidates, key=lambda d: geo.dot(u, d))


# ---------------------------------------------------------------------------
# quad numbering
# ---------------------------------------------------------------------------

def number_quad(quad, theta: MainAngle | float) -> OrientedQuad:
    """Cyclically renumber a clockwise quad so pt1 starts a long edge.

    Of the two long edges, pt1 starts the one pointing frame-right
    (positive x in the main-angle frame); when both are frame-vertical the
    frame-down edge wins, matching the rectification equations' layout.
    """
    ring = list(quad.verts_pre) if isinstance(quad, Quad) else list(quad)
    if len(ring) != 4:
        raise DegenerateQuadError(f"expected 4 vertices, got {len(ring)}")
    lengths = [geo.dist(a, b) for a, b in geo.ring_edges(ring)]
    if min(lengths) < 1e-6:
        raise DegenerateQuadError(f"edge of length {min(lengths):.2e} too short")

    mean02 = 0.5 * (lengths[0] + lengths[2])
    mean13 = 0.5 * (lengths[1] + lengths[3])
    if abs(mean02 - mean13) <= 1e-12:
        # square: edge12 is the edge from vertex index 0, deterministically
        pts = tuple(ring)
        return OrientedQuad(pts=pts, w_L=mean02, w_S=mean13, start_index=0)
    if mean02 > mean13:
        long_start, w_L, w_S = 0, mean02, mean13
    else:
        long_start, w_L, w_S = 1, mean13, mean02

    t = theta.theta if isinstance(theta, MainAngle) else theta
    candidates = (long_start, long_start + 2)
    start = None
    for i in candidates:
        d = geo.rotate(geo.unit(geo.sub(ring[(i + 1) % 4], ring[i])), -t)
        if d[0] > _AXIS_EPS:
            start = i
            break
    if start is None:
        # frame-vertical long edges: take the frame-down one
        for i in candidates:
            d = geo.rotate(geo.unit(geo.sub(ring[(i + 1) % 4], ring[i])), -t)
            if d[1] < -_AXIS_EPS:
                start = i
                break
    if start is None:
        start = long_start

    pts = tuple(ring[(start + k) % 4] for k in range(4))
    return OrientedQuad(pts=pts, w_L=w_L, w_S=w_S, start_index=start)


# ---------------------------------------------------------------------------
# rectification
# ---------------------------------------------------------------------------

def _rectify_ring(
    ring: list[Point], mutual: int, generatrix: Point, theta: MainAngle | float
) -> list[Point]:
    """Rebuild a quad as an exact frame-aligned rectangle anchored at the
    generatrix, on the same side as the pre-rectification geometry."""
    lengths = [geo.dist(a, b) for a, b in geo.ring_edges(ring)]
    means = (0.5 * (lengths[0] + lengths[2]), 0.5 * (lengths[1] + lengths[3]))

    nxt, prv = (mutual + 1) % 4, (mutual - 1) % 4
    d_next = snap_direction(geo.sub(ring[nxt], ring[mutual]), theta)
    d_prev = snap_direction(geo.sub(ring[prv], ring[mutual]), theta)
    if abs(geo.dot(d_next, d_prev)) > 0.5:
        raise DegenerateQuadError("incident edges snap to the same frame axis")
    len_next = means[mutual % 2]
    len_prev = means[prv % 2]

    out: list[Point | None] = [None] * 4
    out[mutual] = generatrix
    out[nxt] = geo.add(generatrix, geo.scale(d_next, len_next))
    out[prv] = geo.add(generatrix, geo.scale(d_prev, len_prev))
    out[(mutual + 2) % 4] = geo.add(
        geo.add(generatrix, geo.scale(d_next, len_next)), geo.scale(d_prev, len_prev)
    )
    return out  # type: ignore[return-value]


def rectify_quad(
    oriented: OrientedQuad,
    generatrix: Point,
    mutual: int,
    theta: MainAngle | float,
) -> tuple[Point, Point, Point, Point]:
    """Rectified pt1..pt4 positions from the generatrix (mutual is the
    0-based index of the mutual vertex within the oriented numbering)."""
    out = _rectify_ring(list(oriented.pts), mutual, generatrix, theta)
    return tuple(out)  # type: ignore[return-value]


def _rectify_body(ring: list[Point], theta: MainAngle | float) -> list[Point]:
    """Body rectangle: centroid kept fixed, sides = means of opposite edges."""
    lengths = [geo.dist(a, b) for a, b in geo.ring_edges(ring)]
    mean02 = 0.5 * (lengths[0] + lengths[2])
    mean13 = 0.5 * (lengths[1] + lengths[3])
    d0 = snap_direction(geo.sub(ring[1], ring[0]), theta)
    d1 = snap_direction(geo.sub(ring[2], ring[1]), theta)
    if abs(geo.dot(d0, d1)) > 0.5:
        raise DegenerateQuadError("body edges snap to the same frame axis")
    c = geo.centroid(ring)
    v0 = geo.sub(geo.sub(c, geo.scale(d0, 0.5 * mean02)), geo.scale(d1, 0.5 * mean13))
    v1 = geo.add(v0, geo.scale(d0, mean02))
    v2 = geo.add(v1, geo.scale(d1, mean13))
    v3 = geo.add(v0, geo.scale(d1, mean13))
    return [v0, v1, v2, v3]


# ---------------------------------------------------------------------------
# adjacency search
# ---------------------------------------------------------------------------

def _checking_points(quad: Quad) -> list[Point]:
    """Probe points just beyond the active edge, nearest offset first.

    Noisy cuts can leave the active edge a few centimeters off the neighbor
    region, so the base offset is followed by progressively larger ones.
    """
    a = quad.verts_pre[3]
    b = quad.verts_pre[0]
    edge_len = geo.dist(a, b)
    eps = min(CHECK_EPS_MAX, max(CHECK_EPS_MIN, CHECK_EPS_FRACTION * edge_len))
    mid = geo.lerp(a, b, 0.5)
    d = geo.unit(geo.sub(b, a))
    outward = (-d[1], d[0])  # left of travel = away from the quad interior
    cap = min(0.15, 0.25 * edge_len)
    offsets = [eps] + [o for o in (0.02, 0.05, 0.1, 0.15) if eps < o <= cap]
    return [geo.add(mid, geo.scale(outward, o)) for o in offsets]


def find_adjacent(partitioned: PartitionResult, active: Quad) -> Adjacency:
    """Locate the quad containing the active edge's checking point.

    Works on pre-rectification coordinates. The mutual vertex is the active
    edge endpoint shared with the neighbor edge when exactly one endpoint is
    a neighbor corner; otherwise the endpoint sitting earliest along the
    neighbor edge.
    """
    if active.active_edge is None:
        raise AdjacencyNotFoundError(f"quad {active.id} has no active edge")

    neighbor = None
    cp = None
    for probe in _checking_points(active):
        for quad in partitioned.quads:
            if quad.id <= active.id:
                continue
            if geo.point_in_ring(probe, quad.verts_pre):
                neighbor, cp = quad, probe
                break
        if neighbor is not None:
            break
    if neighbor is None:
        # noisy cuts may leave the probe in no quad; fall back to the later
        # quad whose boundary passes closest to the active edge midpoint
        mid = geo.lerp(active.verts_pre[3], active.verts_pre[0], 0.5)
        best = None
        for quad in partitioned.quads:
            if quad.id <= active.id:
                continue
            ring = quad.verts_pre
            for j in range(len(ring)):
                d = geo.point_segment_distance(mid, ring[j], ring[(j + 1) % len(ring)])
                if best is None or d < best[0]:
                    best = (d, quad)
        if best is not None and best[0] <= 0.5:
            neighbor, cp = best[1], mid
    if neighbor is None:
        raise AdjacencyNotFoundError(
            f"no quad contains the checking point of quad {active.id}"
        )

    ring = neighbor.verts_pre
    act_dir = geo.unit(geo.sub(active.verts_pre[0], active.verts_pre[3]))
    aligned = [
        j
        for j in range(len(ring))
        if abs(geo.dot(geo.unit(geo.sub(ring[(j + 1) % len(ring)], ring[j])), act_dir))
        >= 0.5
    ]
    # the attachment edge runs along the cut line, so only near-parallel
    # neighbor edges qualify; corner-adjacent perpendicular edges do not
    n_edge = min(
        aligned or range(len(ring)),
        key=lambda j: geo.point_segment_distance(cp, ring[j], ring[(j + 1) % len(ring)]),
    )
    na, nb = ring[n_edge], ring[(n_edge + 1) % len(ring)]

    ends = {3: active.verts_pre[3], 0: active.verts_pre[0]}
    shared = {
        k: p
        for k, p in ends.items()
        if geo.dist(p, na) <= 1e-9 or geo.dist(p, nb) <= 1e-9
    }
    if len(shared) == 1:
        mutual_idx = next(iter(shared))
    else:
        mutual_idx = min(ends, key=lambda k: geo.segment_param(ends[k], na, nb))
    mutual = ends[mutual_idx]
    t = geo.segment_param(mutual, na, nb)
    if abs(t) <= _PARAM_SNAP:
        t = 0.0
    elif abs(t - 1.0) <= _PARAM_SNAP:
        t = 1.0

    return Adjacency(
        quad_id=active.id,
        neighbor_id=neighbor.id,
        own_edge=3,
        neighbor_edge=n_edge,
        mutual_vertex=mutual,
        mutual_ring_index=mutual_idx,
        neighbor_param=t,
    )


def rectify_all(partitioned: PartitionResult, theta: MainAngle) -> RectifiedLayout:
    """Fill verts_post for every quad: body first, branches in reverse cut
    order, each anchored at its neighbor's rectified mutual vertex."""
    body = partitioned.body
    if body.dividing_pattern != BODY:
        raise DegenerateQuadError("last quad of the partition is not the body")
    body.verts_post = _rectify_body(body.verts_pre, theta)

    adjacencies: list[Adjacency] = []
    for quad in reversed(partitioned.quads[:-1]):
        adj = find_adjacent(partitioned, quad)
        neighbor = partitioned.quads[adj.neighbor_id]
        if neighbor.verts_post is None:
            raise AdjacencyNotFoundError(
                f"neighbor {neighbor.id} of quad {quad.id} not rectified yet"
            )
        na = neighbor.verts_post[adj.neighbor_edge]
        nb = neighbor.verts_post[(adj.neighbor_edge + 1) % 4]
        generatrix = geo.lerp(na, nb, adj.neighbor_param)
        quad.verts_post = _rectify_ring(
            list(quad.verts_pre), adj.mutual_ring_index, generatrix, theta
        )
        quad.neighbor = (adj.neighbor_id, adj.neighbor_edge, adj.mutual_ring_index)
        adjacencies.append(adj)

    return RectifiedLayout(theta=theta, quads=list(partitioned.quads), adjacencies=adjacencies)


# ---------------------------------------------------------------------------
# layout validation
# ---------------------------------------------------------------------------

def validate_layout(layout: RectifiedLayout) -> LayoutReport:
    """Per-adjacency collinearity/gap residuals and pairwise overlap areas."""
    quads = {q.id: q for q in layout.quads}
    checks = []
    for adj in layout.adjacencies:
        quad = quads[adj.quad_id]
        neighbor = quads[adj.neighbor_id]
        a3 = quad.verts_post[3]
        a0 = quad.verts_post[0]
        na = neighbor.verts_post[adj.neighbor_edge]
        nb = neighbor.verts_post[(adj.neighbor_edge + 1) % 4]
        residual = max(
            geo.point_line_distance(a3, na, nb), geo.point_line_distance(a0, na, nb)
        )
        gap = geo.segment_segment_distance(a3, a0, na, nb)
        checks.append(AdjacencyCheck(adj.quad_id, adj.neighbor_id, residual, gap))

    overlaps = []
    rects = [(q.id, q.verts_post) for q in layout.quads]
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            poly = geo.clip_convex(rects[i][1], rects[j][1])
            area = geo.abs_area(poly) if len(poly) >= 3 else 0.0
            if area > 0.0:
                overlaps.append(OverlapCheck(rects[i][0], rects[j][0], area))
    return LayoutReport(adjacency_checks=checks, overlaps=overlaps)
