"""Planar geometry primitives shared by the pipeline stages.

Conventions used throughout the package:

- rings are open vertex lists (no duplicated closing vertex), y-up meters;
- a clockwise ring has a negative shoelace sum;
- walking a clockwise ring, the interior lies to the right of travel.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

Point = tuple[float, float]


# ---------------------------------------------------------------------------
# vector basics
# ---------------------------------------------------------------------------

def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def scale(a: Point, k: float) -> Point:
    return (a[0] * k, a[1] * k)


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a: Point) -> Point:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n)


def lerp(a: Point, b: Point, t: float) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def rotate(p: Point, theta: float) -> Point:
    c, s = math.cos(theta), math.sin(theta)
    return (p[0] * c - p[1] * s, p[0] * s + p[1] * c)


# ---------------------------------------------------------------------------
# ring measures
# ---------------------------------------------------------------------------

def shoelace_sum(ring: Sequence[Point]) -> float:
    """Twice the signed area; negative for clockwise rings (y-up)."""
    total = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


def signed_area(ring: Sequence[Point]) -> float:
    return 0.5 * shoelace_sum(ring)


def abs_area(ring: Sequence[Point]) -> float:
    return abs(signed_area(ring))


def is_clockwise(ring: Sequence[Point]) -> bool:
    return shoelace_sum(ring) < 0.0


def ring_edges(ring: Sequence[Point]) -> Iterator[tuple[Point, Point]]:
    n = len(ring)
    for i in range(n):
        yield ring[i], ring[(i + 1) % n]


def perimeter(ring: Sequence[Point]) -> float:
    return sum(dist(a, b) for a, b in ring_edges(ring))


def centroid(ring: Sequence[Point]) -> Point:
    n = len(ring)
    return (sum(p[0] for p in ring) / n, sum(p[1] for p in ring) / n)


def interior_angle_deg(prev: Point, vertex: Point, nxt: Point) -> float:
    """Interior angle at a vertex of a clockwise ring, in degrees (0, 360]."""
    u = sub(vertex, prev)
    w = sub(nxt, vertex)
    turn = math.atan2(cross(u, w), dot(u, w))
    return 180.0 + math.degrees(turn)


def interior_angles_deg(ring: Sequence[Point]) -> list[float]:
    n = len(ring)
    return [
        interior_angle_deg(ring[(i - 1) % n], ring[i], ring[(i + 1) % n])
        for i in range(n)
    ]


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Proper or touching intersection of open segments ab and cd."""
    d1 = cross(sub(b, a), sub(c, a))
    d2 = cross(sub(b, a), sub(d, a))
    d3 = cross(sub(d, c), sub(a, c))
    d4 = cross(sub(d, c), sub(b, c))
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def ring_is_simple(ring: Sequence[Point]) -> bool:
    """Brute-force non-self-intersection test; adequate for footprint sizes."""
    n = len(ring)
    if n < 3:
        return False
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if dist(a, b) == 0.0:
            return False
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            c, d = ring[j], ring[(j + 1) % n]
            if _segments_cross(a, b, c, d):
                return False
    return True


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return dist(p, a)
    t = dot(sub(p, a), ab) / denom
    t = min(1.0, max(0.0, t))
    return dist(p, lerp(a, b, t))


def point_line_distance(p: Point, a: Point, b: Point) -> float:
    """Distance from p to the infinite line through a and b."""
    ab = sub(b, a)
    n = norm(ab)
    if n == 0.0:
        return dist(p, a)
    return abs(cross(ab, sub(p, a))) / n


def segment_param(p: Point, a: Point, b: Point) -> float:
    """Parametric position of p projected onto segment ab (0 at a, 1 at b)."""
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return 0.0
    return dot(sub(p, a), ab) / denom


def segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> float:
    if _segments_cross(a, b, c, d):
        return 0.0
    return min(
        point_segment_distance(a, c, d),
        point_segment_distance(b, c, d),
        point_segment_distance(c, a, b),
        point_segment_distance(d, a, b),
    )


def point_in_ring(p: Point, ring: Sequence[Point], boundary_tol: float = 1e-9) -> bool:
    """Ray-casting containment; points within boundary_tol of an edge count in."""
    for a, b in ring_edges(ring):
        if point_segment_distance(p, a, b) <= boundary_tol:
            return True
    inside = False
    x, y = p
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > y) != (yj > y):
            x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < x_cross:
                inside = not inside
        j = i
    return inside


# ---------------------------------------------------------------------------
# ray casting and clipping
# ---------------------------------------------------------------------------

def ray_segment_intersection(
    origin: Point, direction: Point, a: Point, b: Point
) -> tuple[float, float] | None:
    """Intersect origin + t*direction (t>0) with segment ab.

    Returns (t, s) with s the parameter along ab, or None when parallel
    or outside the segment. Collinear overlaps are treated as misses.
    """
    ab = sub(b, a)
    denom = cross(direction, ab)
    seg_len = norm(ab)
    if seg_len == 0.0 or abs(denom) <= 1e-12 * seg_len * norm(direction):
        return None
    ao = sub(a, origin)
    t = cross(ao, ab) / denom
    s = cross(ao, direction) / denom
    if s < -1e-9 or s > 1.0 + 1e-9:
        return None
    return t, min(1.0, max(0.0, s))


def clip_convex(subject: Sequence[Point], clip: Sequence[Point]) -> list[Point]:
    """Sutherland-Hodgman clip of subject by a convex clockwise ring."""
    output = list(subject)
    n = len(clip)
    for i in range(n):
        if not output:
            return []
        a = clip[i]
        b = clip[(i + 1) % n]
        edge = sub(b, a)
        current = output
        output = []
        prev = current[-1]
        prev_in = cross(edge, sub(prev, a)) <= 1e-12
        for pt in current:
            pt_in = cross(edge, sub(pt, a)) <= 1e-12
            if pt_in:
                if not prev_in:
                    output.append(_line_intersection(prev, pt, a, b))
                output.append(pt)
            elif prev_in:
                output.append(_line_intersection(prev, pt, a, b))
            prev, prev_in = pt, pt_in
    return output


def _line_intersection(p1: Point, p2: Point, a: Point, b: Point) -> Point:
    d1 = sub(p2, p1)
    d2 = sub(b, a)
    denom = cross(d1, d2)
    if denom == 0.0:
        return p1
    t = cross(sub(a, p1), d2) / denom
    return lerp(p1, p2, t)


def span_along(ring: Sequence[Point], direction: Point) -> float:
    """Extent of a ring projected onto a unit direction."""
    values = [dot(p, direction) for p in ring]
    return max(values) - min(values)
