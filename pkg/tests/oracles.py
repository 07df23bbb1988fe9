"""Independent oracle implementations used to freeze expected values.

Everything here is written from first principles, separate from the package
code paths it checks: shoelace sums, cross-product turn labels, cyclic run
counting, ray casting, a brute-force minimal rectangle cover over the vertex
grid, a standalone convex clipper, and a mesh edge-pairing check.
"""

from __future__ import annotations

import math
from collections import Counter


def shoelace(ring) -> float:
    """Twice the signed area."""
    total = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


def ring_area(ring) -> float:
    return abs(shoelace(ring)) / 2.0


def turn_labels(ring) -> str:
    """R/L per vertex from the raw cross-product sign (clockwise ring)."""
    n = len(ring)
    out = []
    for i in range(n):
        px, py = ring[(i - 1) % n]
        vx, vy = ring[i]
        nx, ny = ring[(i + 1) % n]
        ux, uy = vx - px, vy - py
        wx, wy = nx - vx, ny - vy
        c = ux * wy - uy * wx
        out.append("L" if c > 0 else "R")
    return "".join(out)


def cyclic_r_runs(turns: str) -> list[int]:
    """Lengths of maximal runs of R between L vertices, cyclically."""
    if "L" not in turns:
        return []
    start = turns.index("L")
    rotated = turns[start:] + turns[:start]
    return [len(chunk) for chunk in rotated.split("L") if chunk]


def first_ray_hit(origin, direction, ring):
    """Nearest transverse boundary intersection of a ray from a vertex."""
    n = len(ring)
    best_t, best_pt = None, None
    ox, oy = origin
    dx, dy = direction
    for j in range(n):
        ax, ay = ring[j]
        bx, by = ring[(j + 1) % n]
        ex, ey = bx - ax, by - ay
        denom = dx * ey - dy * ex
        if abs(denom) < 1e-12:
            continue
        t = ((ax - ox) * ey - (ay - oy) * ex) / denom
        s = ((ax - ox) * dy - (ay - oy) * dx) / denom
        if t > 1e-9 and -1e-9 <= s <= 1 + 1e-9:
            if best_t is None or t < best_t:
                best_t, best_pt = t, (ox + dx * t, oy + dy * t)
    return best_pt


def point_in_polygon(p, ring) -> bool:
    x, y = p
    inside = False
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > y) != (yj > y) and x < (xj - xi) * (y - yi) / (yj - yi) + xi:
            inside = not inside
        j = i
    return inside


# ---------------------------------------------------------------------------
# brute-force rectangle cover over the vertex grid
# ---------------------------------------------------------------------------

def _grid(ring):
    xs = sorted({p[0] for p in ring})
    ys = sorted({p[1] for p in ring})
    cells = set()
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            cx = (xs[i] + xs[i + 1]) / 2.0
            cy = (ys[j] + ys[j + 1]) / 2.0
            if point_in_polygon((cx, cy), ring):
                cells.add((i, j))
    return xs, ys, cells


def _rect_blocks(xs, ys, cells):
    """All grid-aligned rectangles made only of interior cells."""
    blocks = []
    for i0 in range(len(xs) - 1):
        for j0 in range(len(ys) - 1):
            for i1 in range(i0, len(xs) - 1):
                for j1 in range(j0, len(ys) - 1):
                    block = {
                        (i, j) for i in range(i0, i1 + 1) for j in range(j0, j1 + 1)
                    }
                    if block <= cells:
                        blocks.append(frozenset(block))
    return blocks


def min_rectangle_cover(ring) -> int:
    """Size of the smallest exact cover of the cell grid by rectangles."""
    xs, ys, cells = _grid(ring)
    blocks = _rect_blocks(xs, ys, cells)

    def search(remaining, budget):
        if not remaining:
            return True
        if budget == 0:
            return False
        target = min(remaining)
        for block in blocks:
            if target in block and block <= remaining:
                if search(remaining - block, budget - 1):
                    return True
        return False

    for k in range(1, len(cells) + 1):
        if search(frozenset(cells), k):
            return k
    raise AssertionError("no rectangle cover found")


# ---------------------------------------------------------------------------
# standalone convex clipping
# ---------------------------------------------------------------------------

def clip_by_convex(subject, clip_cw):
    """Sutherland-Hodgman against a clockwise convex clip ring."""
    output = list(subject)
    n = len(clip_cw)
    for i in range(n):
        if not output:
            return []
        ax, ay = clip_cw[i]
        bx, by = clip_cw[(i + 1) % n]
        ex, ey = bx - ax, by - ay

        def inside(p):
            return ex * (p[1] - ay) - ey * (p[0] - ax) <= 1e-12

        def intersect(p, q):
            pqx, pqy = q[0] - p[0], q[1] - p[1]
            denom = pqx * ey - pqy * ex
            t = ((ax - p[0]) * ey - (ay - p[1]) * ex) / denom
            return (p[0] + pqx * t, p[1] + pqy * t)

        result = []
        prev = output[-1]
        for pt in output:
            if inside(pt):
                if not inside(prev):
                    result.append(intersect(prev, pt))
                result.append(pt)
            elif inside(prev):
                result.append(intersect(prev, pt))
            prev = pt
        output = result
    return output


def overlap_area(ring_a, ring_b) -> float:
    poly = clip_by_convex(ring_a, ring_b)
    return ring_area(poly) if len(poly) >= 3 else 0.0


# ---------------------------------------------------------------------------
# mesh checks
# ---------------------------------------------------------------------------

def mesh_is_watertight(triangles) -> bool:
    """Every undirected edge bounds exactly two triangles, once per direction."""
    directed = Counter()
    for a, b, c in triangles:
        directed.update([(a, b), (b, c), (c, a)])
    undirected = Counter()
    for (a, b), count in directed.items():
        if count != 1:
            return False
        undirected[frozenset((a, b))] += 1
    return all(count == 2 for count in undirected.values())


def mesh_volume(vertices, triangles) -> float:
    total = 0.0
    for a, b, c in triangles:
        ax, ay, az = vertices[a]
        bx, by, bz = vertices[b]
        cx, cy, cz = vertices[c]
        total += ax * (by * cz - bz * cy) + ay * (bz * cx - bx * cz) + az * (bx * cy - by * cx)
    return total / 6.0


def slope_area(plan_area: float, slope_rad: float) -> float:
    return plan_area / math.cos(slope_rad)
