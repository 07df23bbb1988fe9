"""Debug SVG renderings of partition and rectification stages."""

from __future__ import annotations

from . import geometry as geo
from .geometry import Point
from .partition import PartitionResult, all_candidate_dls, rl_expression
from .rectify import RectifiedLayout


def _viewbox(points: list[Point], pad: float = 1.0) -> tuple[float, float, float, float]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (
        min(xs) - pad,
        min(ys) - pad,
        (max(xs) - min(xs)) + 2 * pad,
        (max(ys) - min(ys)) + 2 * pad,
    )


def _path(ring: list[Point]) -> str:
    coords = " L ".join(f"{x:.3f} {-y:.3f}" for x, y in ring)
    return f"M {coords} Z"


def _svg(width: float, height: float, viewbox: str, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="{viewbox}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def partition_svg(ring: list[Point], result: PartitionResult) -> str:
    """Polygon with R/L vertex labels, candidate DLs dotted, chosen solid."""
    x0, y0, w, h = _viewbox(ring)
    scale = 600.0 / max(w, h)
    view = f"{x0:.3f} {-(y0 + h):.3f} {w:.3f} {h:.3f}"
    body = [f'<path d="{_path(ring)}" fill="#eef" stroke="#336" stroke-width="{2/scale:.4f}"/>']

    turns = rl_expression(ring).turns
    for i, (x, y) in enumerate(ring):
        body.append(
            f'<text x="{x:.3f}" y="{-y:.3f}" font-size="{12/scale:.4f}" '
            f'fill="#333">{turns[i]}{i}</text>'
        )
    for dl in all_candidate_dls(ring):
        ox, oy = ring[dl.origin]
        ex, ey = dl.endpoint
        body.append(
            f'<line x1="{ox:.3f}" y1="{-oy:.3f}" x2="{ex:.3f}" y2="{-ey:.3f}" '
            f'stroke="#999" stroke-width="{1/scale:.4f}" '
            f'stroke-dasharray="{4/scale:.4f}"/>'
        )
    for quad in result.quads[:-1]:
        a, b = quad.verts_pre[3], quad.verts_pre[0]
        body.append(
            f'<line x1="{a[0]:.3f}" y1="{-a[1]:.3f}" x2="{b[0]:.3f}" y2="{-b[1]:.3f}" '
            f'stroke="#c33" stroke-width="{2/scale:.4f}"/>'
        )
    return _svg(600, 600 * h / w if w else 600, view, body)


def rectified_svg(layout: RectifiedLayout) -> str:
    """Pre-rectification rings in grey under post rings in black, with
    adjacency arrows from branch to neighbor centers."""
    points = [p for q in layout.quads for p in q.verts_pre]
    x0, y0, w, h = _viewbox(points)
    view = f"{x0:.3f} {-(y0 + h):.3f} {w:.3f} {h:.3f}"
    scale = 600.0 / max(w, h)
    body = []
    for quad in layout.quads:
        body.append(
            f'<path d="{_path(quad.verts_pre)}" fill="none" stroke="#aaa" '
            f'stroke-width="{1.5/scale:.4f}"/>'
        )
    for quad in layout.quads:
        body.append(
            f'<path d="{_path(quad.verts_post)}" fill="none" stroke="#000" '
            f'stroke-width="{1.5/scale:.4f}"/>'
        )
    quads = {q.id: q for q in layout.quads}
    for adj in layout.adjacencies:
        a = geo.centroid(quads[adj.quad_id].verts_post)
        b = geo.centroid(quads[adj.neighbor_id].verts_post)
        body.append(
            f'<line x1="{a[0]:.3f}" y1="{-a[1]:.3f}" x2="{b[0]:.3f}" y2="{-b[1]:.3f}" '
            f'stroke="#3a3" stroke-width="{1/scale:.4f}" marker-end="url(#tip)"/>'
        )
    defs = (
        '<defs><marker id="tip" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#3a3"/></marker></defs>'
    )
    return _svg(600, 600 * h / w if w else 600, view, [defs, *body])
