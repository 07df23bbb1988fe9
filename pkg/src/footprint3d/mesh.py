"""Indexed triangle meshes and watertight primitive construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Vec3 = tuple[float, float, float]

_KEY_DECIMALS = 9


def v3(x: float, y: float, z: float) -> Vec3:
    return (float(x), float(y), float(z))


def add3(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub3(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale3(a: Vec3, k: float) -> Vec3:
    return (a[0] * k, a[1] * k, a[2] * k)


def dot3(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross3(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm3(a: Vec3) -> float:
    return math.sqrt(dot3(a, a))


def unit3(a: Vec3) -> Vec3:
    n = norm3(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


class MeshBuilder:
    """Accumulates triangles, deduplicating vertices by rounded position."""

    def __init__(self) -> None:
        self.vertices: list[Vec3] = []
        self.triangles: list[tuple[int, int, int]] = []
        self._index: dict[tuple[float, float, float], int] = {}

    def vertex(self, p: Vec3) -> int:
        key = (
            round(p[0], _KEY_DECIMALS),
            round(p[1], _KEY_DECIMALS),
            round(p[2], _KEY_DECIMALS),
        )
        idx = self._index.get(key)
        if idx is None:
            idx = len(self.vertices)
            self.vertices.append(p)
            self._index[key] = idx
        return idx

    def tri(self, a: Vec3, b: Vec3, c: Vec3) -> None:
        ia, ib, ic = self.vertex(a), self.vertex(b), self.vertex(c)
        if ia == ib or ib == ic or ic == ia:
            return
        self.triangles.append((ia, ib, ic))

    def quad(self, a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> None:
        self.tri(a, b, c)
        self.tri(a, c, d)

    def fan(self, center: Vec3, ring: list[Vec3]) -> None:
        n = len(ring)
        for i in range(n):
            self.tri(center, ring[i], ring[(i + 1) % n])


def signed_volume(vertices: list[Vec3], triangles: list[tuple[int, int, int]]) -> float:
    """Divergence-theorem volume; positive for outward-wound closed meshes."""
    total = 0.0
    for a, b, c in triangles:
        total += dot3(vertices[a], cross3(vertices[b], vertices[c]))
    return total / 6.0


def flip_if_inverted(builder: MeshBuilder) -> None:
    if signed_volume(builder.vertices, builder.triangles) < 0.0:
        builder.triangles = [(a, c, b) for a, b, c in builder.triangles]


def add_prism(builder: MeshBuilder, base_ring: list[Vec3], offset: Vec3) -> None:
    """Closed prism from a planar convex base ring and a translation vector.

    Winding is made consistent internally; callers flip to outward once per
    solid via flip_if_inverted.
    """
    n = len(base_ring)
    top = [add3(p, offset) for p in base_ring]
    for i in range(1, n - 1):
        builder.tri(base_ring[0], base_ring[i], base_ring[i + 1])
    for i in range(1, n - 1):
        builder.tri(top[0], top[i + 1], top[i])
    for i in range(n):
        j = (i + 1) % n
        builder.tri(base_ring[i], top[i], top[j])
        builder.tri(base_ring[i], top[j], base_ring[j])


def mesh_defects(vertices: list[Vec3], triangles: list[tuple[int, int, int]]) -> list[str]:
    """Watertightness defects: every directed edge must appear exactly once,
    with its reverse present (each undirected edge bounds two triangles)."""
    directed: dict[tuple[int, int], int] = {}
    defects: list[str] = []
    for a, b, c in triangles:
        for e in ((a, b), (b, c), (c, a)):
            directed[e] = directed.get(e, 0) + 1
    for (a, b), count in directed.items():
        if count != 1:
            defects.append(f"directed edge {a}->{b} used {count} times")
        elif (b, a) not in directed:
            defects.append(f"edge {a}->{b} has no opposite triangle")
    return defects


def is_watertight(vertices: list[Vec3], triangles: list[tuple[int, int, int]]) -> bool:
    return not mesh_defects(vertices, triangles)
