"""Geometry for yaw-only oriented boxes.

Every box here rotates about the vertical axis only, so a box is a vertical
prism: a rotated rectangle footprint extruded over a z interval.  That makes
several quantities exact that are awkward for general OBBs: footprint overlap
reduces to convex polygon clipping, the gap between two boxes decomposes into
a horizontal polygon distance plus a vertical interval gap, and intersection
volume is overlap area times z overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Vec2 = tuple[float, float]
Vec3 = tuple[float, float, float]
Polygon = tuple[Vec2, ...]

TWO_PI = 2.0 * math.pi


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    return (float(yaw) + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class OrientedBox:
    """3D box with rotation about the vertical axis only.

    center is the box midpoint in meters, size the full extents along the
    box's local x/y/z axes, yaw the rotation in radians (normalized to
    [-pi, pi) on construction).
    """

    center: Vec3
    size: Vec3
    yaw: float = 0.0

    def __post_init__(self) -> None:
        center = tuple(float(v) for v in self.center)
        size = tuple(float(v) for v in self.size)
        if len(center) != 3 or len(size) != 3:
            raise ValueError("center and size must be 3-vectors")
        if any(not (s > 0.0) for s in size):
            raise ValueError(f"box extents must be positive, got {size}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))

    @property
    def z_min(self) -> float:
        return self.center[2] - 0.5 * self.size[2]

    @property
    def z_max(self) -> float:
        return self.center[2] + 0.5 * self.size[2]

    @property
    def volume(self) -> float:
        sx, sy, sz = self.size
        return sx * sy * sz

    @property
    def footprint_area(self) -> float:
        return self.size[0] * self.size[1]

    def footprint(self) -> Polygon:
        """Floor-plane rectangle corners, counter-clockwise."""
        cx, cy, _ = self.center
        hx, hy = 0.5 * self.size[0], 0.5 * self.size[1]
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        local = ((-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy))
        return tuple((cx + lx * c - ly * s, cy + lx * s + ly * c) for lx, ly in local)

    def corners(self) -> tuple[Vec3, ...]:
        """8 corners: bottom ring counter-clockwise, then top ring."""
        foot = self.footprint()
        lo, hi = self.z_min, self.z_max
        return tuple((x, y, z) for z in (lo, hi) for x, y in foot)

    def contains_point(self, point: Vec3) -> bool:
        px, py, pz = point
        if not (self.z_min <= pz <= self.z_max):
            return False
        cx, cy, _ = self.center
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        dx, dy = px - cx, py - cy
        # rotate into the box frame
        lx = dx * c + dy * s
        ly = -dx * s + dy * c
        return abs(lx) <= 0.5 * self.size[0] and abs(ly) <= 0.5 * self.size[1]


def polygon_area(poly: Polygon) -> float:
    """Shoelace area; positive for counter-clockwise vertex order."""
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return 0.5 * acc


def clip_convex(subject: Polygon, clip: Polygon) -> Polygon:
    """Sutherland-Hodgman clip of a convex subject by a convex CCW polygon."""
    output = list(subject)
    n = len(clip)
    for i in range(n):
        if not output:
            return ()
        ax, ay = clip[i]
        bx, by = clip[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        inside = [ex * (y - ay) - ey * (x - ax) >= 0.0 for x, y in output]
        clipped: list[Vec2] = []
        m = len(output)
        for j in range(m):
            k = (j + 1) % m
            if inside[j]:
                clipped.append(output[j])
            if inside[j] != inside[k]:
                x1, y1 = output[j]
                x2, y2 = output[k]
                d1 = ex * (y1 - ay) - ey * (x1 - ax)
                d2 = ex * (y2 - ay) - ey * (x2 - ax)
                t = d1 / (d1 - d2)
                clipped.append((x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
        output = clipped
    return tuple(output)


def footprint_overlap_area(a: OrientedBox, b: OrientedBox) -> float:
    return abs(polygon_area(clip_convex(a.footprint(), b.footprint())))


def interval_gap(a_lo: float, a_hi: float, b_lo: float, b_hi: float) -> float:
    """Separation between two closed intervals; 0 when they touch or overlap."""
    return max(0.0, max(a_lo, b_lo) - min(a_hi, b_hi))


def _point_segment_distance(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    ex, ey = bx - ax, by - ay
    ln2 = ex * ex + ey * ey
    if ln2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * ex + (py - ay) * ey) / ln2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * ex), py - (ay + t * ey))


def convex_polygons_intersect(p: Polygon, q: Polygon) -> bool:
    """Separating-axis test for two convex polygons (touching counts)."""
    for poly in (p, q):
        n = len(poly)
        for i in range(n):
            ax, ay = poly[i]
            bx, by = poly[(i + 1) % n]
            nx, ny = ay - by, bx - ax
            p_dots = [nx * x + ny * y for x, y in p]
            q_dots = [nx * x + ny * y for x, y in q]
            if max(p_dots) < min(q_dots) or max(q_dots) < min(p_dots):
                return False
    return True


def polygon_distance(p: Polygon, q: Polygon) -> float:
    """Minimum distance between two convex polygons; 0 when they intersect."""
    if convex_polygons_intersect(p, q):
        return 0.0
    best = math.inf
    np_, nq = len(p), len(q)
    for i in range(np_):
        ax, ay = p[i]
        bx, by = p[(i + 1) % np_]
        for j in range(nq):
            cx, cy = q[j]
            dx, dy = q[(j + 1) % nq]
            # disjoint segments: closest approach is endpoint-to-segment
            best = min(
                best,
                _point_segment_distance(ax, ay, cx, cy, dx, dy),
                _point_segment_distance(bx, by, cx, cy, dx, dy),
                _point_segment_distance(cx, cy, ax, ay, bx, by),
                _point_segment_distance(dx, dy, ax, ay, bx, by),
            )
    return best


def box_gap(a: OrientedBox, b: OrientedBox) -> float:
    """Exact gap between two yaw-only boxes (0 when they touch or overlap).

    Both boxes are vertical prisms, so the squared distance splits into a
    horizontal term (footprint polygon distance) and a vertical term
    (z-interval gap).
    """
    dxy = polygon_distance(a.footprint(), b.footprint())
    dz = interval_gap(a.z_min, a.z_max, b.z_min, b.z_max)
    return math.hypot(dxy, dz)


def intersection_volume(a: OrientedBox, b: OrientedBox) -> float:
    """Exact intersection volume of two yaw-only boxes."""
    z_over = min(a.z_max, b.z_max) - max(a.z_min, b.z_min)
    if z_over <= 0.0:
        return 0.0
    return footprint_overlap_area(a, b) * z_over


def centroid_distance(a: OrientedBox, b: OrientedBox) -> float:
    return math.dist(a.center, b.center)


def points_in_footprint(poly: Polygon, points: np.ndarray) -> np.ndarray:
    """Vectorized containment of (N, 2) points in a convex CCW polygon."""
    pts = np.asarray(points, dtype=float)
    inside = np.ones(len(pts), dtype=bool)
    n = len(poly)
    for i in range(n):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        inside &= ex * (pts[:, 1] - ay) - ey * (pts[:, 0] - ax) >= 0.0
    return inside
