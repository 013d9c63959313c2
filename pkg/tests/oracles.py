"""Independent reference computations used only by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(p, a, b) -> bool:
    return (orient(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_meet(a, b, c, d) -> bool:
    """Classic orientation test for closed planar segments."""
    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (_on_segment(c, a, b) or _on_segment(d, a, b)
            or _on_segment(a, c, d) or _on_segment(b, c, d))


def point_in_triangle(p, t) -> bool:
    s = [orient(t[0], t[1], p), orient(t[1], t[2], p), orient(t[2], t[0], p)]
    return not (min(s) < 0 < max(s))


def segment_meets_triangle(seg, tri) -> bool:
    """Closed segment vs closed (possibly degenerate) triangle in the plane."""
    a, b = seg
    if orient(*tri) == 0:
        return any(segments_meet(a, b, tri[i], tri[j]) for i, j in ((0, 1), (1, 2), (0, 2)))
    if point_in_triangle(a, tri) or point_in_triangle(b, tri):
        return True
    return any(segments_meet(a, b, tri[i], tri[(i + 1) % 3]) for i in range(3))


def gauss_linking(P: np.ndarray, Q: np.ndarray) -> float:
    """Gauss linking integral of two closed polygons (vertex arrays, not
    repeated at the end), using the closed-form solid angle per segment pair."""
    P = np.vstack([P, P[:1]])
    Q = np.vstack([Q, Q[:1]])
    total = 0.0
    for i in range(len(Q) - 1):
        for j in range(len(P) - 1):
            a = P[j] - Q[i]
            b = P[j] - Q[i + 1]
            c = P[j + 1] - Q[i + 1]
            d = P[j + 1] - Q[i]
            p = np.dot(a, np.cross(b, c))
            an, bn, cn, dn = (np.linalg.norm(x) for x in (a, b, c, d))
            d1 = an * bn * cn + np.dot(a, b) * cn + np.dot(b, c) * an + np.dot(c, a) * bn
            d2 = an * dn * cn + np.dot(a, d) * cn + np.dot(d, c) * an + np.dot(c, a) * dn
            total += np.arctan2(p, d1) + np.arctan2(p, d2)
    return float(total / (2 * np.pi))


def cheb_point_segment(q, a, b, samples: int = 2001) -> float:
    """Sampled Chebyshev distance from a point to a segment (upper estimate)."""
    t = np.linspace(0.0, 1.0, samples)
    pts = np.outer(1 - t, np.asarray(a, float)) + np.outer(t, np.asarray(b, float))
    return float(np.min(np.max(np.abs(pts - np.asarray(q, float)), axis=1)))


def ray_parity_side(q, arc_pts, center, radius, plus_arc_steps: int = 4000) -> str:
    """Side of ``q`` relative to a spanning arc, by point-in-polygon on the
    region bounded by the arc and the counterclockwise circle arc from its
    end back to its start (which is the plus side)."""
    e1, e2 = arc_pts[0], arc_pts[-1]
    t1 = math.atan2(e1[1] - center[1], e1[0] - center[0])
    t2 = math.atan2(e2[1] - center[1], e2[0] - center[0])
    while t1 <= t2:
        t1 += 2 * math.pi
    ring = [tuple(map(float, p)) for p in arc_pts]
    for i in range(1, plus_arc_steps):
        t = t2 + (t1 - t2) * i / plus_arc_steps
        ring.append((center[0] + radius * math.cos(t), center[1] + radius * math.sin(t)))
    x, y = map(float, q)
    inside = False
    for i in range(len(ring)):
        (x0, y0), (x1, y1) = ring[i], ring[(i + 1) % len(ring)]
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xc > x:
                inside = not inside
    return "plus" if inside else "minus"


def frac_points(rng, count, dim, den=8, lo=-8, hi=8):
    return [tuple(Fraction(int(v), den) for v in rng.integers(lo, hi + 1, size=dim))
            for _ in range(count)]
