"""Deterministic SVG drawings of scenes and results.

Only the drawing uses floats. Output depends solely on the input objects,
so the same scene renders to byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence

from .plcore import GeometryError, PLMap

PROJECTIONS = ("xy", "xz", "yz", "iso")

STYLE = """
.flat{stroke:#d62728;stroke-width:3;fill:none}
.disk{stroke:#1f77b4;stroke-width:1.5;fill:none}
.sphere{stroke:#1f77b4;stroke-width:3;fill:none}
.plate{stroke:#7f7f7f;stroke-width:1;stroke-dasharray:4 3;fill:none}
.cycle1{stroke:#d62728;stroke-width:2;fill:none}
.cycle2{stroke:#2ca02c;stroke-width:2;fill:none}
.orig{stroke:#7f7f7f;stroke-width:1;fill:none;stroke-dasharray:3 2}
.mapA{stroke:#d62728;stroke-width:2;fill:none}
.mapB{stroke:#1f77b4;stroke-width:2;fill:none}
.arrow{stroke:#ff7f0e;stroke-width:1;fill:none;marker-end:url(#head)}
.curve{stroke:#bbbbbb;stroke-width:1;fill:none}
.Kp{stroke:#d62728;stroke-width:2.5;fill:none}
.Lp{stroke:#1f77b4;stroke-width:2;fill:none}
.pushed{stroke:#2ca02c;stroke-width:2;fill:none}
.circle{stroke:#333333;stroke-width:1;fill:none}
.plus{fill:#fde0c5;stroke:none}
.minus{fill:#d6e6f5;stroke:none}
.dot{fill:#000000}
"""


class Canvas:
    """Collects primitives in scene coordinates and writes an SVG."""

    def __init__(self, dim: int, projection: str | None = None, size: int = 480):
        if dim == 3 and projection is None:
            raise GeometryError("3-D scenes need a projection (xy, xz, yz or iso)")
        if dim not in (1, 2, 3):
            raise GeometryError(f"cannot render a {dim}-dimensional scene")
        if projection is not None and projection not in PROJECTIONS:
            raise GeometryError(f"unknown projection {projection!r}")
        self.dim = dim
        self.projection = projection
        self.size = size
        self.items: list[tuple[str, list[tuple[float, float]], str]] = []
        self.window: tuple[float, float, float, float] | None = None

    def project(self, p: Sequence) -> tuple[float, float]:
        q = [float(x) for x in p]
        if self.dim == 1:
            return q[0], 0.0
        if self.dim == 2:
            return q[0], q[1]
        x, y, z = q
        if self.projection == "xy":
            return x, y
        if self.projection == "xz":
            return x, z
        if self.projection == "yz":
            return y, z
        return (x - y) * math.sqrt(3) / 2, z + (x + y) / 2

    def add(self, kind: str, pts: Sequence[Sequence], cls: str, projected: bool = False) -> None:
        coords = [tuple(p) if projected else self.project(p) for p in pts]
        self.items.append((kind, coords, cls))

    def simplex(self, pts: Sequence[Sequence], cls: str) -> None:
        if len(pts) == 1:
            self.add("dot", pts, cls)
        else:
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    self.add("line", [pts[i], pts[j]], cls)

    def plmap(self, F: PLMap, cls: str) -> None:
        for piece in F.pieces():
            self.simplex(piece, cls)

    def _bounds(self) -> tuple[float, float, float, float]:
        if self.window is not None:
            return self.window
        xs = [x for _, pts, _ in self.items for x, _ in pts] or [0.0]
        ys = [y for _, pts, _ in self.items for _, y in pts] or [0.0]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
        return x0 - pad, x1 + pad, y0 - pad, y1 + pad

    def to_svg(self) -> str:
        x0, x1, y0, y1 = self._bounds()
        span = max(x1 - x0, y1 - y0, 1e-12)
        k = self.size / span
        w, h = (x1 - x0) * k, (y1 - y0) * k

        def tx(p):
            return f"{(p[0] - x0) * k:.3f},{(y1 - p[1]) * k:.3f}"

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
               f'viewBox="0 0 {w:.3f} {h:.3f}">',
               f"<style>{STYLE}</style>",
               '<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" '
               'orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#ff7f0e"/></marker></defs>',
               f'<clipPath id="view"><rect x="0" y="0" width="{w:.3f}" height="{h:.3f}"/></clipPath>',
               '<g clip-path="url(#view)">']
        for kind, pts, cls in self.items:
            if kind == "dot":
                out.append(f'<circle class="{cls} dot" cx="{tx(pts[0]).split(",")[0]}" '
                           f'cy="{tx(pts[0]).split(",")[1]}" r="3"/>')
            elif kind == "polygon":
                out.append(f'<polygon class="{cls}" points="{" ".join(tx(p) for p in pts)}"/>')
            else:
                tag_cls = "arrow" if kind == "arrow" else cls
                out.append(f'<polyline class="{tag_cls}" points="{" ".join(tx(p) for p in pts)}"/>')
        out.append("</g></svg>")
        return "\n".join(out) + "\n"


# --------------------------------------------------------------------------


def render_certify(payload: dict, projection: str | None = None) -> Canvas:
    from .certify import build_JA, build_plate

    scene = payload["scene"]
    c = Canvas(scene.n, projection)
    c.plmap(scene.disk_map, "disk")
    for piece in scene.sphere().pieces():
        c.simplex(piece, "sphere")
    for piece in build_plate(scene.k, scene.n, scene.nu).pieces():
        c.simplex(piece, "plate")
    c.plmap(build_JA(scene.k, scene.n, scene.nu), "flat")
    return c


def render_link(payload: dict, projection: str | None = None) -> Canvas:
    z1, z2 = payload["z1"], payload["z2"]
    c = Canvas(z1.n, projection)
    for piece in z1.pieces():
        c.simplex(piece, "cycle1")
    for piece in z2.pieces():
        c.simplex(piece, "cycle2")
    return c


def render_probe(payload: dict, projection: str | None = None) -> Canvas:
    F, G, rep = payload["F"], payload["G"], payload["report"]
    c = Canvas(F.n, projection)
    if rep.witness is None:
        c.plmap(F, "mapA")
        c.plmap(G, "mapB")
        return c
    Ft, Gt = rep.witness
    c.plmap(F, "orig")
    c.plmap(G, "orig")
    c.plmap(Ft, "mapA")
    c.plmap(Gt, "mapB")
    for orig, new in ((F, Ft), (G, Gt)):
        for v in orig.domain.vertices:
            if orig.images[v] != new.images[v]:
                c.add("arrow", [orig.images[v], new.images[v]], "arrow")
    return c


def render_refute(payload: dict, projection: str | None = None) -> Canvas:
    A, B, w = payload["A"], payload["B"], payload["witness"]
    c = Canvas(A.n, projection)
    for p in A.space.points:
        c.add("dot", [A.images[p]], "mapA")
    for p in B.space.points:
        c.add("dot", [B.images[p]], "mapB")
    c.plmap(w.f_tilde, "mapA")
    c.plmap(w.g_tilde, "mapB")
    for p in A.space.points:
        if A.images[p] != w.f_points[p]:
            c.add("arrow", [A.images[p], w.f_points[p]], "arrow")
    for p in B.space.points:
        if B.images[p] != w.g_points[p]:
            c.add("arrow", [B.images[p], w.g_points[p]], "arrow")
    return c


def _arc(cx: float, cy: float, r: float, t0: float, t1: float, steps: int = 96):
    """Counterclockwise arc from angle ``t0`` to ``t1``."""
    while t1 <= t0:
        t1 += 2 * math.pi
    return [(cx + r * math.cos(t0 + (t1 - t0) * i / steps),
             cy + r * math.sin(t0 + (t1 - t0) * i / steps)) for i in range(steps + 1)]


def render_sakai(payload: dict, projection: str | None = None) -> Canvas:
    """Disk of the first radius with its two sides, K', L', and any squeeze witness."""
    from .sakai2d import component_in_disk

    K, L, p, verdicts = payload["K"], payload["L"], payload["p"], payload["verdicts"]
    c = Canvas(2)
    a = verdicts[0].radius
    cx, cy, r = float(p[0]), float(p[1]), float(a)
    c.window = (cx - 1.1 * r, cx + 1.1 * r, cy - 1.1 * r, cy + 1.1 * r)
    Kp = component_in_disk(K, p, a)
    Lp = component_in_disk(L, p, a)
    k_hull = [tuple(map(float, q)) for q in Kp.rational_hull().vertices]
    if Kp.spanning:
        c.add("polygon", _arc(cx, cy, r, 0, 2 * math.pi), "minus", projected=True)
        t1 = math.atan2(k_hull[0][1] - cy, k_hull[0][0] - cx)
        t2 = math.atan2(k_hull[-1][1] - cy, k_hull[-1][0] - cx)
        c.add("polygon", k_hull + _arc(cx, cy, r, t2, t1)[1:-1], "plus", projected=True)
    c.add("polygon", _arc(cx, cy, r, 0, 2 * math.pi), "circle", projected=True)
    c.add("line", K.vertices, "curve")
    c.add("line", L.vertices, "curve")
    c.add("line", k_hull, "Kp", projected=True)
    c.add("line", Lp.rational_hull().vertices, "Lp")
    for w in payload["squeezes"][0][:1] if payload["squeezes"] else []:
        c.add("line", [w.original.images[i] for i in w.original.domain.vertices], "orig")
        c.add("line", [w.pushed.images[i] for i in w.pushed.domain.vertices], "pushed")
    c.add("dot", [p], "dot")
    return c


RENDERERS = {
    "certify": render_certify,
    "link": render_link,
    "probe": render_probe,
    "refute": render_refute,
    "sakai": render_sakai,
}


def render_svg(command: str, payload: dict, path: str, projection: str | None = None) -> None:
    if command not in RENDERERS:
        raise GeometryError(f"no drawing for the {command!r} command")
    svg = RENDERERS[command](payload, projection).to_svg()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
