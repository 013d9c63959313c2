"""Two-dimensional transversality of curves through a point, disk by disk.

Curves are polylines with rational vertices; the disk around ``p`` is the
open Euclidean disk of radius ``a``. Where a polyline leaves the disk the
crossing parameter is a quadratic irrational; it is kept symbolic
(``QuadRoot``) and compared exactly against rationals, and enclosed in
rational intervals whenever a sign depends on two such roots at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exact import to_fraction
from .plcore import GeometryError, PLMap, Point, SimplicialComplex, cheb_dist, cheb_norm


class SakaiError(GeometryError):
    pass


# --------------------------------------------------------------------------
# Quadratic irrationals


def _sqrt_exact(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QuadRoot:
    """The number ``(-b + sgn * sqrt(disc)) / (2 * a)`` with ``a > 0``, ``disc > 0``
    not a rational square."""

    a: Fraction
    b: Fraction
    disc: Fraction
    sgn: int

    def cmp(self, q: Fraction) -> int:
        """Sign of ``self - q``, exact."""
        r = 2 * self.a * q + self.b  # compare sgn*sqrt(disc) with r
        if self.sgn > 0:
            if r < 0:
                return 1
            return 1 if self.disc > r * r else -1
        if r > 0:
            return -1
        return -1 if self.disc > r * r else 1

    def enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        u, v = self.disc.numerator, self.disc.denominator
        scale = 1 << bits
        r = math.isqrt(u * v * scale * scale)
        lo_s, hi_s = Fraction(r, scale * v), Fraction(r + 1, scale * v)
        if self.sgn < 0:
            lo_s, hi_s = -hi_s, -lo_s
        two_a = 2 * self.a
        return (lo_s - self.b) / two_a, (hi_s - self.b) / two_a

    def __float__(self) -> float:
        return (-float(self.b) + self.sgn * math.sqrt(float(self.disc))) / (2 * float(self.a))


Param = Union[Fraction, QuadRoot]


def _cmp(x: Param, y: Param) -> int:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x > y) - (x < y)
    if isinstance(x, QuadRoot) and isinstance(y, Fraction):
        return x.cmp(y)
    if isinstance(x, Fraction) and isinstance(y, QuadRoot):
        return -y.cmp(x)
    if x == y:
        return 0
    bits = 16
    while True:
        lx, hx = x.enclose(bits)
        ly, hy = y.enclose(bits)
        if hx < ly:
            return -1
        if hy < lx:
            return 1
        bits *= 2
        if bits > 1 << 14:
            raise SakaiError("could not separate two crossing parameters")


def _interval(x: Param, bits: int) -> tuple[Fraction, Fraction]:
    return (x, x) if isinstance(x, Fraction) else x.enclose(bits)


def _rational_between(x: Param, y: Param) -> Fraction:
    """A rational strictly between ``x < y``."""
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x + y) / 2
    bits = 16
    while True:
        hx = _interval(x, bits)[1]
        ly = _interval(y, bits)[0]
        if hx < ly:
            return (hx + ly) / 2
        bits *= 2
        if bits > 1 << 14:
            raise SakaiError("crossing parameters too close to separate")


# --------------------------------------------------------------------------
# Polylines


def _cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(tuple(to_fraction(c) for c in v) for v in self.vertices)
        if len(verts) < 2:
            raise SakaiError("a polyline needs at least two vertices")
        for v in verts:
            if len(v) != 2:
                raise SakaiError("polyline vertices must be planar")
        for u, v in zip(verts, verts[1:]):
            if u == v:
                raise SakaiError(f"consecutive vertices coincide at {tuple(map(float, u))}")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def of(cls, pts: Sequence[Sequence]) -> "Polyline":
        return cls(tuple(tuple(to_fraction(c) for c in p) for p in pts))

    def segment(self, j: int) -> tuple[Point, Point]:
        return self.vertices[j], self.vertices[j + 1]

    @property
    def nseg(self) -> int:
        return len(self.vertices) - 1

    def locate(self, q: Point) -> tuple[int, Fraction] | None:
        """First segment containing ``q`` and the parameter along it."""
        for j in range(self.nseg):
            a, b = self.segment(j)
            d, w = _sub(b, a), _sub(q, a)
            if _cross(d, w) != 0:
                continue
            t = _dot(w, d) / _dot(d, d)
            if 0 <= t <= 1:
                return j, t
        return None

    def as_plmap(self) -> PLMap:
        n = len(self.vertices)
        cx = SimplicialComplex.from_simplices([(i, i + 1) for i in range(n - 1)])
        return PLMap(cx, dict(enumerate(self.vertices)))


def _at(a: Point, b: Point, t: Fraction) -> Point:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _seg_params(P0, P1, Q0, Q1) -> list[Fraction]:
    """Parameters on ``P0P1`` where it meets ``Q0Q1`` (overlap gives its ends)."""
    d, e, w = _sub(P1, P0), _sub(Q1, Q0), _sub(Q0, P0)
    den = _cross(d, e)
    if den != 0:
        t = _cross(w, e) / den
        u = _cross(w, d) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            return [t]
        return []
    if _cross(w, d) != 0:
        return []
    dd = _dot(d, d)
    t0, t1 = _dot(w, d) / dd, _dot(_sub(Q1, P0), d) / dd
    lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
    if lo > hi:
        return []
    return [lo] if lo == hi else [lo, hi]


def oscillating_y(x: float) -> float:
    """``exp(-1/x^2) sin(1/x)`` for ``x > 0``, else 0 (double precision)."""
    if x <= 0:
        return 0.0
    return math.exp(-1.0 / (x * x)) * math.sin(1.0 / x)


def oscillating_curve(x_max, step) -> Polyline:
    """Graph of ``y = exp(-1/x^2) sin(1/x)`` for ``x > 0`` and ``y = 0`` otherwise,
    sampled at ``x = i * step`` on ``[-x_max, x_max]``.

    ``y`` is evaluated in double precision and then embedded exactly.
    Below ``x ~ 0.037`` the factor underflows and the samples are exactly 0.
    """
    x_max, step = to_fraction(x_max), to_fraction(step)
    if not 0 < step < x_max:
        raise SakaiError("need 0 < step < x_max")
    n = math.floor(x_max / step)
    pts = []
    for i in range(-n, n + 1):
        x = i * step
        pts.append((x, Fraction(oscillating_y(float(x))) if x > 0 else Fraction(0)))
    return Polyline(tuple(pts))


# --------------------------------------------------------------------------
# Components inside a disk


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: Fraction

    def inside(self, q: Point) -> bool:
        w = _sub(q, self.center)
        return _dot(w, w) < self.radius ** 2

    def roots(self, a: Point, b: Point) -> tuple[Param, Param] | None:
        """Parameters where the line through ``a, b`` meets the circle."""
        d, w = _sub(b, a), _sub(a, self.center)
        A = _dot(d, d)
        B = 2 * _dot(w, d)
        C = _dot(w, w) - self.radius ** 2
        disc = B * B - 4 * A * C
        if disc < 0:
            return None
        r = _sqrt_exact(disc)
        if r is not None:
            return (-B - r) / (2 * A), (-B + r) / (2 * A)
        return QuadRoot(A, B, disc, -1), QuadRoot(A, B, disc, 1)

    def rational_point(self, t: Fraction) -> Point:
        den = 1 + t * t
        return (self.center[0] + self.radius * (1 - t * t) / den,
                self.center[1] + self.radius * 2 * t / den)


@dataclass(frozen=True)
class DiskArc:
    """The component through ``p`` of a polyline inside a disk.

    Covers segments ``first..last`` of ``curve``, starting at ``start`` on
    segment ``first`` and ending at ``end`` on segment ``last``. ``start_hits``
    / ``end_hits`` say whether that end lies on the circle.
    """

    curve: Polyline
    disk: Disk
    first: int
    start: Param
    start_hits: bool
    last: int
    end: Param
    end_hits: bool

    @property
    def spanning(self) -> bool:
        return self.start_hits and self.end_hits

    def pieces(self) -> list[tuple[Point, Point, Param, Param]]:
        out = []
        for j in range(self.first, self.last + 1):
            a, b = self.curve.segment(j)
            lo = self.start if j == self.first else Fraction(0)
            hi = self.end if j == self.last else Fraction(1)
            out.append((a, b, lo, hi))
        return out

    def inner_vertices(self) -> list[Point]:
        return [self.curve.vertices[j] for j in range(self.first + 1, self.last + 1)]

    def rational_hull(self, bits: int = 48) -> Polyline:
        """Rational polyline containing the arc, ends pushed out by < 2**-bits
        in parameter (never past the original vertices)."""
        a0, b0 = self.curve.segment(self.first)
        lo = self.start if isinstance(self.start, Fraction) else \
            max(Fraction(0), self.start.enclose(bits)[0])
        a1, b1 = self.curve.segment(self.last)
        hi = self.end if isinstance(self.end, Fraction) else \
            min(Fraction(1), self.end.enclose(bits)[1])
        if self.first == self.last:
            return Polyline((_at(a0, b0, lo), _at(a0, b0, hi)))
        pts = [_at(a0, b0, lo)] + self.inner_vertices() + [_at(a1, b1, hi)]
        # drop zero-length ends (arc starting exactly at a vertex)
        clean = [pts[0]]
        for q in pts[1:]:
            if q != clean[-1]:
                clean.append(q)
        return Polyline(tuple(clean))


def component_in_disk(C: Polyline, p: Sequence, a) -> DiskArc:
    """Maximal sub-arc of ``C`` through ``p`` inside the open disk ``D(p, a)``."""
    p = tuple(to_fraction(x) for x in p)
    a = to_fraction(a)
    if a <= 0:
        raise SakaiError("radius must be positive")
    loc = C.locate(p)
    if loc is None:
        raise SakaiError(f"point {tuple(map(float, p))} is not on the curve")
    disk = Disk(p, a)
    j0, _ = loc
    # forward
    j = j0
    while True:
        a_, b_ = C.segment(j)
        if disk.inside(b_):
            if j == C.nseg - 1:
                last, end, end_hits = j, Fraction(1), False
                break
            j += 1
            continue
        last, end, end_hits = j, disk.roots(a_, b_)[1], True
        break
    # backward
    j = j0
    while True:
        a_, b_ = C.segment(j)
        if disk.inside(a_):
            if j == 0:
                first, start, start_hits = 0, Fraction(0), False
                break
            j -= 1
            continue
        first, start, start_hits = j, disk.roots(a_, b_)[0], True
        break
    return DiskArc(C, disk, first, start, start_hits, last, end, end_hits)


# --------------------------------------------------------------------------
# Side classification


PLUS, MINUS, ON = "plus", "minus", "on"


def _candidate_ts():
    yield Fraction(0)
    k = 1
    while True:
        for num in range(1, 2 * k + 1):
            t = Fraction(num, k)
            yield t
            yield -t
        k += 1


class SideClassifier:
    """Splits the disk minus a spanning arc ``K'`` into ``plus`` and ``minus``.

    ``plus`` is the part to the left of ``K'`` in its traversal direction.
    A query point is joined to a rational point ``R`` of the circle by a
    straight segment; the parity of its crossings with ``K'`` says whether
    the query is on ``R``'s side. ``R`` is on the plus side exactly when
    (end, R, start) is counterclockwise.
    """

    def __init__(self, arc: DiskArc):
        if not arc.spanning:
            raise SakaiError("K' does not span the disk")
        self.arc = arc
        self.disk = arc.disk
        self.segments = [arc.curve.segment(j) for j in range(arc.first, arc.last + 1)]
        self.joints = set(arc.inner_vertices())
        self._refs: list[tuple[Point, str]] = []
        self._ts = _candidate_ts()

    def _ref_side(self, R: Point) -> str | None:
        arc = self.arc
        P1, Q1 = arc.curve.segment(arc.first)
        P2, Q2 = arc.curve.segment(arc.last)
        a, b = _sub(R, P2), _sub(Q2, P2)
        c, d = _sub(P1, P2), _sub(Q1, P1)
        k0 = _cross(a, c)
        k1 = _cross(a, d)
        k2 = -(_cross(a, b) + _cross(b, c))
        k3 = -_cross(b, d)
        bits = 24
        while bits <= 1 << 14:
            l1, h1 = _interval(arc.start, bits)
            l2, h2 = _interval(arc.end, bits)
            vals = [k0 + k1 * s1 + k2 * s2 + k3 * s1 * s2 for s1 in (l1, h1) for s2 in (l2, h2)]
            if all(v > 0 for v in vals):
                return PLUS
            if all(v < 0 for v in vals):
                return MINUS
            if isinstance(arc.start, Fraction) and isinstance(arc.end, Fraction):
                return None  # R coincides with an end of K'
            bits *= 2
        return None

    def _reference(self, i: int) -> tuple[Point, str]:
        while len(self._refs) <= i:
            R = self.disk.rational_point(next(self._ts))
            side = self._ref_side(R)
            if side is not None:
                self._refs.append((R, side))
        return self._refs[i]

    def on_arc(self, q: Point) -> bool:
        for a, b in self.segments:
            d, w = _sub(b, a), _sub(q, a)
            if _cross(d, w) == 0 and 0 <= _dot(w, d) <= _dot(d, d):
                return True
        return False

    def __call__(self, q: Sequence) -> str:
        q = tuple(to_fraction(x) for x in q)
        if not self.disk.inside(q):
            raise SakaiError("query point is not inside the open disk")
        if self.on_arc(q):
            return ON
        i = 0
        while True:
            R, side = self._reference(i)
            parity = self._parity(q, R)
            if parity is not None:
                if parity == 0:
                    return side
                return MINUS if side == PLUS else PLUS
            i += 1
            if i > 256:
                raise SakaiError("no generic reference point found")

    def _parity(self, q: Point, R: Point) -> int | None:
        count = 0
        for a, b in self.segments:
            d, e, w = _sub(R, q), _sub(b, a), _sub(a, q)
            den = _cross(d, e)
            if den == 0:
                if _cross(w, d) == 0:
                    dd = _dot(d, d)
                    t0, t1 = _dot(w, d) / dd, _dot(_sub(b, q), d) / dd
                    if max(t0, t1) >= 0 and min(t0, t1) <= 1:
                        return None
                continue
            t = _cross(w, e) / den
            u = _cross(w, d) / den
            if not (0 <= t <= 1 and 0 <= u <= 1):
                continue
            if u in (0, 1) and (a if u == 0 else b) in self.joints:
                return None
            if t in (0, 1):
                return None
            count += 1
        return count % 2


def side_classifier(K_prime: DiskArc) -> SideClassifier:
    return SideClassifier(K_prime)


# --------------------------------------------------------------------------
# Scanning L' against K'


@dataclass(frozen=True)
class ArcScan:
    """Sides visited by ``L'``; ``changes`` are points of ``L'`` on ``K'`` where
    the side flips between plus and minus."""

    meets_plus: bool
    meets_minus: bool
    changes: tuple[Point, ...]


def scan_arc(classifier: SideClassifier, L_prime: DiskArc) -> ArcScan:
    k_segments = classifier.segments
    seen: list[tuple[str, Point | None]] = []
    for a, b, lo, hi in L_prime.pieces():
        cuts = set()
        for qa, qb in k_segments:
            for t in _seg_params(a, b, qa, qb):
                if _cmp(lo, t) < 0 and _cmp(t, hi) < 0:
                    cuts.add(t)
        marks: list[Param] = [lo] + sorted(cuts) + [hi]
        for left, right in zip(marks, marks[1:]):
            if _cmp(left, right) >= 0:
                continue
            t = _rational_between(left, right)
            side = classifier(_at(a, b, t))
            start = _at(a, b, left) if isinstance(left, Fraction) else None
            seen.append((side, start))
    meets_plus = any(s == PLUS for s, _ in seen)
    meets_minus = any(s == MINUS for s, _ in seen)
    changes = []
    last_side, boundary = None, None
    for side, start in seen:
        if side == ON:
            if boundary is None:
                boundary = start
            continue
        if last_side is not None and side != last_side:
            changes.append(boundary if boundary is not None else start)
        last_side, boundary = side, None
    return ArcScan(meets_plus, meets_minus, tuple(c for c in changes if c is not None))


@dataclass(frozen=True)
class RadiusVerdict:
    radius: Fraction
    meets_plus: bool | None
    meets_minus: bool | None
    transverse_at_a: bool | None
    K_spans: bool
    L_spans: bool
    sign_changes: tuple[Point, ...] = ()
    error: str | None = None


def sakai_check(K: Polyline, L: Polyline, p: Sequence, radii: Sequence) -> list[RadiusVerdict]:
    """Per-radius check that ``L'`` meets both sides of ``K'``."""
    p = tuple(to_fraction(x) for x in p)
    if K.locate(p) is None or L.locate(p) is None:
        raise SakaiError("p must lie on both curves")
    out = []
    for a in radii:
        a = to_fraction(a)
        Kp = component_in_disk(K, p, a)
        Lp = component_in_disk(L, p, a)
        if not Kp.spanning:
            out.append(RadiusVerdict(a, None, None, None, False, Lp.spanning,
                                     error="K' does not span the disk"))
            continue
        scan = scan_arc(SideClassifier(Kp), Lp)
        out.append(RadiusVerdict(a, scan.meets_plus, scan.meets_minus,
                                 scan.meets_plus and scan.meets_minus, True, Lp.spanning,
                                 scan.changes))
    return out


def smallest_sign_change(verdict: RadiusVerdict, p: Sequence) -> Point | None:
    """Sign-change point closest to ``p`` (Chebyshev)."""
    p = tuple(to_fraction(x) for x in p)
    if not verdict.sign_changes:
        return None
    return min(verdict.sign_changes, key=lambda q: cheb_dist(q, p))


# --------------------------------------------------------------------------
# Squeeze-out


@dataclass(frozen=True)
class SqueezeWitness:
    """``pushed`` is within ``norm < epsilon`` of ``original`` and misses ``K_hull``.

    ``original`` is a rational polyline containing ``L'`` and ``K_hull`` one
    containing ``K'``, so the witness applies to the true components.
    """

    original: PLMap
    pushed: PLMap
    K_hull: Polyline
    norm: Fraction
    epsilon: Fraction
    side: str

    def verify(self) -> bool:
        from .plcore import c0_distance, images_intersect

        return (c0_distance(self.original, self.pushed) == self.norm < self.epsilon
                and not images_intersect(self.pushed, self.K_hull.as_plmap()))


def _segment_cheb_distance(q: Point, a: Point, b: Point) -> Fraction:
    from .plcore import simplex_distance

    return simplex_distance([q], [a, b])


def _unit_normal(a: Point, b: Point, side: str) -> tuple[Fraction, Fraction]:
    d = _sub(b, a)
    n = (-d[1], d[0]) if side == PLUS else (d[1], -d[0])
    m = cheb_norm(n)
    return (n[0] / m, n[1] / m)


def squeeze_out(K_prime: DiskArc, L_prime: DiskArc, epsilon, max_rounds: int = 12) -> SqueezeWitness:
    """Push a one-sided ``L'`` off ``K'`` by less than ``epsilon``.

    Vertices within ``epsilon`` of ``K'`` move by ``epsilon/2`` along the
    normal of the nearest ``K'`` segment pointing into ``L'``'s side (angle
    bisector at joints). Segments that still touch ``K'`` are subdivided
    and the push is redone.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise SakaiError("epsilon must be positive")
    cls = SideClassifier(K_prime)
    scan = scan_arc(cls, L_prime)
    if scan.meets_plus and scan.meets_minus:
        raise SakaiError("L' meets both sides of K'; nothing to squeeze")
    side = MINUS if scan.meets_minus else PLUS
    K_hull = K_prime.rational_hull()
    L_hull = L_prime.rational_hull()
    k_map = K_hull.as_plmap()
    original = L_hull.as_plmap()
    from .plcore import images_intersect

    if not images_intersect(original, k_map):
        return SqueezeWitness(original, original, K_hull, Fraction(0), epsilon, side)

    eta = epsilon / 2
    k_segs = [K_hull.segment(j) for j in range(K_hull.nseg)]
    verts = list(L_hull.vertices)
    for _ in range(max_rounds):
        pushed = []
        for q in verts:
            dists = [_segment_cheb_distance(q, a, b) for a, b in k_segs]
            dmin = min(dists)
            if dmin > epsilon:
                pushed.append(q)
                continue
            normals = [_unit_normal(a, b, side) for (a, b), dd in zip(k_segs, dists) if dd == dmin]
            nx = sum(n[0] for n in normals)
            ny = sum(n[1] for n in normals)
            m = max(abs(nx), abs(ny))
            if m == 0:
                nx, ny, m = normals[0][0], normals[0][1], Fraction(1)
            pushed.append((q[0] + eta * nx / m, q[1] + eta * ny / m))
        cx = SimplicialComplex.from_simplices([(i, i + 1) for i in range(len(verts) - 1)])
        before = PLMap(cx, dict(enumerate(verts)))
        after = PLMap(cx, dict(enumerate(pushed)))
        bad = [i for i in range(len(verts) - 1)
               if images_intersect(PLMap(SimplicialComplex.from_simplices([(0, 1)]),
                                         {0: pushed[i], 1: pushed[i + 1]}), k_map)]
        if not bad:
            from .plcore import c0_distance

            return SqueezeWitness(before, after, K_hull, c0_distance(before, after), epsilon, side)
        refined = []
        for i, q in enumerate(verts):
            refined.append(q)
            if i in bad:
                nxt = verts[i + 1]
                refined.append(((q[0] + nxt[0]) / 2, (q[1] + nxt[1]) / 2))
        verts = refined
    raise SakaiError("epsilon too small for the input resolution; refine L or increase epsilon")
