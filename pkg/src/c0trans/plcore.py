"""Exact piecewise-linear geometry kernel.

Points are tuples of ``Fraction``; the working norm is Chebyshev
(max of absolute coordinates). Complexes are abstract, PL maps assign a point
to every vertex and extend affinely over simplices.

All "continuous maps" in this package are PL maps: every construction we need
(disk maps, plates, nerve realizations, perturbations) is piecewise linear, and
perturbations are taken over PL maps on the given triangulation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .exact import det, solve_lp, to_fraction

Point = tuple[Fraction, ...]
Simplex = tuple[int, ...]


class GeometryError(ValueError):
    """Raised on dimension mismatches and malformed PL data."""


def point(*coords) -> Point:
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = tuple(coords[0])
    if not coords:
        raise GeometryError("points need at least one coordinate")
    return tuple(to_fraction(c) for c in coords)


def _same_dim(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise GeometryError(f"dimension mismatch: {len(u)} vs {len(v)}")


def cheb_norm(v: Sequence[Fraction]) -> Fraction:
    return max((abs(x) for x in v), default=Fraction(0))


def cheb_dist(u: Point, v: Point) -> Fraction:
    _same_dim(u, v)
    return max(abs(a - b) for a, b in zip(u, v))


def add(u: Point, v: Sequence[Fraction]) -> Point:
    _same_dim(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Point, v: Point) -> Point:
    _same_dim(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(s: Fraction, u: Point) -> Point:
    return tuple(s * a for a in u)


# --------------------------------------------------------------------------
# Complexes and maps


def faces(s: Simplex) -> Iterable[Simplex]:
    """All nonempty faces of ``s`` (including ``s``), as sorted tuples."""
    base = tuple(sorted(s))
    for r in range(1, len(base) + 1):
        yield from itertools.combinations(base, r)


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed finite abstract complex on integer vertex ids.

    ``simplices`` stores sorted tuples; ``top`` keeps the generating simplices
    in the order (and vertex order) they were given.
    """

    simplices: frozenset
    top: tuple[Simplex, ...]

    @classmethod
    def from_simplices(cls, top: Iterable[Sequence[int]]) -> "SimplicialComplex":
        top_t = tuple(tuple(int(v) for v in s) for s in top)
        closed: set[Simplex] = set()
        for s in top_t:
            if not s:
                raise GeometryError("empty simplex")
            if len(set(s)) != len(s):
                raise GeometryError(f"repeated vertex in simplex {s}")
            closed.update(faces(s))
        return cls(frozenset(closed), top_t)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self.simplices if len(s) == 1))

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def of_dim(self, d: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if len(s) == d + 1)

    def maximal(self) -> list[Simplex]:
        """Simplices that are not a proper face of another (sorted tuples)."""
        covered: set[Simplex] = set()
        for s in self.simplices:
            if len(s) > 1:
                covered.update(itertools.combinations(s, len(s) - 1))
        return sorted(s for s in self.simplices if s not in covered)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.simplices


@dataclass(frozen=True)
class PLMap:
    """Vertex images plus affine extension over each simplex of ``domain``."""

    domain: SimplicialComplex
    images: Mapping[int, Point]
    n: int = field(init=False)

    def __post_init__(self):
        verts = self.domain.vertices
        missing = [v for v in verts if v not in self.images]
        if missing:
            raise GeometryError(f"vertices without image: {missing[:5]}")
        imgs = {v: tuple(self.images[v]) for v in verts}
        dims = {len(p) for p in imgs.values()}
        if len(dims) > 1:
            raise GeometryError("vertex images live in different dimensions")
        object.__setattr__(self, "images", MappingProxyType(imgs))
        object.__setattr__(self, "n", dims.pop() if dims else 0)

    def embed(self, s: Sequence[int]) -> tuple[Point, ...]:
        return tuple(self.images[v] for v in s)

    def pieces(self) -> list[tuple[Point, ...]]:
        """Embedded maximal simplices; their union is the image."""
        return [self.embed(s) for s in self.domain.maximal()]

    def with_images(self, images: Mapping[int, Point]) -> "PLMap":
        return PLMap(self.domain, images)

    def translated(self, v: Sequence[Fraction]) -> "PLMap":
        return PLMap(self.domain, {k: add(p, v) for k, p in self.images.items()})


def c0_distance(F: PLMap, G: PLMap) -> Fraction:
    """Sup-distance between two PL maps on the same triangulation.

    The difference of two affine maps on a simplex is affine and a norm of an
    affine map is maximized at a vertex, so the vertex maximum is exact.
    """
    if F.domain != G.domain:
        raise GeometryError("c0_distance needs a common domain complex")
    if F.n != G.n:
        raise GeometryError("maps live in different ambient dimensions")
    return max((cheb_dist(F.images[v], G.images[v]) for v in F.domain.vertices),
               default=Fraction(0))


def eval_pl(F: PLMap, s: Sequence[int], bary: Sequence) -> Point:
    if tuple(sorted(s)) not in F.domain.simplices:
        raise GeometryError(f"simplex {tuple(s)} is not in the domain")
    w = [to_fraction(b) for b in bary]
    if len(w) != len(s) or any(x < 0 for x in w) or sum(w) != 1:
        raise GeometryError("barycentric weights must be nonnegative and sum to 1")
    pts = F.embed(s)
    return tuple(sum(wi * p[i] for wi, p in zip(w, pts)) for i in range(F.n))


# --------------------------------------------------------------------------
# Exact simplex predicates


def bbox(pts: Sequence[Point]) -> tuple[Point, Point]:
    lo = tuple(min(c) for c in zip(*pts))
    hi = tuple(max(c) for c in zip(*pts))
    return lo, hi


def bbox_gap(a: tuple[Point, Point], b: tuple[Point, Point]) -> Fraction:
    """Chebyshev gap between boxes; a lower bound for the set distance."""
    gap = Fraction(0)
    for lo1, hi1, lo2, hi2 in zip(a[0], a[1], b[0], b[1]):
        g = max(lo2 - hi1, lo1 - hi2)
        if g > gap:
            gap = g
    return gap


def _boxes_disjoint(S: Sequence[Point], T: Sequence[Point]) -> bool:
    for i in range(len(S[0])):
        if max(p[i] for p in S) < min(q[i] for q in T):
            return True
        if max(q[i] for q in T) < min(p[i] for p in S):
            return True
    return False


def simplex_pair_intersects(S: Sequence[Point], T: Sequence[Point]) -> bool:
    """Exact test whether the closed convex hulls of ``S`` and ``T`` meet.

    Feasibility of ``sum l_i p_i = sum m_j q_j`` with ``l, m`` in the standard
    simplices, decided by the exact LP.
    """
    if not S or not T:
        return False
    _same_dim(S[0], T[0])
    if _boxes_disjoint(S, T):
        return False
    n = len(S[0])
    a, b = len(S), len(T)
    A = []
    for i in range(n):
        A.append([p[i] for p in S] + [-q[i] for q in T])
    A.append([1] * a + [0] * b)
    A.append([0] * a + [1] * b)
    rhs = [0] * n + [1, 1]
    return solve_lp([0] * (a + b), A, rhs).status == "optimal"


def simplex_distance(S: Sequence[Point], T: Sequence[Point]) -> Fraction:
    """Exact Chebyshev distance between two closed simplices (LP optimum)."""
    _same_dim(S[0], T[0])
    n = len(S[0])
    a, b = len(S), len(T)
    # variables: l (a), m (b), t, slack+ (n), slack- (n)
    nv = a + b + 1 + 2 * n
    A, rhs = [], []
    for i in range(n):
        diff = [p[i] for p in S] + [-q[i] for q in T]
        up = diff + [-1] + [0] * (2 * n)
        up[a + b + 1 + i] = 1
        lo = [-x for x in diff] + [-1] + [0] * (2 * n)
        lo[a + b + 1 + n + i] = 1
        A += [up, lo]
        rhs += [0, 0]
    A.append([1] * a + [0] * b + [0] * (1 + 2 * n))
    A.append([0] * a + [1] * b + [0] * (1 + 2 * n))
    rhs += [1, 1]
    c = [0] * nv
    c[a + b] = 1
    res = solve_lp(c, A, rhs)
    assert res.status == "optimal", res.status
    return res.value


def set_distance(P: Sequence[Sequence[Point]], Q: Sequence[Sequence[Point]]) -> Fraction:
    """Exact Chebyshev distance between two finite unions of simplices."""
    if not P or not Q:
        raise GeometryError("distance to an empty set is undefined")
    boxes_q = [bbox(t) for t in Q]
    best: Fraction | None = None
    pairs = []
    for s in P:
        bs = bbox(s)
        for t, bt in zip(Q, boxes_q):
            pairs.append((bbox_gap(bs, bt), s, t))
    pairs.sort(key=lambda item: item[0])
    for gap, s, t in pairs:
        if best is not None and gap >= best:
            break
        d = simplex_distance(s, t)
        if best is None or d < best:
            best = d
            if best == 0:
                break
    return best


def images_intersect(F: PLMap, G: PLMap) -> bool:
    """Whether the images of two PL maps share a point (exact)."""
    if F.n != G.n:
        raise GeometryError("maps live in different ambient dimensions")
    P, Q = F.pieces(), G.pieces()
    boxes_q = [bbox(t) for t in Q]
    for s in P:
        bs = bbox(s)
        for t, bt in zip(Q, boxes_q):
            if bbox_gap(bs, bt) > 0:
                continue
            if simplex_pair_intersects(s, t):
                return True
    return False


# --------------------------------------------------------------------------
# Triangulated cubes


def _perm_sign(perm: Sequence[int]) -> int:
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


@dataclass(frozen=True)
class Cube:
    """Freudenthal triangulation of ``[-1, 1]^m`` with ``s`` cells per axis.

    Vertex ``id`` enumerates grid indices lexicographically (last axis fastest);
    every top simplex in ``complex.top`` is listed positively oriented with
    respect to the standard orientation of ``R^m``.
    """

    m: int
    s: int
    complex: SimplicialComplex
    coords: PLMap

    def grid_index(self, vid: int) -> tuple[int, ...]:
        idx = []
        for _ in range(self.m):
            vid, r = divmod(vid, self.s + 1)
            idx.append(r)
        return tuple(reversed(idx))

    def vertex_id(self, idx: Sequence[int]) -> int:
        vid = 0
        for i in idx:
            vid = vid * (self.s + 1) + i
        return vid

    def boundary_vertices(self) -> list[int]:
        return [v for v in self.complex.vertices
                if any(i in (0, self.s) for i in self.grid_index(v))]


def freudenthal_cube(m: int, s: int = 1) -> Cube:
    """Kuhn/Freudenthal triangulation of ``[-1, 1]^m`` into ``m! * s^m`` simplices."""
    if m < 1 or s < 1:
        raise GeometryError("freudenthal_cube needs m >= 1 and s >= 1")
    side = s + 1

    def vid(idx):
        v = 0
        for i in idx:
            v = v * side + i
        return v

    top = []
    for base in itertools.product(range(s), repeat=m):
        for perm in itertools.permutations(range(m)):
            cur = list(base)
            verts = [vid(cur)]
            for axis in perm:
                cur[axis] += 1
                verts.append(vid(cur))
            # frame vectors are e_perm[0], e_perm[0]+e_perm[1], ...: sign = sign(perm)
            if _perm_sign(perm) < 0:
                verts[-1], verts[-2] = verts[-2], verts[-1]
            top.append(tuple(verts))
    cplx = SimplicialComplex.from_simplices(top)
    images = {}
    for idx in itertools.product(range(side), repeat=m):
        images[vid(idx)] = tuple(Fraction(2 * i, s) - 1 for i in idx)
    return Cube(m, s, cplx, PLMap(cplx, images))


def orientation_sign(pts: Sequence[Point]) -> int:
    """Sign of the frame ``(p1-p0, ..., pk-p0)`` for a full-dimensional simplex."""
    p0 = pts[0]
    d = det([sub(p, p0) for p in pts[1:]])
    return (d > 0) - (d < 0)


# --------------------------------------------------------------------------
# Oriented cycles


Chain = tuple[tuple[Simplex, int], ...]


def chain_boundary(chain: Iterable[tuple[Simplex, int]]) -> dict[Simplex, int]:
    """Boundary of an integral chain, keyed by sorted faces with the sign
    relative to the sorted order. For 0-chains returns the augmentation
    under the key ``()``."""
    out: dict[Simplex, int] = {}
    for s, c in chain:
        if len(s) == 1:
            out[()] = out.get((), 0) + c
            continue
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            key = tuple(sorted(face))
            perm = [face.index(v) for v in key]
            sgn = (-1) ** i * _perm_sign(perm)
            out[key] = out.get(key, 0) + sgn * c
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class OrientedCycle:
    """Closed oriented pseudomanifold of dimension ``cycle_dim`` mapped PL.

    ``chain`` lists ordered top simplices with coefficient +1/-1; the ordering
    of each tuple is its orientation. For ``cycle_dim == 0`` the chain is two
    points with opposite signs (an S^0).
    """

    map: PLMap
    chain: Chain
    cycle_dim: int = field(init=False)

    def __post_init__(self):
        chain = tuple((tuple(s), int(c)) for s, c in self.chain)
        object.__setattr__(self, "chain", chain)
        if not chain:
            object.__setattr__(self, "cycle_dim", -1)
            return
        dims = {len(s) - 1 for s, _ in chain}
        if len(dims) != 1:
            raise GeometryError("cycle simplices must share one dimension")
        p = dims.pop()
        object.__setattr__(self, "cycle_dim", p)
        for s, c in chain:
            if c not in (1, -1):
                raise GeometryError("cycle coefficients must be +1 or -1")
            if tuple(sorted(s)) not in self.map.domain.simplices:
                raise GeometryError(f"cycle simplex {s} not in the map's domain")
        if p == 0:
            if len(chain) != 2 or chain[0][1] + chain[1][1] != 0:
                raise GeometryError("a 0-cycle must be two points with opposite signs")
        else:
            count: dict[Simplex, int] = {}
            for s, _ in chain:
                for i in range(len(s)):
                    key = tuple(sorted(s[:i] + s[i + 1:]))
                    count[key] = count.get(key, 0) + 1
            bad = [k for k, v in count.items() if v != 2]
            if bad:
                raise GeometryError(f"not a pseudomanifold: face {bad[0]} has {count[bad[0]]} cofaces")
        if chain_boundary(chain):
            raise GeometryError("chain is not a cycle (boundary nonzero)")

    @property
    def n(self) -> int:
        return self.map.n

    def embedded(self) -> list[tuple[tuple[Point, ...], int]]:
        return [(self.map.embed(s), c) for s, c in self.chain]

    def pieces(self) -> list[tuple[Point, ...]]:
        return [self.map.embed(s) for s, _ in self.chain]

    def reversed(self) -> "OrientedCycle":
        return OrientedCycle(self.map, tuple((s, -c) for s, c in self.chain))

    def transformed(self, images: Mapping[int, Point]) -> "OrientedCycle":
        return OrientedCycle(self.map.with_images(images), self.chain)


def cycle_from(map_: PLMap, chain: Iterable[tuple[Sequence[int], int]]) -> OrientedCycle:
    """Build a cycle whose map is ``map_`` restricted to the chain's closure."""
    chain = tuple((tuple(s), c) for s, c in chain)
    dom = SimplicialComplex.from_simplices(s for s, _ in chain)
    return OrientedCycle(PLMap(dom, {v: map_.images[v] for v in dom.vertices}), chain)


def boundary_cycle(cube: Cube, map_: PLMap | None = None) -> OrientedCycle:
    """Oriented boundary sphere of a Freudenthal ball.

    ``map_`` defaults to the reference embedding; any PL map on the cube's
    complex may be given, and is restricted to the boundary.
    """
    if map_ is None:
        map_ = cube.coords
    if map_.domain != cube.complex:
        raise GeometryError("map is not defined on this cube")
    for s in cube.complex.top:
        if orientation_sign(cube.coords.embed(s)) <= 0:
            raise GeometryError("input is not a positively oriented combinatorial ball")
    if cube.m == 1:
        lo, hi = cube.vertex_id((0,)), cube.vertex_id((cube.s,))
        return cycle_from(map_, [((hi,), 1), ((lo,), -1)])
    bnd = chain_boundary((s, 1) for s in cube.complex.top)
    chain = []
    for key in sorted(bnd):
        c = bnd[key]
        if c not in (1, -1):
            raise GeometryError("input is not a combinatorial ball")
        chain.append((key, c) if c == 1 else (key[1:2] + key[0:1] + key[2:], 1))
    return cycle_from(map_, chain)
