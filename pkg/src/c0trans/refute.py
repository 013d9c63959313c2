"""Dimension-based refutation of delta-essential intersections.

Compact spaces are represented by finite samples with an exact metric. The
pipeline: approximate each sampled map through the nerve of a cover (image
inside a polyhedron whose dimension is the nerve dimension), then translate
one polyhedron by a tiny rational vector so that the two become disjoint.
That works whenever the two dimensions add up to less than ``n``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import numpy as np

from .exact import to_fraction
from .plcore import (
    GeometryError,
    PLMap,
    Point,
    SimplicialComplex,
    bbox,
    bbox_gap,
    cheb_dist,
    simplex_pair_intersects,
)

DEFAULT_TRANSLATION_ATTEMPTS = int(os.environ.get("C0TRANS_TRANSLATION_ATTEMPTS", "64"))


class DimensionGateError(GeometryError):
    """The dimensions involved do not add up to less than the ambient one."""


class CoverTooCoarse(GeometryError):
    """The nerve approximation deviates by delta/2 or more; refine the cover."""


class RetryBudgetExhausted(RuntimeError):
    pass


class FiniteMetricSpace:
    """Finite metric space with exact distances.

    ``lebesgue`` is the resolution at which covers are required to be open:
    every closed ``lebesgue``-ball around a sample point must lie inside one
    cover set. By default it is the largest nearest-neighbour distance, which
    is what separates a sampled arc from a scattered set of points.
    """

    def __init__(self, points: Sequence[Hashable], dist: Sequence[Sequence], lebesgue=None,
                 check: bool = True):
        self.points = tuple(points)
        n = len(self.points)
        if len(set(self.points)) != n:
            raise GeometryError("point identifiers must be distinct")
        if len(dist) != n or any(len(row) != n for row in dist):
            raise GeometryError(f"dist_matrix must be {n} x {n}")
        self.dist = tuple(tuple(to_fraction(x) for x in row) for row in dist)
        self.index = {p: i for i, p in enumerate(self.points)}
        den = 1
        for row in self.dist:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        self._den = den
        ints = [[x.numerator * (den // x.denominator) for x in row] for row in self.dist]
        big = max((abs(v) for row in ints for v in row), default=0)
        dtype = np.int64 if 3 * big < 2 ** 62 else object
        self._int = np.array(ints, dtype=dtype).reshape(n, n)
        if check:
            self._check_metric()
        if lebesgue is None:
            lebesgue = self._default_lebesgue()
        self.lebesgue = to_fraction(lebesgue)
        self._cache: dict[int, int | None] = {}

    def __len__(self) -> int:
        return len(self.points)

    def _check_metric(self) -> None:
        M = self._int
        n = len(self.points)
        if n == 0:
            return
        if np.any(np.diagonal(M) != 0):
            raise GeometryError("dist_matrix needs a zero diagonal")
        if np.any(M != M.T):
            raise GeometryError("dist_matrix must be symmetric")
        off = M[~np.eye(n, dtype=bool)]
        if np.any(off <= 0):
            raise GeometryError("distinct points need positive distance")
        for j in range(n):
            # d(i,k) <= d(i,j) + d(j,k) for all i, k
            if np.any(M > M[:, j:j + 1] + M[j:j + 1, :]):
                raise GeometryError("triangle inequality fails")

    def _default_lebesgue(self) -> Fraction:
        n = len(self.points)
        if n < 2:
            return Fraction(0)
        M = self._int.copy()
        nn = []
        for i in range(n):
            row = [M[i, j] for j in range(n) if j != i]
            nn.append(min(row))
        return Fraction(int(max(nn)), self._den)

    def scaled(self, value: Fraction) -> int:
        """Largest integer matrix value ``<= value`` in the internal scale."""
        return math.floor(to_fraction(value) * self._den)

    def d(self, a: Hashable, b: Hashable) -> Fraction:
        return self.dist[self.index[a]][self.index[b]]

    def diameter(self, ids: Sequence[Hashable]) -> Fraction:
        idx = [self.index[p] for p in ids]
        best = 0
        for i in idx:
            for j in idx:
                if self._int[i, j] > best:
                    best = self._int[i, j]
        return Fraction(int(best), self._den)

    @classmethod
    def from_points(cls, coords: Sequence[Sequence], ids=None, lebesgue=None) -> "FiniteMetricSpace":
        """Chebyshev metric on explicit coordinates."""
        pts = [tuple(to_fraction(c) for c in p) for p in coords]
        ids = list(range(len(pts))) if ids is None else list(ids)
        dist = [[cheb_dist(p, q) for q in pts] for p in pts]
        return cls(ids, dist, lebesgue, check=False)


@dataclass(frozen=True)
class Cover:
    sets: tuple[tuple[Hashable, ...], ...]
    epsilon: Fraction
    multiplicity: int


def make_cover(X: FiniteMetricSpace, sets: Sequence[Sequence[Hashable]], epsilon=None) -> Cover:
    """Validate a cover: union is everything, each set within ``epsilon``.

    ``epsilon`` defaults to the largest set diameter.
    """
    clean = []
    for s in sets:
        ids = tuple(dict.fromkeys(s))
        unknown = [p for p in ids if p not in X.index]
        if unknown:
            raise GeometryError(f"cover mentions unknown point {unknown[0]!r}")
        if not ids:
            raise GeometryError("cover sets must be nonempty")
        clean.append(ids)
    covered = {p for s in clean for p in s}
    missing = [p for p in X.points if p not in covered]
    if missing:
        raise GeometryError(f"cover misses point {missing[0]!r}")
    diam = max((X.diameter(s) for s in clean), default=Fraction(0))
    epsilon = diam if epsilon is None else to_fraction(epsilon)
    if diam > epsilon:
        raise GeometryError(f"a cover set has diameter {diam} > epsilon {epsilon}")
    counts: dict[Hashable, int] = {}
    for s in clean:
        for p in s:
            counts[p] = counts.get(p, 0) + 1
    return Cover(tuple(clean), epsilon, max(counts.values(), default=0))


# --------------------------------------------------------------------------
# Heuristic covers


def _greedy_cover(X: FiniteMetricSpace, budget: int, rho: int, order: np.ndarray) -> list[set] | None:
    """Cover whose sets have diameter <= budget (integer scale) and contain a
    rho-ball around each point; multiplicity reduced by local search."""
    M = X._int
    n = len(X.points)
    balls = [frozenset(np.flatnonzero(M[i] <= rho).tolist()) for i in range(n)]
    ball_mask = M <= rho
    candidates = []
    for c in range(n):
        if _diam(M, ball_mask[c]) > budget:
            return None
        mask = ball_mask[c].copy()
        # grow by whole balls, nearest centers first, while the diameter fits
        for y in np.argsort(M[c], kind="stable"):
            if M[c, y] > budget:
                break
            add = ball_mask[y] & ~mask
            if not add.any():
                continue
            if M[np.ix_(add, mask | add)].max() <= budget:
                mask |= add
        candidates.append(frozenset(np.flatnonzero(mask).tolist()))
    covers_ball = [[i for i in range(n) if balls[i] <= cset] for cset in candidates]

    uncovered = set(range(n))
    chosen: list[int] = []
    rank = {int(c): r for r, c in enumerate(order)}
    while uncovered:
        best, gain = None, 0
        for ci, cb in enumerate(covers_ball):
            g = sum(1 for i in cb if i in uncovered)
            if g > gain or (g == gain and g > 0 and rank.get(ci, ci) < rank.get(best, best)):
                best, gain = ci, g
        if best is None:
            return None
        chosen.append(best)
        uncovered.difference_update(covers_ball[best])

    # assign each ball to one chosen set, then shrink sets to assigned balls
    options = [[ci for ci in chosen if i in covers_ball[ci]] for i in range(n)]
    assign = [opts[0] for opts in options]
    count = {ci: np.zeros(n, dtype=np.int64) for ci in chosen}
    for i, ci in enumerate(assign):
        for p in balls[i]:
            count[ci][p] += 1
    mult = np.zeros(n, dtype=np.int64)
    for ci in chosen:
        mult += count[ci] > 0

    improved = True
    while improved:
        improved = False
        for i in (int(x) for x in order):
            cur = assign[i]
            for alt in options[i]:
                if alt == cur:
                    continue
                pts = list(balls[i])
                before = sum(int(mult[p]) ** 2 for p in pts)
                new_mult = {}
                for p in pts:
                    m = int(mult[p])
                    if count[cur][p] == 1:
                        m -= 1
                    if count[alt][p] == 0:
                        m += 1
                    new_mult[p] = m
                after = sum(m * m for m in new_mult.values())
                if after < before:
                    for p in pts:
                        count[cur][p] -= 1
                        count[alt][p] += 1
                        mult[p] = new_mult[p]
                    assign[i] = alt
                    cur = alt
                    improved = True
    sets = []
    for ci in chosen:
        members = set(np.flatnonzero(count[ci] > 0).tolist())
        if members:
            sets.append(members)
    return sets


def _diam(M: np.ndarray, mask: np.ndarray) -> int:
    return int(M[np.ix_(mask, mask)].max())


def _multiplicity(sets: list[set], n: int) -> int:
    counts = [0] * n
    for s in sets:
        for p in s:
            counts[p] += 1
    return max(counts, default=0)


def heuristic_cover(X: FiniteMetricSpace, epsilon, restarts: int = 3) -> Cover | None:
    """Best cover found at diameter budget ``epsilon`` (no scale ladder)."""
    n = len(X)
    if n == 0:
        return Cover((), to_fraction(epsilon), 0)
    budget = X.scaled(epsilon)
    rho = X.scaled(X.lebesgue)
    best = None
    for r in range(restarts):
        order = np.arange(n) if r == 0 else np.random.default_rng(r).permutation(n)
        sets = _greedy_cover(X, budget, rho, order)
        if sets is None:
            return None
        mult = _multiplicity(sets, n)
        if best is None or mult < best[0]:
            best = (mult, sets)
    mult, sets = best
    named = [tuple(X.points[i] for i in sorted(s)) for s in sets]
    return make_cover(X, named, epsilon)


def _scale_value(X: FiniteMetricSpace, budget: int) -> int | None:
    if budget in X._cache:
        return X._cache[budget]
    cover = heuristic_cover(X, Fraction(budget, X._den))
    value = None if cover is None else cover.multiplicity
    X._cache[budget] = value
    return value


def cover_dimension_bound(X: FiniteMetricSpace, epsilon) -> int:
    """Upper bound on the epsilon-scale covering dimension (heuristic).

    Returns (smallest multiplicity found) - 1 over covers whose sets have
    diameter at most ``epsilon`` and contain every Lebesgue-radius ball. The
    search runs at each distinct pairwise distance not exceeding ``epsilon``
    (any such cover is also an epsilon-cover), so the bound never increases
    with ``epsilon``. Exact minimization is not attempted.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise GeometryError("epsilon must be positive")
    n = len(X)
    if n == 0:
        return -1
    budget = X.scaled(epsilon)
    ladder = sorted({int(v) for v in np.unique(X._int) if v <= budget}, reverse=True)
    best = None
    for value in ladder:
        mult = _scale_value(X, value)
        if mult is not None and (best is None or mult < best):
            best = mult
        if best == 1:
            break
    if best is None:
        raise GeometryError(
            f"no cover with diameter <= {epsilon} contains the Lebesgue balls "
            f"(radius {X.lebesgue}); increase epsilon")
    return best - 1


# --------------------------------------------------------------------------
# Nerve approximation


@dataclass(frozen=True)
class NerveApproximation:
    nerve: SimplicialComplex
    realization: PLMap
    point_images: Mapping[Hashable, Point]
    carriers: Mapping[Hashable, tuple[int, ...]]
    deviation: Fraction
    deviation_bound: Fraction

    @property
    def dim(self) -> int:
        return self.nerve.dim

    def pieces(self) -> list[tuple[Point, ...]]:
        return self.realization.pieces()


def _medoid(ids: Sequence[Hashable], images: Mapping[Hashable, Point]) -> Hashable:
    best, best_r = None, None
    for p in ids:
        r = max(cheb_dist(images[p], images[q]) for q in ids)
        if best_r is None or r < best_r:
            best, best_r = p, r
    return best


def nerve_approximation(X: FiniteMetricSpace, images: Mapping[Hashable, Sequence],
                        cover: Cover) -> NerveApproximation:
    """Push a sampled map through the nerve of ``cover``.

    Nerve vertex ``j`` sits at the image of a medoid of set ``j``; each sample
    point goes to the barycentric combination with weights proportional to
    its distance from the complement of each set. The image lies in the
    realized nerve, whose dimension is multiplicity - 1, and each point moves
    by at most the largest image diameter of a set containing it.
    """
    imgs = {p: tuple(to_fraction(c) for c in images[p]) for p in X.points}
    make_cover(X, cover.sets, cover.epsilon)
    n_amb = len(next(iter(imgs.values()))) if imgs else 0
    membership: dict[Hashable, list[int]] = {p: [] for p in X.points}
    for j, s in enumerate(cover.sets):
        for p in s:
            membership[p].append(j)
    reps = [imgs[_medoid(s, imgs)] for s in cover.sets]
    carriers = {p: tuple(sorted(js)) for p, js in membership.items()}
    nerve = SimplicialComplex.from_simplices(carriers.values()) if carriers else \
        SimplicialComplex.from_simplices([])
    realization = PLMap(nerve, {j: reps[j] for j in range(len(cover.sets))
                                if (j,) in nerve.simplices})
    far = max((max(row) for row in X.dist), default=Fraction(0)) + 1
    set_members = [set(s) for s in cover.sets]
    out: dict[Hashable, Point] = {}
    deviation = Fraction(0)
    for p in X.points:
        weights = []
        for j in carriers[p]:
            outside = [X.d(p, q) for q in X.points if q not in set_members[j]]
            weights.append(min(outside) if outside else far)
        total = sum(weights)
        y = tuple(sum(w * reps[j][i] for w, j in zip(weights, carriers[p])) / total
                  for i in range(n_amb))
        out[p] = y
        deviation = max(deviation, cheb_dist(y, imgs[p]))
    bound = Fraction(0)
    for s in cover.sets:
        for a in s:
            for b in s:
                bound = max(bound, cheb_dist(imgs[a], imgs[b]))
    return NerveApproximation(nerve, realization, out, carriers, deviation, bound)


# --------------------------------------------------------------------------
# Separating translation


def _max_dim(pieces: Sequence[Sequence[Point]]) -> int:
    return max((len(s) - 1 for s in pieces), default=-1)


def _all_disjoint(SA, SB, v) -> bool:
    shifted = [tuple(tuple(a + b for a, b in zip(p, v)) for p in s) for s in SA]
    boxes_b = [bbox(t) for t in SB]
    for s in shifted:
        bs = bbox(s)
        for t, bt in zip(SB, boxes_b):
            if bbox_gap(bs, bt) > 0:
                continue
            if simplex_pair_intersects(s, t):
                return False
    return True


def separating_translation(SA: Sequence[Sequence[Point]], SB: Sequence[Sequence[Point]],
                           bound, rng_seed: int = 0,
                           max_attempts: int = DEFAULT_TRANSLATION_ATTEMPTS) -> tuple[Fraction, ...]:
    """Rational ``v`` with ``|v| < bound`` and ``(v + a) & b`` empty for all pairs.

    Candidates are uniform on the grid ``bound * i / 2**k`` (|i| < 2**k) with
    ``k`` growing on each retry; every candidate is checked exactly.
    """
    bound = to_fraction(bound)
    if bound <= 0:
        raise GeometryError("bound must be positive")
    pts = [p for s in list(SA) + list(SB) for p in s]
    if not pts:
        raise GeometryError("need at least one simplex")
    n = len(pts[0])
    da, db = _max_dim(SA), _max_dim(SB)
    if da + db >= n:
        raise DimensionGateError(f"dimensions {da} + {db} are not below {n}")
    rng = np.random.default_rng(rng_seed)
    for attempt in range(max_attempts):
        res = 2 ** (8 + attempt)
        ints = [int(x) for x in rng.integers(-res + 1, res, size=n)]
        v = tuple(bound * Fraction(i, res) for i in ints)
        if _all_disjoint(SA, SB, v):
            return v
    raise RetryBudgetExhausted(f"no separating translation in {max_attempts} attempts")


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledMap:
    """A map from a finite sample into R^n together with a cover of the sample."""

    space: FiniteMetricSpace
    images: Mapping[Hashable, Point]
    cover: Cover

    @property
    def n(self) -> int:
        return len(next(iter(self.images.values())))

    def as_plmap(self) -> PLMap:
        """The sample as a 0-dimensional PL map (vertex i = i-th point)."""
        cx = SimplicialComplex.from_simplices([(i,) for i in range(len(self.space))])
        return PLMap(cx, {i: self.images[p] for i, p in enumerate(self.space.points)})


def sampled_map(points, dist_matrix, images, cover, lebesgue=None) -> SampledMap:
    X = FiniteMetricSpace(points, dist_matrix, lebesgue)
    imgs = {p: tuple(to_fraction(c) for c in img) for p, img in zip(X.points, images)}
    dims = {len(v) for v in imgs.values()}
    if len(dims) > 1:
        raise GeometryError("images live in different dimensions")
    return SampledMap(X, imgs, make_cover(X, cover))


@dataclass(frozen=True)
class RefutationWitness:
    f_tilde: PLMap
    g_tilde: PLMap
    f_points: Mapping[Hashable, Point]
    g_points: Mapping[Hashable, Point]
    delta_used: Fraction
    v: tuple[Fraction, ...]
    dist_f: Fraction
    dist_g: Fraction
    dims: tuple[int, int] = field(default=(-1, -1))

    def verify(self, A: SampledMap, B: SampledMap) -> bool:
        """Recompute distances and polyhedron disjointness from scratch."""
        df = max(cheb_dist(self.f_points[p], A.images[p]) for p in A.space.points)
        dg = max(cheb_dist(self.g_points[p], B.images[p]) for p in B.space.points)
        if not (df == self.dist_f < self.delta_used and dg == self.dist_g < self.delta_used):
            return False
        return _all_disjoint(self.f_tilde.pieces(), self.g_tilde.pieces(),
                             (Fraction(0),) * self.f_tilde.n)

    def sample_maps(self, A: SampledMap, B: SampledMap) -> tuple[PLMap, PLMap]:
        """Witness restricted to the samples, as PL maps on A's and B's 0-complexes."""
        F, G = A.as_plmap(), B.as_plmap()
        Ft = F.with_images({i: self.f_points[p] for i, p in enumerate(A.space.points)})
        Gt = G.with_images({i: self.g_points[p] for i, p in enumerate(B.space.points)})
        return Ft, Gt


def refute_essential(A: SampledMap, B: SampledMap, delta, rng_seed: int = 0,
                     max_attempts: int = DEFAULT_TRANSLATION_ATTEMPTS) -> RefutationWitness:
    """Build perturbations of both maps, each within ``delta``, with disjoint images."""
    delta = to_fraction(delta)
    if delta <= 0:
        raise GeometryError("delta must be positive")
    if A.n != B.n:
        raise GeometryError("maps live in different ambient dimensions")
    n = A.n
    fa = nerve_approximation(A.space, A.images, A.cover)
    gb = nerve_approximation(B.space, B.images, B.cover)
    if fa.dim + gb.dim >= n:
        raise DimensionGateError(
            f"nerve dimensions {fa.dim} + {gb.dim} are not below {n}; "
            "this route gives no refutation")
    for name, approx in (("A", fa), ("B", gb)):
        if approx.deviation >= delta / 2:
            raise CoverTooCoarse(
                f"cover of {name} gives deviation {approx.deviation} >= delta/2 = {delta / 2}")
    v = separating_translation(fa.pieces(), gb.pieces(), delta / 2, rng_seed, max_attempts)
    f_points = {p: tuple(a + b for a, b in zip(y, v)) for p, y in fa.point_images.items()}
    dist_f = max(cheb_dist(f_points[p], A.images[p]) for p in A.space.points)
    dist_g = gb.deviation
    witness = RefutationWitness(fa.realization.translated(v), gb.realization,
                                f_points, dict(gb.point_images), delta, v, dist_f, dist_g,
                                (fa.dim, gb.dim))
    if not witness.verify(A, B):
        raise AssertionError("refutation witness failed its own verification")
    return witness
