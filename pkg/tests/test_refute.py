from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from c0trans.plcore import GeometryError, point
from c0trans.refute import (
    CoverTooCoarse,
    DimensionGateError,
    FiniteMetricSpace,
    RetryBudgetExhausted,
    cover_dimension_bound,
    heuristic_cover,
    make_cover,
    nerve_approximation,
    refute_essential,
    sampled_map,
    separating_translation,
)
from c0trans.plcore import simplex_pair_intersects

F = Fraction


def segment_space(count):
    ts = [F(i, count - 1) for i in range(count)]
    return FiniteMetricSpace(list(range(count)), [[abs(a - b) for b in ts] for a in ts]), ts


def forced_single_set_components(X):
    """Union-find over Lebesgue balls: points that must share a set in any
    multiplicity-1 cover."""
    parent = list(range(len(X)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, p in enumerate(X.points):
        for j, q in enumerate(X.points):
            if X.d(p, q) <= X.lebesgue:
                parent[find(i)] = find(j)
    comps = {}
    for i, p in enumerate(X.points):
        comps.setdefault(find(i), []).append(p)
    return list(comps.values())


def test_dimension_bound_examples():
    assert cover_dimension_bound(FiniteMetricSpace([], []), 1) == -1
    assert cover_dimension_bound(FiniteMetricSpace(["a"], [[0]]), F(1, 10)) == 0
    X, _ = segment_space(100)
    assert cover_dimension_bound(X, F(1, 20)) == 1
    # brute-force side: a multiplicity-1 cover would need one set of diameter 1
    comps = forced_single_set_components(X)
    assert max(X.diameter(c) for c in comps) > F(1, 20)


def test_heuristic_cover_is_valid():
    X, _ = segment_space(60)
    cover = heuristic_cover(X, F(1, 10))
    assert {p for s in cover.sets for p in s} == set(X.points)
    assert all(X.diameter(s) <= F(1, 10) for s in cover.sets)
    for p in X.points:
        ball = [q for q in X.points if X.d(p, q) <= X.lebesgue]
        assert any(set(ball) <= set(s) for s in cover.sets)


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=2, max_size=10, unique=True),
       st.integers(1, 6), st.integers(1, 6))
def test_dimension_bound_is_monotone(coords, e1, e2):
    X = FiniteMetricSpace.from_points(coords)
    lo, hi = sorted((e1, e2))
    try:
        small = cover_dimension_bound(X, lo)
    except GeometryError:
        return
    assert cover_dimension_bound(X, hi) <= small


def test_finite_metric_space_checks():
    with pytest.raises(GeometryError):
        FiniteMetricSpace([0, 1, 2], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(GeometryError):
        FiniteMetricSpace([0, 1], [[0, 1], [2, 0]])


def test_make_cover_errors():
    X, _ = segment_space(5)
    with pytest.raises(GeometryError, match="misses"):
        make_cover(X, [[0, 1]])
    with pytest.raises(GeometryError, match="diameter"):
        make_cover(X, [[0, 1, 2, 3, 4]], epsilon=F(1, 2))


def test_nerve_of_one_set_is_constant():
    X, ts = segment_space(11)
    imgs = {i: (t, 2 * t) for i, t in zip(X.points, ts)}
    approx = nerve_approximation(X, imgs, make_cover(X, [X.points]))
    assert approx.dim == 0
    assert len(set(approx.point_images.values())) == 1
    assert approx.deviation_bound == 2  # image diameter
    assert approx.deviation <= approx.deviation_bound


def test_nerve_of_interval_cover_is_a_polyline():
    X, ts = segment_space(100)
    imgs = {i: (t, 0) for i, t in zip(X.points, ts)}
    cover = make_cover(X, [[i, i + 1] for i in range(99)])
    approx = nerve_approximation(X, imgs, cover)
    assert approx.dim == 1
    assert all(len(s) <= 2 for s in approx.nerve.maximal())
    actual = max(max(abs(a - b) for a, b in zip(approx.point_images[p], imgs[p])) for p in X.points)
    assert actual == approx.deviation <= approx.deviation_bound


def test_nerve_of_disjoint_sets_is_two_points():
    X, ts = segment_space(6)
    imgs = {i: (t,) for i, t in zip(X.points, ts)}
    approx = nerve_approximation(X, imgs, make_cover(X, [[0, 1, 2], [3, 4, 5]]))
    assert approx.dim == 0
    assert len(set(approx.point_images.values())) == 2


def test_separating_translation_examples():
    v = separating_translation([[point(0)]], [[point(0)]], F(1, 2))
    assert v != (0,) and abs(v[0]) < F(1, 2)
    a = [point(-1, 0, 0), point(1, 0, 0)]
    b = [point(0, -1, 0), point(0, 1, 0)]
    v = separating_translation([a], [b], "0.1", rng_seed=4)
    assert max(abs(x) for x in v) < F(1, 10)
    shifted = [tuple(p + d for p, d in zip(q, v)) for q in a]
    assert not simplex_pair_intersects(shifted, b)
    with pytest.raises(DimensionGateError):
        separating_translation([a], [[point(0, 0, -1), point(1, 0, 1), point(0, 1, 1)]], "0.1")


def test_translation_budget_exhausted():
    with pytest.raises(RetryBudgetExhausted):
        separating_translation([[point(0)]], [[point(0)]], 1, max_attempts=0)


def sampled_segment(N, fn):
    ts = [F(i, N) for i in range(-N, N + 1)]
    dist = [[abs(a - b) for b in ts] for a in ts]
    cover = [[i, i + 1] for i in range(len(ts) - 1)]
    return sampled_map(list(range(len(ts))), dist, [fn(t) for t in ts], cover)


def test_refutation_of_skew_segments():
    A = sampled_segment(20, lambda t: (t, 0, 0))
    B = sampled_segment(20, lambda t: (0, t, 0))
    for seed in range(3):
        w = refute_essential(A, B, "0.2", rng_seed=seed)
        assert w.verify(A, B)
        assert w.dist_f < F(1, 5) and w.dist_g < F(1, 5)
        assert max(abs(x) for x in w.v) < F(1, 10)


def test_point_against_arc():
    pt = sampled_map(["p"], [[0]], [(0, 0)], [["p"]])
    arc = sampled_segment(4, lambda t: (t / 100, (t / 100) ** 2))
    w = refute_essential(pt, arc, "0.01")
    assert w.verify(pt, arc) and w.dims == (0, 1)


def test_curves_in_the_plane_hit_the_gate():
    A = sampled_segment(10, lambda t: (t, 0))
    B = sampled_segment(10, lambda t: (0, t))
    with pytest.raises(DimensionGateError):
        refute_essential(A, B, "0.2")


def test_coarse_cover_is_reported():
    A = sampled_segment(2, lambda t: (t, 0, 0))
    B = sampled_segment(2, lambda t: (0, t, 0))
    with pytest.raises(CoverTooCoarse):
        refute_essential(A, B, "0.2")
