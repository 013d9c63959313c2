import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from c0trans.sakai2d import (
    MINUS,
    ON,
    PLUS,
    Polyline,
    QuadRoot,
    SakaiError,
    component_in_disk,
    oscillating_curve,
    oscillating_y,
    sakai_check,
    side_classifier,
    squeeze_out,
)
from oracles import ray_parity_side

F = Fraction
X_AXIS = Polyline.of([[-1, 0], [1, 0]])
PARABOLA = Polyline.of([[F(i, 10), F(i, 10) ** 2] for i in range(-10, 11)])
ORIGIN = (F(0), F(0))


def test_polyline_rejects_repeated_vertices():
    with pytest.raises(SakaiError):
        Polyline.of([[0, 0], [0, 0], [1, 1]])


def test_quadroot_comparisons_and_enclosures():
    r = QuadRoot(F(1), F(0), F(2), 1)  # sqrt(2)/2
    assert r.cmp(F(7, 10)) > 0 and r.cmp(F(71, 100)) < 0
    lo, hi = r.enclose(30)
    assert lo < F(math.sqrt(2) / 2) < hi and hi - lo < F(1, 2 ** 28)
    neg = QuadRoot(F(1), F(0), F(2), -1)
    assert neg.cmp(F(-7, 10)) < 0 and neg.cmp(0) < 0


def test_component_of_axis_in_unit_disk():
    arc = component_in_disk(Polyline.of([[-2, 0], [2, 0]]), ORIGIN, 1)
    assert arc.spanning
    assert arc.rational_hull().vertices == ((-1, 0), (1, 0))


def test_component_keeps_only_the_branch_through_p():
    U = Polyline.of([[-2, 0], [2, 0], [2, "1/2"], [-2, "1/2"]])
    arc = component_in_disk(U, ORIGIN, "7/10")
    assert arc.first == arc.last == 0 and arc.spanning
    xs = [float(v[0]) for v in arc.rational_hull().vertices]
    assert xs == pytest.approx([-0.7, 0.7], abs=1e-9)


def test_large_radius_gives_whole_curve_not_spanning():
    arc = component_in_disk(X_AXIS, ORIGIN, 5)
    assert not arc.spanning
    assert arc.rational_hull().vertices == X_AXIS.vertices


def test_point_must_lie_on_curve():
    with pytest.raises(SakaiError):
        component_in_disk(X_AXIS, (0, 1), 1)


def test_side_classifier_on_a_diameter():
    cls = side_classifier(component_in_disk(X_AXIS, ORIGIN, 1))
    assert cls((0, "1/2")) == PLUS
    assert cls((0, "-1/2")) == MINUS
    assert cls(("1/3", 0)) == ON
    with pytest.raises(SakaiError):
        cls((0, 2))


def test_side_classifier_needs_spanning_arc():
    with pytest.raises(SakaiError):
        side_classifier(component_in_disk(X_AXIS, ORIGIN, 5))


S_CURVE = Polyline.of([[-2, "-1/5"], ["-1/2", "-1/5"], ["-1/4", "1/2"], ["1/4", "-1/2"],
                       ["1/2", "1/5"], [2, "1/5"]])


def test_s_shaped_arc_agrees_with_ring_oracle():
    arc = component_in_disk(S_CURVE, ORIGIN, "9/10")
    cls = side_classifier(arc)
    hull = [tuple(map(float, v)) for v in arc.rational_hull().vertices]
    rng = np.random.default_rng(8)
    seen = set()
    checked = 0
    while checked < 300:
        x, y = rng.uniform(-0.9, 0.9, size=2)
        if x * x + y * y > 0.85 ** 2:
            continue
        q = (F(round(x * 1000), 1000), F(round(y * 1000), 1000))
        near = min(_seg_dist(q, hull[i], hull[i + 1]) for i in range(len(hull) - 1))
        if near < 1e-3:
            continue
        side = cls(q)
        seen.add(side)
        assert side == ray_parity_side(q, hull, (0.0, 0.0), 0.9)
        checked += 1
    assert seen == {PLUS, MINUS}


def _seg_dist(q, a, b):
    q = np.array(list(map(float, q)))
    a, b = np.array(a), np.array(b)
    t = np.clip(np.dot(q - a, b - a) / np.dot(b - a, b - a), 0, 1)
    return float(np.linalg.norm(q - (a + t * (b - a))))


@given(st.fractions(-1, 1, max_denominator=16), st.fractions(-1, 1, max_denominator=16))
def test_classifier_partitions_the_disk(x, y):
    cls = side_classifier(component_in_disk(S_CURVE, ORIGIN, "9/10"))
    if x * x + y * y >= F(81, 100):
        return
    assert cls((x, y)) in (PLUS, MINUS, ON)


def test_crossing_lines_are_transverse():
    L = Polyline.of([[0, -1], [0, 1]])
    out = sakai_check(X_AXIS, L, ORIGIN, [1, "1/2", "1/4"])
    assert all(v.transverse_at_a for v in out)


def test_parabola_is_one_sided():
    out = sakai_check(X_AXIS, PARABOLA, ORIGIN, [1, "1/2", "1/4"])
    for v in out:
        assert v.meets_plus and not v.meets_minus and not v.transverse_at_a


def test_oscillating_is_transverse_at_small_radius():
    L = oscillating_curve(1, "1/1000")
    (v,) = sakai_check(X_AXIS, L, ORIGIN, ["1/5"])
    assert v.transverse_at_a
    assert min(float(c[0]) for c in v.sign_changes) < 0.2


def test_non_spanning_radius_is_reported_not_raised():
    (v,) = sakai_check(X_AXIS, Polyline.of([[0, -1], [0, 1]]), ORIGIN, [3])
    assert v.transverse_at_a is None and "span" in v.error


def test_p_must_be_on_both_curves():
    with pytest.raises(SakaiError):
        sakai_check(X_AXIS, Polyline.of([[0, 1], [1, 1]]), ORIGIN, [1])


slopes = st.fractions(-4, 4, max_denominator=6)


@given(slopes, slopes, st.sampled_from([F(1, 2), F(1, 3), F(1)]))
def test_verdict_is_symmetric_for_lines(m1, m2, a):
    K = Polyline.of([[-2, -2 * m1], [2, 2 * m1]])
    L = Polyline.of([[-2, -2 * m2], [2, 2 * m2]])
    (kl,) = sakai_check(K, L, ORIGIN, [a])
    (lk,) = sakai_check(L, K, ORIGIN, [a])
    assert kl.transverse_at_a == lk.transverse_at_a == (m1 != m2)


def test_verdict_is_symmetric_for_parabola():
    (kl,) = sakai_check(X_AXIS, PARABOLA, ORIGIN, ["1/2"])
    (lk,) = sakai_check(PARABOLA, X_AXIS, ORIGIN, ["1/2"])
    assert kl.transverse_at_a == lk.transverse_at_a is False


def test_squeeze_parabola_for_a_decreasing_schedule():
    Kp = component_in_disk(X_AXIS, ORIGIN, "1/2")
    Lp = component_in_disk(PARABOLA, ORIGIN, "1/2")
    for k in range(1, 7):
        w = squeeze_out(Kp, Lp, F(1, 10 ** k))
        assert w.verify() and w.side == PLUS
        assert w.norm < F(1, 10 ** k)


def test_squeeze_of_disjoint_arc_is_identity():
    Kp = component_in_disk(X_AXIS, ORIGIN, 1)
    Lp = component_in_disk(Polyline.of([[-1, "1/2"], [1, "1/2"]]), (0, "1/2"), "1/4")
    w = squeeze_out(Kp, Lp, "1/100")
    assert w.norm == 0 and w.original == w.pushed


def test_squeeze_of_shared_segment():
    L = Polyline.of([[-1, 1], ["-1/2", 0], ["1/2", 0], [1, 1]])
    Kp = component_in_disk(X_AXIS, ORIGIN, "3/4")
    Lp = component_in_disk(L, ORIGIN, "3/4")
    w = squeeze_out(Kp, Lp, "1/1000")
    assert w.verify()
    assert all(p[1] > 0 for p in w.pushed.images.values())


def test_squeeze_refuses_two_sided_arc():
    Kp = component_in_disk(X_AXIS, ORIGIN, 1)
    Lp = component_in_disk(Polyline.of([[0, -1], [0, 1]]), ORIGIN, 1)
    with pytest.raises(SakaiError, match="both sides"):
        squeeze_out(Kp, Lp, "0.1")


@given(st.lists(st.tuples(st.integers(1, 20), st.integers(0, 20)), min_size=2, max_size=6),
       st.integers(1, 6))
def test_squeeze_is_sound_for_one_sided_polylines(steps, k):
    # a polyline through the origin staying in the closed upper half plane
    xs, ys = [F(0)], [F(0)]
    for dx, y in steps:
        xs.append(xs[-1] + F(dx, 40))
        ys.append(F(y, 80))
    left = [(-x, y) for x, y in zip(xs[1:], ys[1:])][::-1]
    L = Polyline.of(left + list(zip(xs, ys)))
    Kp = component_in_disk(X_AXIS, ORIGIN, "1/2")
    Lp = component_in_disk(L, ORIGIN, "1/2")
    w = squeeze_out(Kp, Lp, F(1, 10 ** k))
    assert w.verify()


def test_oscillating_samples():
    C = oscillating_curve(1, "1/100")
    assert all(y == 0 for x, y in C.vertices if x <= 0)
    assert float(C.vertices[-1][1]) == pytest.approx(math.exp(-1) * math.sin(1), abs=1e-12)
    assert oscillating_y(1.0) == pytest.approx(0.30956, abs=1e-5)
    signs = [math.copysign(1, oscillating_y(2 / (math.pi * (2 * m + 1)))) for m in range(2, 7)]
    assert signs == [(-1) ** m for m in range(2, 7)]
    with pytest.raises(SakaiError):
        oscillating_curve(1, 2)
