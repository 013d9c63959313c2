"""The seven acceptance criteria, each at its stated tolerance and time limit."""

import math
import time
from fractions import Fraction

import numpy as np

from c0trans.certify import certify_transverse, make_scene, perturbation_pair, scene_from_function
from c0trans.linking import linking_number
from c0trans.plcore import (
    PLMap,
    SimplicialComplex,
    c0_distance,
    cycle_from,
    freudenthal_cube,
    simplex_pair_intersects,
)
from c0trans.probe import probe_essential
from c0trans.refute import (
    FiniteMetricSpace,
    make_cover,
    nerve_approximation,
    refute_essential,
    sampled_map,
)
from c0trans.sakai2d import Polyline, component_in_disk, oscillating_curve, sakai_check, squeeze_out
from oracles import frac_points, gauss_linking, segment_meets_triangle

F = Fraction


def test_1_certificate_soundness(criterion):
    t0 = time.perf_counter()
    scene = scene_from_function(2, 1, F(1, 4), 1, lambda x: (0, x[0]))
    cert = certify_transverse(scene)
    JA, disk = perturbation_pair(scene)
    delta = cert.delta * F(99, 100)
    witnesses = sum(probe_essential(JA, disk, delta, trials=10_000, rng_seed=seed).refuted
                    for seed in range(5))
    elapsed = time.perf_counter() - t0
    ok = abs(cert.kappa) == 1 and cert.delta == F(1, 16) and witnesses == 0 and elapsed < 30
    criterion(1, "certificate soundness", ok,
              f"kappa={cert.kappa}, delta={cert.delta}, witnesses={witnesses} in 5x10^4 trials, "
              f"{elapsed:.1f}s < 30s")
    assert ok


def _polygon(pts):
    n = len(pts)
    edges = [(i, (i + 1) % n) for i in range(n)]
    cx = SimplicialComplex.from_simplices(edges)
    return cycle_from(PLMap(cx, dict(enumerate(pts))), [(e, 1) for e in edges])


def _ngon(center, u, v, n=16):
    return [tuple(F(f"{c + math.cos(2 * math.pi * i / n) * a + math.sin(2 * math.pi * i / n) * b:.6f}")
                  for c, a, b in zip(center, u, v)) for i in range(n)]


def test_2_linking_engine(criterion):
    t0 = time.perf_counter()
    P = _ngon((0, 0, 0), (1, 0, 0), (0, 1, 0))
    Q = _ngon((1, 0, 0), (1, 0, 0), (0, 0, 1))
    z1, z2 = _polygon(P), _polygon(Q)
    values = [linking_number(z1, z2, rng_seed=s).value for s in range(5)]
    gauss = gauss_linking(np.array(P, dtype=float), np.array(Q, dtype=float))
    flipped = linking_number(z1.reversed(), z2).value
    apart = linking_number(_polygon(_ngon((-2, 0, 0), (1, 0, 0), (0, 1, 0))),
                           _polygon(_ngon((2, 0, 0), (1, 0, 0), (0, 0, 1)))).value
    elapsed = time.perf_counter() - t0
    ok = (abs(values[0]) == 1 and len(set(values)) == 1 and abs(gauss - values[0]) < 1e-6
          and flipped == -values[0] and apart == 0 and elapsed < 10)
    criterion(2, "linking engine", ok,
              f"value={values[0]} for 5 apexes, gauss={gauss:.9f}, flipped={flipped}, "
              f"separated={apart}, {elapsed:.1f}s < 10s")
    assert ok


def _segment_samples(N, fn):
    ts = [F(i, N) for i in range(-N, N + 1)]
    dist = [[abs(a - b) for b in ts] for a in ts]
    return sampled_map(list(range(len(ts))), dist, [fn(t) for t in ts],
                       [[i, i + 1] for i in range(len(ts) - 1)])


def test_3_refutation(criterion):
    t0 = time.perf_counter()
    A = _segment_samples(20, lambda t: (t, 0, 0))
    B = _segment_samples(20, lambda t: (0, t, 0))
    skew_ok = 0
    for seed in range(10):
        w = refute_essential(A, B, "0.2", rng_seed=seed)
        skew_ok += w.verify(A, B) and w.dist_f < F(1, 5) and w.dist_g < F(1, 5)
    pt = sampled_map(["p"], [[0]], [(0, 0)], [["p"]])
    arcs_ok = 0
    for d in (F(1, 10), F(1, 100), F(1, 1000)):
        arc = _segment_samples(math.ceil(F(4, 100) / d), lambda t: (t / 100, (t / 100) ** 2))
        arcs_ok += refute_essential(pt, arc, d).verify(pt, arc)
    elapsed = time.perf_counter() - t0
    ok = skew_ok == 10 and arcs_ok == 3 and elapsed < 30
    criterion(3, "refutation", ok,
              f"skew segments verified for {skew_ok}/10 seeds, point-vs-arc {arcs_ok}/3 deltas, "
              f"{elapsed:.1f}s < 30s")
    assert ok


def test_4_sakai_equivalence(criterion):
    t0 = time.perf_counter()
    K = Polyline.of([[-1, 0], [1, 0]])
    origin = (F(0), F(0))
    radii = [F(1), F(1, 2), F(1, 4)]
    lines = sakai_check(K, Polyline.of([[0, -1], [0, 1]]), origin, radii)
    parabola = Polyline.of([[F(i, 10), F(i, 10) ** 2] for i in range(-10, 11)])
    par = sakai_check(K, parabola, origin, radii)
    squeezed = 0
    for a in radii:
        Kp, Lp = component_in_disk(K, origin, a), component_in_disk(parabola, origin, a)
        for k in range(1, 7):
            w = squeeze_out(Kp, Lp, F(1, 10 ** k))
            squeezed += w.verify() and w.norm < F(1, 10 ** k)
    (r3,) = sakai_check(K, oscillating_curve(1, F(1, 1000)), origin, [F(1, 5)])
    smallest = min(float(c[0]) for c in r3.sign_changes)
    elapsed = time.perf_counter() - t0
    ok = (all(v.transverse_at_a for v in lines) and not any(v.transverse_at_a for v in par)
          and squeezed == 18 and r3.transverse_at_a and smallest < 0.2 and elapsed < 60)
    criterion(4, "sakai equivalence", ok,
              f"lines transverse at {len(radii)} radii, parabola one-sided, "
              f"{squeezed}/18 squeeze witnesses, oscillating transverse with sign change at "
              f"x={smallest:.4f}, {elapsed:.1f}s < 60s")
    assert ok


def test_5_metric_and_pl_kernel(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    cube = freudenthal_cube(2, 1)
    dom = cube.complex
    c0_bad = 0
    for _ in range(1000):
        n = int(rng.integers(2, 4))
        Fm = PLMap(dom, dict(zip(dom.vertices, frac_points(rng, 4, n))))
        Gm = PLMap(dom, dict(zip(dom.vertices, frac_points(rng, 4, n))))
        d = c0_distance(Fm, Gm)
        fa = np.array([[float(c) for c in Fm.images[v]] for v in dom.vertices])
        ga = np.array([[float(c) for c in Gm.images[v]] for v in dom.vertices])
        vertex_max = np.max(np.abs(fa - ga))
        w = rng.dirichlet(np.ones(3), size=64)
        sampled = 0.0
        for s in dom.of_dim(2):
            idx = [dom.vertices.index(v) for v in s]
            diff = w @ (fa[idx] - ga[idx])
            sampled = max(sampled, float(np.max(np.abs(diff))))
        if float(d) != vertex_max or sampled > float(d) + 1e-12:
            c0_bad += 1
    disagreements = 0
    for _ in range(10_000):
        seg = frac_points(rng, 2, 2, den=4, lo=-8, hi=8)
        tri = frac_points(rng, 3, 2, den=4, lo=-8, hi=8)
        disagreements += simplex_pair_intersects(seg, tri) != segment_meets_triangle(seg, tri)
    elapsed = time.perf_counter() - t0
    ok = c0_bad == 0 and disagreements == 0 and elapsed < 60
    criterion(5, "metric and PL kernel", ok,
              f"c0 mismatches {c0_bad}/1000, intersection disagreements {disagreements}/10000, "
              f"{elapsed:.1f}s < 60s")
    assert ok


def test_6_nerve_approximation(criterion):
    t0 = time.perf_counter()
    ts = [F(i, 99) for i in range(100)]
    X = FiniteMetricSpace(list(range(100)), [[abs(a - b) for b in ts] for a in ts])
    images = {i: (t, t * t) for i, t in enumerate(ts)}
    cover = make_cover(X, [[i, i + 1] for i in range(99)])
    approx = nerve_approximation(X, images, cover)
    worst = max(max(abs(a - b) for a, b in zip(approx.point_images[p], images[p]))
                for p in X.points)
    elapsed = time.perf_counter() - t0
    ok = (cover.multiplicity == 2 and approx.dim == 1 and worst <= approx.deviation_bound
          and elapsed < 10)
    criterion(6, "nerve approximation", ok,
              f"dimension {approx.dim}, measured deviation {float(worst):.5f} <= bound "
              f"{float(approx.deviation_bound):.5f}, {elapsed:.1f}s < 10s")
    assert ok


def test_7_dimension_gate(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    shapes = [(2, 0), (3, 0), (3, 1)]
    nonzero, untouched = 0, 0
    for i in range(100):
        n, k = shapes[i % 3]
        m = n - k
        corners = frac_points(rng, m, n, den=8, lo=-8, hi=8)  # an (m-1)-simplex, l < n - k
        imgs = []
        for _ in range(2 ** m):
            w = [F(int(x)) for x in rng.integers(0, 9, size=m)]
            if sum(w) == 0:
                w[0] = F(1)
            tot = sum(w)
            imgs.append(tuple(sum(wj * c[j] for wj, c in zip(w, corners)) / tot for j in range(n)))
        cert = certify_transverse(make_scene(n, k, F(1, 4), 1, imgs), rng_seed=i)
        nonzero += cert.kappa != 0
        untouched += cert.cond5 and cert.cond6
    elapsed = time.perf_counter() - t0
    ok = nonzero == 0 and elapsed < 60
    criterion(7, "dimension gate", ok,
              f"kappa nonzero in {nonzero}/100 scenes ({untouched} reached the linking test), "
              f"{elapsed:.1f}s < 60s")
    assert ok
