"""Glue between validated scene files, the library, and result documents.

Each ``run_*`` returns the result model and a payload for the renderer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import certify, linking, probe, refute, sakai2d
from .exact import fmt
from .plcore import GeometryError, OrientedCycle, PLMap, SimplicialComplex, cycle_from
from .schema import (
    CertifyInput,
    CertifyResult,
    DimEntry,
    DimInput,
    DimResult,
    Exact,
    GeometryScene,
    LinkResult,
    MarginsOut,
    PLMapOut,
    ProbeResult,
    RadiusOut,
    RefuteInput,
    RefuteResult,
    SakaiInput,
    SakaiResult,
    SqueezeOut,
)


def ex(q: Fraction) -> Exact:
    return Exact(exact=fmt(q), decimal=float(q))


def exv(v: Sequence[Fraction]) -> list[Exact]:
    return [ex(x) for x in v]


def plmap_out(F: PLMap) -> PLMapOut:
    return PLMapOut(simplices=[list(s) for s in sorted(F.domain.maximal())],
                    images={str(v): exv(F.images[v]) for v in F.domain.vertices})


@dataclass
class Outcome:
    result: Any
    payload: dict


# --------------------------------------------------------------------------


def run_certify(inp: CertifyInput) -> Outcome:
    scene = certify.make_scene(inp.n, inp.k, inp.nu, inp.disk_subdivisions, inp.disk_images)
    cert = certify.certify_transverse(scene, rng_seed=inp.seed)
    margins = None
    if cert.margins is not None:
        m = cert.margins
        margins = MarginsOut(m_sphere_to_JA=ex(m.m_sphere_to_JA), m_nu=ex(m.m_nu),
                             m_separation=ex(m.m_separation))
    res = CertifyResult(verdict=cert.verdict, kappa=cert.kappa,
                        delta=ex(cert.delta) if cert.delta is not None else None,
                        margins=margins, cond5=cert.cond5, cond6=cert.cond6,
                        reason=cert.reason, chart_note=scene.chart_note)
    return Outcome(res, {"scene": scene, "certificate": cert})


# --------------------------------------------------------------------------


def _sampled(doc) -> refute.SampledMap:
    return refute.sampled_map(doc.points, doc.dist_matrix, doc.images, doc.cover,
                              doc.lebesgue)


def run_refute(inp: RefuteInput) -> Outcome:
    A, B = _sampled(inp.A), _sampled(inp.B)
    for name, M in (("A", A), ("B", B)):
        if M.n != inp.n:
            raise GeometryError(f"{name}.images live in R^{M.n}, scene says n={inp.n}")
    w = refute.refute_essential(A, B, inp.delta, rng_seed=inp.seed)
    res = RefuteResult(delta_used=ex(w.delta_used), v=exv(w.v), dist_f=ex(w.dist_f),
                       dist_g=ex(w.dist_g), dims=w.dims, f_tilde=plmap_out(w.f_tilde),
                       g_tilde=plmap_out(w.g_tilde), verified=w.verify(A, B))
    return Outcome(res, {"A": A, "B": B, "witness": w})


# --------------------------------------------------------------------------


class Scene:
    """Named PL maps and cycles of a geometry scene.

    A complex doubles as the identity map on its own vertex coordinates.
    """

    def __init__(self, doc: GeometryScene):
        self.doc = doc
        self.maps: dict[str, PLMap] = {}
        self.cycles: dict[str, OrientedCycle] = {}
        domains: dict[str, SimplicialComplex] = {}
        for c in doc.complexes:
            nv = len(c.vertices)
            for s in c.simplices:
                if not s or any(not 0 <= v < nv for v in s) or len(set(s)) != len(s):
                    raise GeometryError(f"complex {c.name!r}: bad simplex {s}")
            cx = SimplicialComplex.from_simplices(c.simplices)
            if set(cx.vertices) != set(range(nv)):
                raise GeometryError(f"complex {c.name!r}: every vertex must lie in a listed simplex")
            domains[c.name] = cx
            if all(len(v) == doc.dim for v in c.vertices):
                self.maps[c.name] = PLMap(cx, dict(enumerate(map(tuple, c.vertices))))
        for m in doc.maps:
            if m.domain not in domains:
                raise GeometryError(f"map {m.name!r}: unknown domain {m.domain!r}")
            cx = domains[m.domain]
            if len(m.images) != len(cx.vertices):
                raise GeometryError(f"map {m.name!r}: expected {len(cx.vertices)} images")
            if any(len(v) != doc.dim for v in m.images):
                raise GeometryError(f"map {m.name!r}: images must lie in R^{doc.dim}")
            self.maps[m.name] = PLMap(cx, dict(enumerate(map(tuple, m.images))))
        for z in doc.cycles:
            if z.map not in self.maps:
                raise GeometryError(f"cycle {z.name!r}: unknown map {z.map!r}")
            coeffs = z.coefficients or [1] * len(z.simplices)
            if len(coeffs) != len(z.simplices):
                raise GeometryError(f"cycle {z.name!r}: one coefficient per simplex")
            self.cycles[z.name] = cycle_from(self.maps[z.map], zip(z.simplices, coeffs))

    def pick(self, table: dict, what: str) -> tuple[Any, Any]:
        if self.doc.pair is not None:
            a, b = self.doc.pair
            for name in (a, b):
                if name not in table:
                    raise GeometryError(f"pair names unknown {what} {name!r}")
            return table[a], table[b]
        if len(table) != 2:
            raise GeometryError(f"scene must define exactly two {what}s or name a 'pair'")
        a, b = table.values()
        return a, b


def run_link(doc: GeometryScene) -> Outcome:
    scene = Scene(doc)
    z1, z2 = scene.pick(scene.cycles, "cycle")
    r = linking.linking_number(z1, z2, rng_seed=doc.seed)
    res = LinkResult(value=r.value, separation=ex(r.separation),
                     stability_radius=ex(r.stability_radius), apex=exv(r.apex))
    return Outcome(res, {"z1": z1, "z2": z2, "link": r})


def run_probe(doc: GeometryScene | CertifyInput, delta, trials: int, seed: int,
              strategy: str) -> Outcome:
    if isinstance(doc, CertifyInput):
        flat = certify.make_scene(doc.n, doc.k, doc.nu, doc.disk_subdivisions,
                                  doc.disk_images)
        F, G = certify.perturbation_pair(flat)
    else:
        scene = Scene(doc)
        F, G = scene.pick(scene.maps, "map")
    rep = probe.probe_essential(F, G, delta, trials=trials, rng_seed=seed, strategy=strategy)
    witness = None
    if rep.witness is not None:
        witness = (plmap_out(rep.witness[0]), plmap_out(rep.witness[1]))
    res = ProbeResult(verdict="refuted" if rep.refuted else "no-witness",
                      statement=rep.statement, trials=rep.trials,
                      intersecting=rep.intersecting, delta=ex(rep.delta), seed=rep.seed,
                      strategy=rep.strategy, witness_trial=rep.witness_trial, witness=witness)
    return Outcome(res, {"F": F, "G": G, "report": rep})


# --------------------------------------------------------------------------


def run_dim(inp: DimInput) -> Outcome:
    if inp.coordinates is not None:
        X = refute.FiniteMetricSpace.from_points(inp.coordinates, inp.points, inp.lebesgue)
    else:
        ids = inp.points if inp.points is not None else list(range(len(inp.dist_matrix)))
        X = refute.FiniteMetricSpace(ids, inp.dist_matrix, inp.lebesgue)
    bounds = []
    for eps in inp.epsilons:
        if eps <= 0:
            raise GeometryError("epsilons must be positive")
        bounds.append(DimEntry(epsilon=ex(eps), bound=refute.cover_dimension_bound(X, eps)))
    res = DimResult(note="heuristic upper bounds on the epsilon-scale covering dimension",
                    bounds=bounds)
    return Outcome(res, {"space": X})


# --------------------------------------------------------------------------


def run_sakai(inp: SakaiInput) -> Outcome:
    K = sakai2d.Polyline.of(inp.K)
    L = sakai2d.Polyline.of(inp.L)
    p = tuple(inp.p)
    if len(p) != 2:
        raise GeometryError("p must be a planar point")
    verdicts = sakai2d.sakai_check(K, L, p, inp.radii)
    out, squeezes = [], []
    for v in verdicts:
        near = sakai2d.smallest_sign_change(v, p)
        sq_out, sq = [], []
        if v.transverse_at_a is False and inp.squeeze_epsilons:
            Kp = sakai2d.component_in_disk(K, p, v.radius)
            Lp = sakai2d.component_in_disk(L, p, v.radius)
            for eps in inp.squeeze_epsilons:
                w = sakai2d.squeeze_out(Kp, Lp, eps)
                sq.append(w)
                sq_out.append(SqueezeOut(
                    epsilon=ex(w.epsilon), norm=ex(w.norm), side=w.side, verified=w.verify(),
                    original=[exv(w.original.images[i]) for i in w.original.domain.vertices],
                    pushed=[exv(w.pushed.images[i]) for i in w.pushed.domain.vertices]))
        squeezes.append(sq)
        out.append(RadiusOut(
            radius=ex(v.radius), meets_plus=v.meets_plus, meets_minus=v.meets_minus,
            transverse_at_a=v.transverse_at_a, K_spans=v.K_spans, L_spans=v.L_spans,
            sign_changes=len(v.sign_changes),
            smallest_sign_change=exv(near) if near else None,
            smallest_sign_change_abscissa=ex(near[0]) if near else None,
            error=v.error, squeeze=sq_out))
    res = SakaiResult(verdicts=out, all_transverse=all(v.transverse_at_a for v in verdicts))
    return Outcome(res, {"K": K, "L": L, "p": p, "verdicts": verdicts, "squeezes": squeezes})
