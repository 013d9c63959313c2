"""Sufficient-condition certificates for delta-essential intersections.

Scenes are authored in flat chart coordinates: ``A`` is the coordinate plane
``R^k x 0`` near the origin and ``B`` is represented by a PL disk map
``f: [-1,1]^(n-k) -> R^n``. The chart itself is never computed; a chart-space
delta has to be pulled back to ambient coordinates by the caller.

A certificate states: for every PL perturbation ``h_A`` of the flat piece and
``h_B`` of the disk map that each move points by strictly less than ``delta``
(Chebyshev), the perturbed images still meet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exact import to_fraction
from .linking import LinkingResult, linking_number
from .plcore import (
    Cube,
    GeometryError,
    OrientedCycle,
    PLMap,
    Point,
    SimplicialComplex,
    boundary_cycle,
    freudenthal_cube,
    set_distance,
)


class InternalInconsistency(RuntimeError):
    """A margin that condition T guarantees positive came out nonpositive."""


@dataclass(frozen=True)
class FlatChartScene:
    n: int
    k: int
    nu: Fraction
    disk: Cube
    disk_map: PLMap
    chart_note: str = "coordinates are flat chart coordinates around the intersection point"

    def __post_init__(self):
        if not 0 <= self.k < self.n:
            raise GeometryError(f"need 0 <= k < n, got k={self.k}, n={self.n}")
        if self.nu <= 0:
            raise GeometryError("nu must be positive")
        if self.disk.m != self.n - self.k:
            raise GeometryError(f"disk must be {self.n - self.k}-dimensional")
        if self.disk_map.domain != self.disk.complex:
            raise GeometryError("disk_map is not defined on the disk triangulation")
        if self.disk_map.n != self.n:
            raise GeometryError(f"disk images must lie in R^{self.n}")

    @property
    def subdivisions(self) -> int:
        return self.disk.s

    def sphere(self) -> OrientedCycle:
        return boundary_cycle(self.disk, self.disk_map)


def make_scene(n: int, k: int, nu, disk_subdivisions: int,
               disk_images: Sequence[Sequence]) -> FlatChartScene:
    """Scene from images listed in the disk cube's vertex order."""
    cube = freudenthal_cube(n - k, disk_subdivisions) if 0 <= k < n else None
    if cube is None:
        raise GeometryError(f"need 0 <= k < n, got k={k}, n={n}")
    verts = cube.complex.vertices
    if len(disk_images) != len(verts):
        raise GeometryError(
            f"expected {len(verts)} disk images for a {n - k}-cube with "
            f"{disk_subdivisions} subdivisions, got {len(disk_images)}")
    images = {v: tuple(to_fraction(c) for c in img) for v, img in zip(verts, disk_images)}
    return FlatChartScene(n, k, to_fraction(nu), cube, PLMap(cube.complex, images))


def scene_from_function(n: int, k: int, nu, disk_subdivisions: int,
                        f: Callable[[Point], Sequence]) -> FlatChartScene:
    """Evaluate ``f`` on the reference coordinates of each disk vertex."""
    cube = freudenthal_cube(n - k, disk_subdivisions)
    imgs = [f(cube.coords.images[v]) for v in cube.complex.vertices]
    return make_scene(n, k, nu, disk_subdivisions, imgs)


# --------------------------------------------------------------------------


def build_JA(k: int, n: int, nu, s: int = 1) -> PLMap:
    """The flat box ``[-1-nu, 1+nu]^k x {0}^(n-k)`` as an embedded PL map.

    Uses the Freudenthal triangulation with ``s`` cells per axis; for ``k = 0``
    it is the single point at the origin.
    """
    nu = to_fraction(nu)
    if not 0 <= k < n:
        raise GeometryError(f"need 0 <= k < n, got k={k}, n={n}")
    if nu <= 0:
        raise GeometryError("nu must be positive")
    zero = Fraction(0)
    if k == 0:
        cx = SimplicialComplex.from_simplices([(0,)])
        return PLMap(cx, {0: (zero,) * n})
    cube = freudenthal_cube(k, s)
    half = 1 + nu
    images = {v: tuple(half * x for x in p) + (zero,) * (n - k)
              for v, p in cube.coords.images.items()}
    return PLMap(cube.complex, images)


def build_plate(k: int, n: int, nu, h_A: PLMap | None = None, s: int = 1) -> OrientedCycle:
    """The plate cycle over the boundary of ``I^(k+1)``, ``I = [-1-nu, 1+nu]``.

    A boundary point ``(a, t)`` goes to ``h_A(a, 0) + 3 (t - 1 - nu) e_(k+1)``:
    the top face ``t = 1 + nu`` is the (perturbed) flat box, the rest is the
    extrusion downwards with slope 3. The bottom face uses the same formula.
    With ``h_A`` omitted the box is the identity embedding.
    """
    nu = to_fraction(nu)
    flat = build_JA(k, n, nu, s)
    if h_A is None:
        h_A = flat
    elif h_A.domain != flat.domain:
        raise GeometryError("h_A must be defined on the triangulated flat box (same subdivision)")
    elif h_A.n != n:
        raise GeometryError(f"h_A must map into R^{n}")
    cube = freudenthal_cube(k + 1, 1 if k == 0 else s)
    half = 1 + nu
    flat_cube = freudenthal_cube(k, s) if k > 0 else None
    images = {}
    for v, ref in cube.coords.images.items():
        idx = cube.grid_index(v)
        base = h_A.images[flat_cube.vertex_id(idx[:k]) if k > 0 else 0]
        t = half * ref[k]
        drop = 3 * (t - 1 - nu)
        images[v] = tuple(x + drop if i == k else x for i, x in enumerate(base))
    return boundary_cycle(cube, PLMap(cube.complex, images))


@dataclass(frozen=True)
class ConditionT:
    cond5: bool
    cond6: bool
    kappa: int
    reason: str | None = None
    linking: LinkingResult | None = None
    sphere_to_flat: Fraction | None = None


def _inside_cube(pts, bound=Fraction(1)) -> bool:
    return all(abs(x) <= bound for p in pts for x in p)


def check_condition_T(scene: FlatChartScene, rng_seed: int = 0) -> ConditionT:
    """Exact check of the three parts of condition T.

    Containment in ``J = [-1,1]^n`` is checked on vertex images (a convex
    set contains a simplex iff it contains the vertices). The homological part
    is read off as the linking number of the boundary sphere with the plate.
    """
    imgs = list(scene.disk_map.images.values())
    if not _inside_cube(imgs):
        return ConditionT(False, False, 0, "disk image leaves the cube [-1,1]^n")
    sphere = scene.sphere()
    flat = build_JA(scene.k, scene.n, scene.nu)
    gap = set_distance(flat.pieces(), sphere.pieces())
    if gap == 0:
        return ConditionT(True, False, 0, "boundary sphere meets the flat box",
                          sphere_to_flat=gap)
    plate = build_plate(scene.k, scene.n, scene.nu)
    link = linking_number(sphere, plate, rng_seed=rng_seed)
    reason = None if link.value != 0 else "linking coefficient with the plate is zero"
    return ConditionT(True, True, link.value, reason, link, gap)


@dataclass(frozen=True)
class Margins:
    m_sphere_to_JA: Fraction
    m_nu: Fraction
    m_separation: Fraction


def certified_delta(scene: FlatChartScene, plate: OrientedCycle,
                    kappa_result: LinkingResult,
                    sphere_to_flat: Fraction | None = None) -> tuple[Fraction, Margins]:
    """``delta = min(dist(box, sphere), nu/2, separation(sphere, plate)) / 2``.

    Moving both sides by less than half of each gap keeps the perturbed
    sphere off the perturbed box, keeps the perturbed box boundary outside
    the cube, keeps the perturbed disk off the far part of ``R^k x 0``, and
    keeps the linking number fixed.
    """
    if kappa_result.value == 0:
        raise GeometryError("certified_delta needs a nonzero linking coefficient")
    if sphere_to_flat is None:
        flat = build_JA(scene.k, scene.n, scene.nu)
        sphere_to_flat = set_distance(flat.pieces(), scene.sphere().pieces())
    margins = Margins(sphere_to_flat, scene.nu / 2, kappa_result.separation)
    smallest = min(margins.m_sphere_to_JA, margins.m_nu, margins.m_separation)
    if smallest <= 0:
        raise InternalInconsistency(f"nonpositive margin {smallest} under condition T")
    return smallest / 2, margins


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "certified" | "rejected"
    kappa: int
    delta: Fraction | None
    margins: Margins | None
    cond5: bool
    cond6: bool
    reason: str | None = None
    separation: Fraction | None = None

    def __post_init__(self):
        if self.verdict == "certified":
            assert self.kappa != 0 and self.delta is not None and self.delta > 0
            assert self.cond5 and self.cond6


def certify_transverse(scene: FlatChartScene, rng_seed: int = 0) -> Certificate:
    cond = check_condition_T(scene, rng_seed)
    if cond.kappa == 0:
        return Certificate("rejected", 0, None, None, cond.cond5, cond.cond6, cond.reason)
    plate = build_plate(scene.k, scene.n, scene.nu)
    delta, margins = certified_delta(scene, plate, cond.linking, cond.sphere_to_flat)
    return Certificate("certified", cond.kappa, delta, margins, True, True,
                       separation=cond.linking.separation)


def perturbation_pair(scene: FlatChartScene, s: int = 1) -> tuple[PLMap, PLMap]:
    """The two maps a certificate speaks about: flat box and disk map."""
    return build_JA(scene.k, scene.n, scene.nu, s), scene.disk_map
