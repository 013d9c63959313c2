"""Linking numbers of disjoint oriented PL cycles of complementary dimension.

The value is the signed intersection number of the cone ``c * z1`` (a
``(p+1)``-chain bounding ``z1``) with ``z2``. Each cone simplex / ``z2``
simplex pair is solved as an ``n x n`` linear system in exact arithmetic; an
apex is accepted only if every meeting pair crosses at a single point interior
to both simplices.

Sign convention: a crossing of ``[c, v0..vp]`` with ``[w0..wq]`` counts
``sign det(v0-c, .., vp-c, w1-w0, .., wq-w0)`` times both chain coefficients,
with the standard basis of ``R^n`` positive. Only ``|value|`` carries meaning
independent of this choice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import det, solve_linear
from .plcore import (
    GeometryError,
    OrientedCycle,
    Point,
    bbox,
    bbox_gap,
    set_distance,
    simplex_pair_intersects,
    sub,
)

DEFAULT_APEX_ATTEMPTS = int(os.environ.get("C0TRANS_APEX_ATTEMPTS", "32"))


class DegenerateConfiguration(RuntimeError):
    """No generic cone apex was found within the retry budget."""


@dataclass(frozen=True)
class LinkingResult:
    value: int
    separation: Fraction
    stability_radius: Fraction
    apex: Point | None = None


def image_separation(z1: OrientedCycle, z2: OrientedCycle) -> Fraction:
    """Exact Chebyshev distance between the images of two cycles."""
    if z1.n != z2.n:
        raise GeometryError("cycles live in different ambient dimensions")
    return set_distance(z1.pieces(), z2.pieces())


def _cone_crossings(z1: OrientedCycle, z2: OrientedCycle, apex: Point) -> int | None:
    """Signed intersection count of ``apex * z1`` with ``z2``; ``None`` if any
    meeting pair is not a transverse interior crossing."""
    total = 0
    tau_list = [(pts, c, bbox(pts)) for pts, c in z2.embedded()]
    for sigma, c1 in z1.embedded():
        cone = (apex,) + sigma
        cone_box = bbox(cone)
        frame_c = [sub(v, apex) for v in sigma]
        for tau, c2, tau_box in tau_list:
            if bbox_gap(cone_box, tau_box) > 0:
                continue
            w0 = tau[0]
            frame_t = [sub(w, w0) for w in tau[1:]]
            cols = frame_c + [tuple(-x for x in f) for f in frame_t]
            rows = [[col[i] for col in cols] for i in range(len(apex))]
            sol = solve_linear(rows, sub(w0, apex))
            if sol is None:
                if simplex_pair_intersects(cone, tau):
                    return None
                continue
            alpha, beta = sol[: len(frame_c)], sol[len(frame_c):]
            bary_c = [1 - sum(alpha)] + alpha
            bary_t = [1 - sum(beta)] + beta
            if any(x < 0 for x in bary_c) or any(x < 0 for x in bary_t):
                continue
            if any(x == 0 for x in bary_c) or any(x == 0 for x in bary_t):
                return None
            d = det(rows=[[f[i] for f in frame_c + frame_t] for i in range(len(apex))])
            total += (1 if d > 0 else -1) * c1 * c2
    return total


def _check_pair(z1: OrientedCycle, z2: OrientedCycle) -> None:
    if z1.n != z2.n:
        raise GeometryError("cycles live in different ambient dimensions")
    if z1.chain and z2.chain and z1.cycle_dim + z2.cycle_dim != z1.n - 1:
        raise GeometryError(
            f"non-complementary dimensions: {z1.cycle_dim} + {z2.cycle_dim} != {z1.n} - 1")


def _random_apex(rng: np.random.Generator, lo: Point, hi: Point, resolution: int) -> Point:
    n = len(lo)
    center = [(a + b) / 2 for a, b in zip(lo, hi)]
    radius = max(max(b - a for a, b in zip(lo, hi)) / 2, Fraction(1)) + 1
    u = [Fraction(int(rng.integers(-resolution, resolution + 1)), resolution) for _ in range(n)]
    axis = int(rng.integers(n))
    u[axis] = Fraction(1) if rng.integers(2) else Fraction(-1)
    return tuple(c + 2 * radius * x for c, x in zip(center, u))


def _search(z1, z2, rng_seed, max_attempts, first_guess):
    pts = [p for piece in z1.pieces() + z2.pieces() for p in piece]
    if not pts:
        raise GeometryError("cannot place an apex for two empty cycles")
    lo, hi = bbox(pts)
    rng = np.random.default_rng(rng_seed)
    attempt = 0
    while attempt < max_attempts:
        if attempt == 0 and first_guess is not None:
            apex = tuple(first_guess)
        else:
            apex = _random_apex(rng, lo, hi, resolution=2 ** (10 + attempt))
        attempt += 1
        if not z2.chain:
            return apex, 0
        if all(lo[i] <= apex[i] <= hi[i] for i in range(len(apex))):
            continue
        value = _cone_crossings(z1, z2, apex)
        if value is not None:
            return apex, value
    raise DegenerateConfiguration(f"no generic apex after {max_attempts} attempts")


def cone_apex_search(z1: OrientedCycle, z2: OrientedCycle, rng_seed: int = 0,
                     max_attempts: int = DEFAULT_APEX_ATTEMPTS,
                     first_guess: Sequence[Fraction] | None = None) -> Point:
    """Find a rational apex outside both bounding boxes for which every cone
    crossing with ``z2`` is transverse.

    ``first_guess`` is tried before random candidates.
    """
    _check_pair(z1, z2)
    return _search(z1, z2, rng_seed, max_attempts, first_guess)[0]


def linking_number(z1: OrientedCycle, z2: OrientedCycle, rng_seed: int = 0,
                   max_attempts: int = DEFAULT_APEX_ATTEMPTS,
                   apex: Sequence[Fraction] | None = None) -> LinkingResult:
    """Linking number of ``z1`` (dim p) and ``z2`` (dim q) with ``p + q = n - 1``.

    ``stability_radius`` is half the image separation: moving both cycles by
    less than that keeps them disjoint along straight-line homotopies, so the
    value cannot change.
    """
    _check_pair(z1, z2)
    sep = image_separation(z1, z2)
    if sep == 0:
        raise GeometryError("cycles intersect; linking number undefined")
    if apex is not None:
        apex = tuple(apex)
        value = _cone_crossings(z1, z2, apex)
        if value is None:
            raise DegenerateConfiguration("given apex is not generic")
    else:
        apex, value = _search(z1, z2, rng_seed, max_attempts, None)
    return LinkingResult(value, sep, sep / 2, apex)
