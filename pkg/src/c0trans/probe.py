"""Monte Carlo search for separating perturbations.

A witness (two perturbed maps within delta whose images are exactly
disjoint) proves that an intersection is *not* delta-essential. Finding no
witness proves nothing; reports say so.

Every trial draws from its own generator seeded by ``(seed, trial)``, so a
report does not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import to_fraction
from .plcore import GeometryError, PLMap, c0_distance, images_intersect

STRATEGIES = ("uniform", "boundary", "directional")
GRID = 2 ** 16


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def _draw(rng: np.random.Generator, n: int, delta: Fraction, strategy: str,
          direction: tuple[int, ...] | None = None) -> tuple[Fraction, ...]:
    ints = [int(x) for x in rng.integers(-GRID + 1, GRID, size=n)]
    if strategy == "boundary":
        axis = int(rng.integers(n))
        ints[axis] = GRID - 1 if rng.integers(2) else 1 - GRID
    elif strategy == "directional" and direction is not None:
        # mostly along a shared direction, with a little jitter
        ints = [d * GRID + (j // 8) for d, j in zip(direction, ints)]
        ints = [max(1 - GRID, min(GRID - 1, x)) for x in ints]
    return tuple(delta * Fraction(x, GRID) for x in ints)


def _perturb(F: PLMap, delta: Fraction, rng: np.random.Generator, strategy: str,
             direction=None) -> PLMap:
    if delta == 0:
        return F
    images = {}
    for v in F.domain.vertices:
        shift = _draw(rng, F.n, delta, strategy, direction)
        images[v] = tuple(a + b for a, b in zip(F.images[v], shift))
    return F.with_images(images)


def random_perturbation(F: PLMap, delta, rng_seed: int = 0,
                        strategy: str = "uniform") -> PLMap:
    """Displace each vertex image inside the Chebyshev ``delta``-ball.

    Offsets are multiples of ``delta / 2**16`` strictly inside the ball, so
    the C0 distance (a vertex maximum) stays below ``delta`` for ``delta > 0``.
    """
    delta = to_fraction(delta)
    if delta < 0:
        raise GeometryError("delta must be nonnegative")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(rng_seed)
    direction = _direction(rng, F.n) if strategy == "directional" else None
    return _perturb(F, delta, rng, strategy, direction)


def _direction(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    return tuple(int(x) for x in rng.choice([-1, 1], size=n))


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    intersecting: int
    witness: tuple[PLMap, PLMap] | None
    witness_trial: int | None
    delta: Fraction
    seed: int
    strategy: str

    @property
    def refuted(self) -> bool:
        return self.witness is not None

    @property
    def statement(self) -> str:
        if self.witness is not None:
            return ("refuted: separating perturbations within delta exist "
                    f"(found at trial {self.witness_trial})")
        return (f"no witness found in {self.trials} trials "
                "(evidence only; random search cannot prove essentiality)")


def verify_witness(F: PLMap, G: PLMap, Ft: PLMap, Gt: PLMap, delta) -> bool:
    """Exact recheck: both maps strictly within ``delta`` and images disjoint."""
    delta = to_fraction(delta)
    return (c0_distance(F, Ft) < delta and c0_distance(G, Gt) < delta
            and not images_intersect(Ft, Gt))


def probe_essential(F: PLMap, G: PLMap, delta, trials: int = 1000, rng_seed: int = 0,
                    strategy: str = "uniform", stop_at_witness: bool = True) -> ProbeReport:
    """Try ``trials`` random perturbation pairs and look for disjoint images.

    In the directional strategy ``F`` moves along a random sign vector and
    ``G`` along its negative, which is how well-separated pieces get pulled
    apart.
    """
    delta = to_fraction(delta)
    if F.n != G.n:
        raise GeometryError("maps live in different ambient dimensions")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    intersecting = 0
    witness = None
    witness_trial = None
    done = 0
    for trial in range(trials):
        rng = _trial_rng(rng_seed, trial)
        direction = _direction(rng, F.n) if strategy == "directional" else None
        Ft = _perturb(F, delta, rng, strategy, direction)
        opposite = tuple(-d for d in direction) if direction else None
        Gt = _perturb(G, delta, rng, strategy, opposite)
        done += 1
        if images_intersect(Ft, Gt):
            intersecting += 1
            continue
        if witness is None:
            assert verify_witness(F, G, Ft, Gt, delta)
            witness, witness_trial = (Ft, Gt), trial
            if stop_at_witness:
                break
    return ProbeReport(done, intersecting, witness, witness_trial, delta, rng_seed, strategy)
