"""Decide, certify and refute C0 transversality of PL subsets of R^n."""

from .certify import (
    Certificate,
    FlatChartScene,
    build_JA,
    build_plate,
    certified_delta,
    certify_transverse,
    check_condition_T,
    make_scene,
)
from .linking import LinkingResult, cone_apex_search, image_separation, linking_number
from .plcore import (
    GeometryError,
    OrientedCycle,
    PLMap,
    SimplicialComplex,
    boundary_cycle,
    c0_distance,
    cheb_dist,
    freudenthal_cube,
    simplex_pair_intersects,
)
from .probe import ProbeReport, probe_essential, random_perturbation
from .refute import (
    Cover,
    FiniteMetricSpace,
    RefutationWitness,
    cover_dimension_bound,
    nerve_approximation,
    refute_essential,
    sampled_map,
    separating_translation,
)
from .sakai2d import (
    Polyline,
    component_in_disk,
    oscillating_curve,
    sakai_check,
    side_classifier,
    squeeze_out,
)

__version__ = "0.1.0"
