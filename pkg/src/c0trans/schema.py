"""JSON schemas for scene files and command results.

Exact scalars travel as strings (``"3/4"``, ``"0.25"``) or JSON integers;
JSON floats are refused so that nothing exact is ever rounded on the way in.
Results carry every exact value as ``{"exact": "p/q", "decimal": x}``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

from .exact import to_fraction

SCHEMA_VERSION = 1


def _rational(value: Any) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError("exact scalars must be strings like '3/4' or '0.25', or integers")
    if isinstance(value, (int, str, Fraction)):
        return to_fraction(value)
    raise ValueError(f"expected a rational string, got {type(value).__name__}")


Rational = Annotated[Any, BeforeValidator(_rational)]
Vector = list[Rational]
PointId = Union[int, str]


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)


class Versioned(Strict):
    schema_version: Literal[1] = SCHEMA_VERSION


# --------------------------------------------------------------------------
# Inputs


class CertifyInput(Versioned):
    n: int = Field(ge=1)
    k: int = Field(ge=0)
    nu: Rational
    disk_subdivisions: int = Field(ge=1)
    disk_images: list[Vector]
    seed: int = 0

    @model_validator(mode="after")
    def _dims(self):
        if self.k >= self.n:
            raise ValueError(f"need k < n, got k={self.k}, n={self.n}")
        for i, img in enumerate(self.disk_images):
            if len(img) != self.n:
                raise ValueError(f"disk_images[{i}] has {len(img)} coordinates, expected {self.n}")
        return self


class SampledInput(Strict):
    points: list[PointId]
    dist_matrix: list[list[Rational]]
    images: list[Vector]
    cover: list[list[PointId]]
    lebesgue: Optional[Rational] = None

    @model_validator(mode="after")
    def _shape(self):
        m = len(self.points)
        if len(self.dist_matrix) != m or any(len(r) != m for r in self.dist_matrix):
            raise ValueError(f"dist_matrix must be {m} x {m}")
        if len(self.images) != m:
            raise ValueError(f"expected {m} images, got {len(self.images)}")
        return self


class RefuteInput(Versioned):
    n: int = Field(ge=1)
    delta: Rational
    A: SampledInput
    B: SampledInput
    seed: int = 0


class ComplexSpec(Strict):
    name: str
    vertices: list[Vector]
    simplices: list[list[int]]


class MapSpec(Strict):
    name: str
    domain: str
    images: list[Vector]


class CycleSpec(Strict):
    """An oriented cycle on a named map (or complex); the order of each
    listed simplex is its orientation."""

    name: str
    map: str
    simplices: list[list[int]]
    coefficients: Optional[list[int]] = None


class GeometryScene(Versioned):
    dim: int = Field(ge=1)
    complexes: list[ComplexSpec] = []
    maps: list[MapSpec] = []
    cycles: list[CycleSpec] = []
    pair: Optional[tuple[str, str]] = None
    seed: int = 0

    @model_validator(mode="after")
    def _names(self):
        names = [c.name for c in self.complexes] + [m.name for m in self.maps]
        if len(set(names)) != len(names):
            raise ValueError("complex and map names must be distinct")
        return self


class DimInput(Versioned):
    points: Optional[list[PointId]] = None
    coordinates: Optional[list[Vector]] = None
    dist_matrix: Optional[list[list[Rational]]] = None
    epsilons: list[Rational]
    lebesgue: Optional[Rational] = None

    @model_validator(mode="after")
    def _source(self):
        if (self.coordinates is None) == (self.dist_matrix is None):
            raise ValueError("give exactly one of 'coordinates' or 'dist_matrix'")
        return self


class SakaiInput(Versioned):
    K: list[Vector]
    L: list[Vector]
    p: Vector
    radii: list[Rational]
    squeeze_epsilons: list[Rational] = []


INPUTS = {
    "certify": CertifyInput,
    "refute": RefuteInput,
    "probe": GeometryScene,
    "link": GeometryScene,
    "dim": DimInput,
    "sakai": SakaiInput,
}


# --------------------------------------------------------------------------
# Results


class Exact(Strict):
    exact: str
    decimal: float


ExactVector = list[Exact]


class Result(Strict):
    schema_version: Literal[1] = SCHEMA_VERSION
    command: str


class MarginsOut(Strict):
    m_sphere_to_JA: Exact
    m_nu: Exact
    m_separation: Exact


class CertifyResult(Result):
    command: Literal["certify"] = "certify"
    verdict: Literal["certified", "rejected"]
    kappa: int
    delta: Optional[Exact]
    margins: Optional[MarginsOut]
    cond5: bool
    cond6: bool
    reason: Optional[str]
    chart_note: str


class PLMapOut(Strict):
    simplices: list[list[int]]
    images: dict[str, ExactVector]


class RefuteResult(Result):
    command: Literal["refute"] = "refute"
    verdict: Literal["refuted"] = "refuted"
    delta_used: Exact
    v: ExactVector
    dist_f: Exact
    dist_g: Exact
    dims: tuple[int, int]
    f_tilde: PLMapOut
    g_tilde: PLMapOut
    verified: bool


class ProbeResult(Result):
    command: Literal["probe"] = "probe"
    verdict: Literal["refuted", "no-witness"]
    statement: str
    trials: int
    intersecting: int
    delta: Exact
    seed: int
    strategy: str
    witness_trial: Optional[int]
    witness: Optional[tuple[PLMapOut, PLMapOut]]


class LinkResult(Result):
    command: Literal["link"] = "link"
    value: int
    separation: Exact
    stability_radius: Exact
    apex: ExactVector


class DimEntry(Strict):
    epsilon: Exact
    bound: int


class DimResult(Result):
    command: Literal["dim"] = "dim"
    note: str
    bounds: list[DimEntry]


class SqueezeOut(Strict):
    epsilon: Exact
    norm: Exact
    side: str
    verified: bool
    original: list[ExactVector]
    pushed: list[ExactVector]


class RadiusOut(Strict):
    radius: Exact
    meets_plus: Optional[bool]
    meets_minus: Optional[bool]
    transverse_at_a: Optional[bool]
    K_spans: bool
    L_spans: bool
    sign_changes: int
    smallest_sign_change: Optional[ExactVector]
    smallest_sign_change_abscissa: Optional[Exact]
    error: Optional[str]
    squeeze: list[SqueezeOut] = []


class SakaiResult(Result):
    command: Literal["sakai"] = "sakai"
    verdicts: list[RadiusOut]
    all_transverse: bool


class ExampleEntry(Strict):
    name: str
    command: str
    description: str


class ExamplesResult(Result):
    command: Literal["examples"] = "examples"
    examples: list[ExampleEntry]


RESULTS = {
    "certify": CertifyResult,
    "refute": RefuteResult,
    "probe": ProbeResult,
    "link": LinkResult,
    "dim": DimResult,
    "sakai": SakaiResult,
    "examples": ExamplesResult,
}


def result_schema(command: str) -> dict:
    """Published JSON schema of a command's result document."""
    return RESULTS[command].model_json_schema()
