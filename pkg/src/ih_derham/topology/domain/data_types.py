from __future__ import annotations

from enum import StrEnum
from typing import Annotated, Literal

from pydantic import BaseModel, Field, field_validator

VertexId = Annotated[int, Field(ge=0, strict=True)]
Scalar = str | int | float


class Coefficients(StrEnum):
    INTEGERS = "int"
    RATIONALS = "rat"


class ComplexDocument(BaseModel):
    """The shared complex file format (JSON or YAML)."""

    facets: list[list[VertexId]] = Field(..., description="Generating faces, each a list of vertex ids.")
    strata: list[list[list[VertexId]]] | None = Field(
        None, description="Filtration terms X_{l-2}, X_{l-3}, ... (outermost first), each a list of faces."
    )
    weights: dict[str, Scalar] | None = Field(
        None, description='Mass weight per face; keys are sorted vertex ids joined by "-".'
    )
    coordinates: dict[str, list[Scalar]] | None = Field(None, description="Vertex id -> Euclidean coordinates.")

    @field_validator("weights", "coordinates", mode="before")
    @classmethod
    def _keys_as_text(cls, value: object) -> object:
        # YAML reads `0: [1, 2]` with an int key
        if isinstance(value, dict):
            return {k if isinstance(k, str) else str(k): v for k, v in value.items()}
        return value


class HomologyGroup(BaseModel):
    degree: int = Field(..., description="Homological degree k.")
    betti: int = Field(..., ge=0, description="Rank of the free part.")
    torsion: list[int] = Field(default_factory=list, description="Invariant factors >= 2, divisibility chain.")


class HomologyResult(BaseModel):
    coefficients: Coefficients = Coefficients.INTEGERS
    groups: list[HomologyGroup] = Field(default_factory=list)

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(g.betti for g in self.groups)

    @property
    def reduced_betti(self) -> tuple[int, ...]:
        if not self.groups:
            return ()
        return (self.groups[0].betti - 1, *self.betti[1:])

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** g.degree * g.betti for g in self.groups)

    def torsion(self, degree: int) -> list[int]:
        for g in self.groups:
            if g.degree == degree:
                return list(g.torsion)
        return []


class RidgeViolation(BaseModel):
    face: list[int]
    facet_count: int = Field(..., description="Number of facets containing the (l-1)-face; must be 2.")


class PseudomanifoldReport(BaseModel):
    is_pseudomanifold: bool
    dimension: int
    impure_faces: list[list[int]] = Field(default_factory=list, description="Facets below the top dimension.")
    bad_ridges: list[RidgeViolation] = Field(default_factory=list)
    strongly_connected: bool = Field(False, description="Informational only; not part of the predicate.")
    facet_components: int = 0


class NormalityReport(BaseModel):
    is_normal: bool
    bad_vertices: list[int] = Field(default_factory=list, description="Vertices whose link is disconnected.")


class ExcludedFace(BaseModel):
    face: list[int]
    codimension: int = Field(..., description="k of the violated stratum X_{l-k}.")
    intersection_dimension: int = Field(..., description="dim of the largest face of sigma inside X_{l-k}.")


class AllowabilityReport(BaseModel):
    degree: int
    allowed: list[list[int]] = Field(default_factory=list)
    excluded: list[ExcludedFace] = Field(default_factory=list)


class ProjectionReport(BaseModel):
    ok: bool
    simplicial: bool
    surjective: bool
    facet_bijection: bool
    ridge_single_sheet: bool
    finite_sheets: bool
    bijective_off_singular: bool
    violations: list[str] = Field(default_factory=list)


class DerhamReport(BaseModel):
    ih_top: HomologyResult
    normalization_cohomology: HomologyResult
    match: bool
    heuristic_stratification: bool
    singular_faces: list[list[int]] = Field(default_factory=list)
    regular_components: int = Field(..., description="Connected components of the regular part |X| - |Sigma|.")
    normalization_h0: int = Field(..., description="Rank of H^0 of the normalization over the rationals.")


class CheckResult(BaseModel):
    dimension: int
    f_vector: list[int]
    components: int
    is_pseudomanifold: bool
    is_normal: bool | None = Field(None, description="Only evaluated for pseudomanifolds.")
    bad_vertices: list[int] = Field(default_factory=list)
    pseudomanifold: PseudomanifoldReport


class IntersectionResult(BaseModel):
    perversity: dict[int, int] = Field(..., description="k -> p(k) for k = 2..l.")
    heuristic_stratification: bool
    singular_faces: list[list[int]] = Field(default_factory=list)
    homology: HomologyResult


class NormalizeResult(BaseModel):
    normalized: ComplexDocument
    projection: dict[str, str] = Field(..., description="Face of the normalization -> face of the input.")
    sheet_count: dict[str, int] = Field(..., description="Face of the input -> number of preimage faces.")
    components: int
    check: ProjectionReport


class FlatNormReport(BaseModel):
    value: str = Field(..., description='Exact flat norm as "p/q".')
    mass: str = Field(..., description="Mass of the input chain.")
    A: dict[str, str] = Field(default_factory=dict, description="Witness (d+1)-chain.")
    R: dict[str, str] = Field(default_factory=dict, description="Residual d-chain, T = R + dA.")
    oracle: str | None = Field(None, description="Brute-force value over bounded integer A, when requested.")


class ExpectedInvariants(BaseModel):
    """Reference values attached to a corpus entry, with where they came from."""

    betti: list[int] | None = None
    torsion: dict[int, list[int]] = Field(default_factory=dict)
    pseudomanifold: bool | None = None
    normal: bool | None = None
    components: int | None = None
    normalization_betti: list[int] | None = None
    provenance: Literal["known", "derived"] = Field(
        "derived", description="known: standard values for the space; derived: worked out from the construction."
    )


class TopologyError(Exception):
    code: str = "topology_error"

    def __init__(self, message: str):
        super().__init__(message)


class ValidationError(TopologyError):
    code = "validation_error"


class ParseError(ValidationError):
    code = "parse_error"


class InvalidPerversityError(ValidationError):
    code = "invalid_perversity"


class NotFoundError(TopologyError):
    code = "not_found"


class NotAFaceError(TopologyError):
    code = "not_a_face"


class PreconditionError(TopologyError):
    code = "precondition_failed"


class ChainComplexError(TopologyError):
    code = "not_a_complex"


class OracleTooLargeError(TopologyError):
    code = "oracle_too_large"
