from __future__ import annotations

import logging
from dataclasses import dataclass

from ih_derham.runtime.settings import ToolSettings
from ih_derham.topology.complex import (
    SimplicialComplex,
    connected_components,
    face_order,
    is_normal,
    is_pseudomanifold,
)
from ih_derham.topology.domain.data_types import (
    CheckResult,
    Coefficients,
    ComplexDocument,
    DerhamReport,
    FlatNormReport,
    HomologyResult,
    IntersectionResult,
    NormalizeResult,
    PreconditionError,
)
from ih_derham.topology.domain.repo import ComplexRepository
from ih_derham.topology.flatnorm import brute_force_flat_norm, flat_norm, mass
from ih_derham.topology.homology import boundary_matrices, cohomology, homology
from ih_derham.topology.intersection import (
    Stratification,
    default_stratification,
    intersection_homology,
    parse_perversity,
)
from ih_derham.topology.normalization import derham_verify, normalize, verify_projection
from ih_derham.topology.storage.documents import (
    chain_to_json,
    complex_to_document,
    document_digest,
    document_stratification,
    document_to_complex,
    document_weights,
    face_key,
    format_rational,
    parse_chain,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedComplex:
    document: ComplexDocument
    complex: SimplicialComplex
    digest: str


class TopologyService:
    def __init__(self, repo: ComplexRepository, settings: ToolSettings | None = None):
        self.repo = repo
        self.settings = settings if settings is not None else ToolSettings.load()

    # ----- Input -----
    def load(self, ref: str) -> LoadedComplex:
        doc = self.repo.load(ref)
        return LoadedComplex(document=doc, complex=document_to_complex(doc), digest=document_digest(doc))

    def stratification(self, loaded: LoadedComplex) -> Stratification:
        """The document's strata when present, the heuristic default otherwise."""
        explicit = document_stratification(loaded.document, loaded.complex)
        return explicit if explicit is not None else default_stratification(loaded.complex)

    # ----- Commands -----
    def check(self, loaded: LoadedComplex) -> CheckResult:
        cx = loaded.complex
        report = is_pseudomanifold(cx)
        normal = is_normal(cx) if report.is_pseudomanifold else None
        return CheckResult(
            dimension=cx.dimension,
            f_vector=list(cx.f_vector),
            components=len(connected_components(cx)),
            is_pseudomanifold=report.is_pseudomanifold,
            is_normal=normal.is_normal if normal is not None else None,
            bad_vertices=normal.bad_vertices if normal is not None else [],
            pseudomanifold=report,
        )

    def homology(self, loaded: LoadedComplex, coefficients: Coefficients | None = None) -> HomologyResult:
        return homology(boundary_matrices(loaded.complex), self._coefficients(coefficients))

    def cohomology(self, loaded: LoadedComplex, coefficients: Coefficients | None = None) -> HomologyResult:
        return cohomology(boundary_matrices(loaded.complex), self._coefficients(coefficients))

    def intersection_homology(
        self, loaded: LoadedComplex, perversity: str = "top", coefficients: Coefficients | None = None
    ) -> IntersectionResult:
        cx = loaded.complex
        if not is_pseudomanifold(cx).is_pseudomanifold:
            raise PreconditionError("pseudomanifold required")
        p = parse_perversity(perversity, cx.dimension)
        strat = self.stratification(loaded)
        logger.info("intersection homology, perversity %s, %s stratification", p.values, _origin(strat))
        result = intersection_homology(cx, strat, p, self._coefficients(coefficients))
        return IntersectionResult(
            perversity=p.as_dict(),
            heuristic_stratification=strat.heuristic,
            singular_faces=[list(f) for f in sorted(strat.singular.members, key=face_order)],
            homology=result,
        )

    def normalize(self, loaded: LoadedComplex) -> NormalizeResult:
        result = normalize(loaded.complex)
        check = verify_projection(result, self.stratification(loaded).singular)
        return NormalizeResult(
            normalized=complex_to_document(result.normalized),
            projection={face_key(f): face_key(img) for f, img in result.projection.items()},
            sheet_count={face_key(f): n for f, n in result.sheet_count.items()},
            components=result.components,
            check=check,
        )

    def flat_norm(self, loaded: LoadedComplex, chain: str, oracle_bound: int | None = None) -> FlatNormReport:
        weights = document_weights(loaded.document, loaded.complex, self.settings.volume_digits)
        t = parse_chain(chain, loaded.complex)
        result = flat_norm(t, weights)
        oracle = None
        if oracle_bound is not None:
            oracle = format_rational(brute_force_flat_norm(t, weights, oracle_bound, self.settings.oracle_cap))
        return FlatNormReport(
            value=format_rational(result.value),
            mass=format_rational(mass(t, weights)),
            A=chain_to_json(result.witness_A),
            R=chain_to_json(result.residual_R),
            oracle=oracle,
        )

    def verify(self, loaded: LoadedComplex) -> DerhamReport:
        explicit = document_stratification(loaded.document, loaded.complex)
        return derham_verify(loaded.complex, explicit)

    def _coefficients(self, coefficients: Coefficients | None) -> Coefficients:
        return coefficients if coefficients is not None else self.settings.default_coefficients


def _origin(strat: Stratification) -> str:
    return "heuristic" if strat.heuristic else "supplied"
