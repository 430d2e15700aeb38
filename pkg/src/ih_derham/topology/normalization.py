"""Normalization of a pseudomanifold by separating sheets along its codimension >= 2 faces.

One closed copy of every facet is taken, and the copies of every face of a
shared (l-1)-face are glued between its two facets. Nothing else is
identified; the resulting quotient is the normal pseudomanifold X~ with its
projection onto X.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations

from networkx.utils import UnionFind

from ih_derham.topology.complex import (
    Simplex,
    SimplicialComplex,
    Subcomplex,
    connected_components,
    face_order,
    faces_of,
    is_pseudomanifold,
)
from ih_derham.topology.domain.data_types import (
    Coefficients,
    DerhamReport,
    PreconditionError,
    ProjectionReport,
)
from ih_derham.topology.homology import boundary_matrices, cohomology
from ih_derham.topology.intersection import (
    Perversity,
    Stratification,
    default_stratification,
    intersection_homology,
    regular_components,
    top_perversity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NormalizationResult:
    source: SimplicialComplex
    normalized: SimplicialComplex
    projection: dict[Simplex, Simplex]
    sheet_count: dict[Simplex, int]
    vertex_origin: dict[int, tuple[int, int]]

    @property
    def components(self) -> int:
        return len(connected_components(self.normalized))


def normalize(complex: SimplicialComplex) -> NormalizationResult:
    if not is_pseudomanifold(complex).is_pseudomanifold:
        raise PreconditionError("pseudomanifold required")
    l = complex.dimension
    facets = complex.facets

    copies = UnionFind((i, f) for i, facet in enumerate(facets) for f in faces_of(facet))
    owners: dict[Simplex, list[int]] = defaultdict(list)
    for i, facet in enumerate(facets):
        for ridge in combinations(facet, l):
            if ridge:
                owners[ridge].append(i)
    for ridge, (a, b) in ((r, o) for r, o in owners.items() if len(o) == 2):
        for sub in faces_of(ridge):
            copies.union((a, sub), (b, sub))

    classes: dict[tuple[int, Simplex], list[tuple[int, Simplex]]] = defaultdict(list)
    for i, facet in enumerate(facets):
        for v in facet:
            classes[copies[(i, (v,))]].append((i, (v,)))
    ordered = sorted(classes.values(), key=min)
    new_id = {copies[members[0]]: n for n, members in enumerate(ordered)}

    vertex_origin: dict[int, tuple[int, int]] = {}
    seen: Counter[int] = Counter()
    for n, members in enumerate(ordered):
        v = members[0][1][0]
        vertex_origin[n] = (v, seen[v])
        seen[v] += 1

    new_facets = [tuple(sorted(new_id[copies[(i, (v,))]] for v in facet)) for i, facet in enumerate(facets)]
    normalized = SimplicialComplex.generated_by(new_facets)

    projection = {
        f: tuple(sorted(vertex_origin[v][0] for v in f)) for f in sorted(normalized.faces, key=face_order)
    }
    sheet_count = dict(sorted(Counter(projection.values()).items(), key=lambda kv: face_order(kv[0])))
    logger.debug(
        "normalized %d vertices into %d; faces with several sheets: %d",
        len(complex.vertices),
        len(normalized.vertices),
        sum(1 for c in sheet_count.values() if c > 1),
    )
    return NormalizationResult(
        source=complex,
        normalized=normalized,
        projection=projection,
        sheet_count=sheet_count,
        vertex_origin=vertex_origin,
    )


def verify_projection(result: NormalizationResult, singular: Subcomplex | None = None) -> ProjectionReport:
    """Check the contract of `normalize`; `singular` defaults to the heuristic singular subcomplex."""
    source, normalized = result.source, result.normalized
    l = source.dimension
    violations: list[str] = []

    simplicial = True
    for f, image in result.projection.items():
        if image not in source or len(image) != len(f) or len(set(image)) != len(image):
            simplicial = False
            violations.append(f"face {list(f)} maps to {list(image)}, not a face of the same dimension")
    if set(result.projection) != set(normalized.faces):
        simplicial = False
        violations.append("projection is not defined on every face of the normalization")

    surjective = set(result.projection.values()) == set(source.faces)
    if not surjective:
        violations.append("projection misses faces of the input")

    facet_images = [result.projection[f] for f in normalized.facets]
    facet_bijection = len(facet_images) == len(source.facets) and set(facet_images) == set(source.facets)
    if not facet_bijection:
        violations.append(f"{len(normalized.facets)} facets in the normalization, {len(source.facets)} in the input")

    ridge_single_sheet = all(
        result.sheet_count.get(f) == 1 for k in (l, l - 1) if k >= 0 for f in source.faces_of_dimension(k)
    )
    if not ridge_single_sheet:
        violations.append("an l-face or (l-1)-face has more than one sheet")

    finite_sheets = all(result.sheet_count.get(f, 0) >= 1 for f in source.faces)
    if not finite_sheets:
        violations.append("a face of the input has no preimage")

    if singular is None:
        singular = default_stratification(source).singular
    off_singular = [f for f in source.faces if f not in singular and result.sheet_count.get(f) != 1]
    bijective_off_singular = not off_singular
    if off_singular:
        shown = sorted(off_singular, key=face_order)[:5]
        violations.append(f"faces off the singular set with several sheets: {[list(f) for f in shown]}")

    return ProjectionReport(
        ok=not violations,
        simplicial=simplicial,
        surjective=surjective,
        facet_bijection=facet_bijection,
        ridge_single_sheet=ridge_single_sheet,
        finite_sheets=finite_sheets,
        bijective_off_singular=bijective_off_singular,
        violations=violations,
    )


def derham_verify(complex: SimplicialComplex, strat: Stratification | None = None) -> DerhamReport:
    """Compare top-perversity intersection homology of X with the cohomology of its normalization, over Q."""
    if not is_pseudomanifold(complex).is_pseudomanifold:
        raise PreconditionError("pseudomanifold required")
    strat = strat if strat is not None else default_stratification(complex)
    l = complex.dimension
    perversity = top_perversity(l) if l >= 2 else Perversity(values=())

    ih = intersection_homology(complex, strat, perversity, Coefficients.RATIONALS)
    normalized = normalize(complex).normalized
    coh = cohomology(boundary_matrices(normalized), Coefficients.RATIONALS)
    match = ih.betti == coh.betti
    if not match:
        logger.info("betti mismatch: IH %s vs normalization %s", ih.betti, coh.betti)

    return DerhamReport(
        ih_top=ih,
        normalization_cohomology=coh,
        match=match,
        heuristic_stratification=strat.heuristic,
        singular_faces=[list(f) for f in sorted(strat.singular.members, key=face_order)],
        regular_components=regular_components(complex, strat.singular),
        normalization_h0=coh.betti[0] if coh.groups else 0,
    )
