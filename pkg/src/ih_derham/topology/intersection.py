"""Stratifications, perversities and simplicial intersection homology.

A stratification of an l-dimensional complex is stored outermost first:
``terms[k - 2]`` is the closed stratum X_{l-k} for k = 2..l. There is no
X_{l-1} term.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from ih_derham.topology.complex import (
    Simplex,
    SimplicialComplex,
    Subcomplex,
    connected_components,
    dim,
    facet_components,
    is_pseudomanifold,
    link,
    make_simplex,
)
from ih_derham.topology.domain.data_types import (
    AllowabilityReport,
    Coefficients,
    ExcludedFace,
    HomologyResult,
    InvalidPerversityError,
    PreconditionError,
    ValidationError,
)
from ih_derham.topology.homology import boundary_matrices, constrained_homology, homology

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Perversity:
    """p(k) for codimensions k = 2..l, stored as ``values[k - 2]``. Empty when l < 2."""

    values: tuple[int, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        if not self.values:
            return
        if self.values[0] != 0:
            raise InvalidPerversityError(f"invalid perversity: p(2) must be 0, got {self.values[0]}")
        for k, (a, b) in enumerate(zip(self.values, self.values[1:], strict=False), start=2):
            if b - a not in (0, 1):
                raise InvalidPerversityError(f"invalid perversity: p({k + 1}) - p({k}) = {b - a}, must be 0 or 1")

    @property
    def top_dimension(self) -> int:
        return len(self.values) + 1

    def __call__(self, k: int) -> int:
        return self.values[k - 2]

    def as_dict(self) -> dict[int, int]:
        return {k: p for k, p in enumerate(self.values, start=2)}

    def __le__(self, other: Perversity) -> bool:
        return len(self.values) == len(other.values) and all(
            a <= b for a, b in zip(self.values, other.values, strict=True)
        )


def top_perversity(l: int) -> Perversity:
    if l < 2:
        raise PreconditionError("no codimension-2 strata")
    return Perversity(values=tuple(k - 2 for k in range(2, l + 1)), name="top")


def zero_perversity(l: int) -> Perversity:
    if l < 2:
        raise PreconditionError("no codimension-2 strata")
    return Perversity(values=(0,) * (l - 1), name="zero")


def parse_perversity(text: str, l: int) -> Perversity:
    """``top``, ``zero`` or ``custom:<p(2)>,<p(3)>,...`` for an l-dimensional complex.

    Below dimension 2 there is nothing to pervert: ``top`` and ``zero`` give the empty perversity and
    ``custom:`` must list no values.
    """
    value = text.strip()
    if l < 2 and value in ("top", "zero"):
        return Perversity(values=(), name=value)
    if value == "top":
        return top_perversity(l)
    if value == "zero":
        return zero_perversity(l)
    if not value.startswith("custom:"):
        raise InvalidPerversityError(f"invalid perversity: expected top, zero or custom:<list>, got {text!r}")
    raw = value.removeprefix("custom:")
    try:
        values = tuple(int(part) for part in raw.split(",")) if raw else ()
    except ValueError as e:
        raise InvalidPerversityError(f"invalid perversity: {raw!r} is not a comma list of integers") from e
    perversity = Perversity(values=values)
    if len(values) != max(l - 1, 0):
        raise InvalidPerversityError(
            f"invalid perversity: {len(values)} values given, a {l}-dimensional complex needs {max(l - 1, 0)}"
        )
    return perversity


@dataclass(frozen=True)
class Stratification:
    complex: SimplicialComplex
    terms: tuple[Subcomplex, ...]
    heuristic: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        l = self.complex.dimension
        if len(self.terms) > max(l - 1, 0):
            raise ValidationError(f"{len(self.terms)} strata given, a {l}-dimensional complex has at most {max(l - 1, 0)}")
        previous = self.complex.faces
        for k, term in enumerate(self.terms, start=2):
            if term.parent != self.complex:
                raise ValidationError("stratum belongs to a different complex")
            if term.dimension > l - k:
                raise ValidationError(f"stratum X_{l - k} has dimension {term.dimension} > {l - k}")
            if not term.members <= previous:
                raise ValidationError(f"strata not descending at X_{l - k}")
            previous = term.members

    @classmethod
    def from_generators(
        cls,
        complex: SimplicialComplex,
        generators: Sequence[Iterable[Iterable[int]]],
        *,
        heuristic: bool = False,
    ) -> Stratification:
        """Close each generator list; terms not given default to skeleta of the last one given."""
        l = complex.dimension
        terms: list[Subcomplex] = []
        for faces in generators:
            simplices = [make_simplex(f) for f in faces]
            stray = [list(s) for s in simplices if s not in complex]
            if stray:
                raise ValidationError(f"stratum faces not in the complex: {stray[:5]}")
            terms.append(Subcomplex.closure(complex, simplices))
        if terms:
            for k in range(len(terms) + 2, l + 1):
                terms.append(terms[-1].skeleton(l - k))
        return cls(complex=complex, terms=tuple(terms), heuristic=heuristic)

    def stratum(self, k: int) -> Subcomplex:
        """X_{l-k}; empty when no stratum of that codimension was given."""
        if 2 <= k < len(self.terms) + 2:
            return self.terms[k - 2]
        return Subcomplex(parent=self.complex, members=frozenset())

    @property
    def singular(self) -> Subcomplex:
        return self.stratum(2)

    @property
    def is_trivial(self) -> bool:
        return all(len(t) == 0 for t in self.terms)


def _is_rational_sphere(complex: SimplicialComplex, expected_dim: int) -> bool:
    if complex.dimension != expected_dim or len(connected_components(complex)) != 1:
        return False
    if len(facet_components(complex)) != 1:
        return False
    betti = homology(boundary_matrices(complex), Coefficients.RATIONALS).betti
    return betti == (1, *([0] * (expected_dim - 1)), 1) if expected_dim >= 1 else betti == (2,)


def default_stratification(complex: SimplicialComplex) -> Stratification:
    """Sigma = closure of the faces of dimension <= l-2 whose link fails the homology-sphere screen.

    The screen (connected, strongly connected, rational homology of a sphere) cannot recognise spheres,
    so the result is flagged heuristic.
    """
    if not is_pseudomanifold(complex).is_pseudomanifold:
        raise PreconditionError("pseudomanifold required")
    l = complex.dimension
    if l < 2:
        return Stratification(complex=complex, terms=(), heuristic=True)
    bad = [
        tau
        for k in range(l - 1)
        for tau in complex.faces_of_dimension(k)
        if not _is_rational_sphere(link(complex, tau), l - k - 1)
    ]
    sigma = Subcomplex.closure(complex, bad)
    logger.debug("default stratification: %d faces fail the link screen", len(bad))
    terms = tuple(sigma.skeleton(l - k) for k in range(2, l + 1))
    return Stratification(complex=complex, terms=terms, heuristic=True)


def _intersection_dimension(sigma: Simplex, stratum: Subcomplex) -> int | None:
    """dim of the largest face of sigma lying in the stratum; None when they are disjoint."""
    inside = [v for v in sigma if (v,) in stratum]
    for size in range(len(inside), 0, -1):
        if any(f in stratum for f in combinations(inside, size)):
            return size - 1
    return None


def _check_inputs(complex: SimplicialComplex, strat: Stratification, perversity: Perversity) -> None:
    if strat.complex != complex:
        raise ValidationError("stratification belongs to a different complex")
    l = complex.dimension
    if l >= 2 and perversity.top_dimension != l:
        raise ValidationError(f"perversity covers codimensions 2..{perversity.top_dimension}, complex has dimension {l}")


def allowable_faces(
    complex: SimplicialComplex, strat: Stratification, perversity: Perversity, i: int
) -> AllowabilityReport:
    """sigma of dimension i is allowed iff dim(sigma n X_{l-k}) <= i - k + p(k) for every k = 2..l."""
    l = complex.dimension
    if not 0 <= i <= l:
        raise ValidationError(f"degree {i} outside 0..{l}")
    _check_inputs(complex, strat, perversity)
    allowed: list[list[int]] = []
    excluded: list[ExcludedFace] = []
    strata = [(k, strat.stratum(k)) for k in range(2, len(strat.terms) + 2)]
    for sigma in complex.faces_of_dimension(i):
        violation = None
        for k, stratum in strata:
            d = _intersection_dimension(sigma, stratum)
            if d is not None and d > i - k + perversity(k):
                violation = ExcludedFace(face=list(sigma), codimension=k, intersection_dimension=d)
                break
        if violation is None:
            allowed.append(list(sigma))
        else:
            excluded.append(violation)
    return AllowabilityReport(degree=i, allowed=allowed, excluded=excluded)


def intersection_homology(
    complex: SimplicialComplex,
    strat: Stratification | None = None,
    perversity: Perversity | None = None,
    coefficients: Coefficients = Coefficients.INTEGERS,
) -> HomologyResult:
    """Homology of the allowable chains whose boundaries are allowable.

    Defaults: the heuristic stratification and the top perversity.
    """
    if not is_pseudomanifold(complex).is_pseudomanifold:
        raise PreconditionError("pseudomanifold required")
    l = complex.dimension
    strat = strat if strat is not None else default_stratification(complex)
    if perversity is None:
        perversity = top_perversity(l) if l >= 2 else Perversity(values=())
    data = boundary_matrices(complex)
    allowed = []
    for i in range(l + 1):
        report = allowable_faces(complex, strat, perversity, i)
        index = {s: j for j, s in enumerate(data.bases[i])}
        allowed.append({index[tuple(f)] for f in report.allowed})
        if report.excluded:
            logger.debug("degree %d: %d faces excluded", i, len(report.excluded))
    return constrained_homology(data, allowed, coefficients)


def regular_components(complex: SimplicialComplex, singular: Subcomplex) -> int:
    """Connected components of |X| - |Sigma|, from codimension-1 incidences of open faces outside Sigma."""
    graph = nx.Graph()
    outside = [f for f in complex.faces if f not in singular]
    graph.add_nodes_from(outside)
    for f in outside:
        if dim(f) >= 1:
            for g in combinations(f, len(f) - 1):
                if g not in singular:
                    graph.add_edge(f, g)
    return nx.number_connected_components(graph)
