"""Finite abstract simplicial complexes.

Simplices are strictly increasing tuples of non-negative vertex ids; every
ordering used downstream (boundary signs, matrix bases, reports) is derived
from ascending vertex order, so results never depend on input order.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

import networkx as nx

from ih_derham.topology.domain.data_types import (
    NormalityReport,
    NotAFaceError,
    PreconditionError,
    PseudomanifoldReport,
    RidgeViolation,
    ValidationError,
)

logger = logging.getLogger(__name__)

type Simplex = tuple[int, ...]


def make_simplex(vertices: Iterable[int]) -> Simplex:
    vs = list(vertices)
    if not vs:
        raise ValidationError("empty simplex")
    for v in vs:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValidationError(f"vertex ids must be non-negative integers, got {v!r}")
    s = tuple(sorted(vs))
    if len(set(s)) != len(s):
        raise ValidationError(f"degenerate simplex: {vs}")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def faces_of(s: Simplex, *, proper: bool = False) -> Iterator[Simplex]:
    top = len(s) - 1 if proper else len(s)
    for size in range(1, top + 1):
        yield from combinations(s, size)


def boundary_faces(s: Simplex) -> list[tuple[int, Simplex]]:
    """(sign, face) pairs; removing the i-th vertex carries sign (-1)^i."""
    if len(s) <= 1:
        return []
    return [((-1) ** i, s[:i] + s[i + 1 :]) for i in range(len(s))]


def face_order(s: Simplex) -> tuple[int, Simplex]:
    return (len(s), s)


@dataclass(frozen=True)
class SimplicialComplex:
    facets: tuple[Simplex, ...]

    @classmethod
    def generated_by(cls, simplices: Iterable[Simplex]) -> SimplicialComplex:
        """Complex spanned by `simplices`; faces of other candidates are absorbed. May be empty."""
        candidates = set(simplices)
        proper = {f for s in candidates for f in faces_of(s, proper=True)}
        return cls(facets=tuple(sorted(candidates - proper, key=face_order)))

    @property
    def is_empty(self) -> bool:
        return not self.facets

    @property
    def dimension(self) -> int:
        return max((dim(f) for f in self.facets), default=-1)

    @cached_property
    def faces(self) -> frozenset[Simplex]:
        return frozenset(f for s in self.facets for f in faces_of(s))

    @cached_property
    def _by_dimension(self) -> dict[int, tuple[Simplex, ...]]:
        grouped: dict[int, list[Simplex]] = defaultdict(list)
        for f in self.faces:
            grouped[dim(f)].append(f)
        return {k: tuple(sorted(v)) for k, v in grouped.items()}

    def faces_of_dimension(self, k: int) -> tuple[Simplex, ...]:
        return self._by_dimension.get(k, ())

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.faces_of_dimension(0))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_of_dimension(k)) for k in range(self.dimension + 1))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @cached_property
    def _facets_by_vertex(self) -> dict[int, frozenset[Simplex]]:
        index: dict[int, set[Simplex]] = defaultdict(set)
        for f in self.facets:
            for v in f:
                index[v].add(f)
        return {v: frozenset(fs) for v, fs in index.items()}

    def facets_containing(self, s: Simplex) -> list[Simplex]:
        if not s:
            return list(self.facets)
        found = self._facets_by_vertex.get(s[0], frozenset())
        for v in s[1:]:
            found = found & self._facets_by_vertex.get(v, frozenset())
        return sorted(found, key=face_order)

    def __contains__(self, s: object) -> bool:
        return s in self.faces


@dataclass(frozen=True)
class Subcomplex:
    parent: SimplicialComplex
    members: frozenset[Simplex]

    def __post_init__(self) -> None:
        stray = self.members - self.parent.faces
        if stray:
            raise ValidationError(f"faces not in the parent complex: {sorted(stray)[:5]}")
        for s in self.members:
            for f in faces_of(s, proper=True):
                if f not in self.members:
                    raise ValidationError(f"subcomplex not closed: {list(f)} missing below {list(s)}")

    @classmethod
    def closure(cls, parent: SimplicialComplex, generators: Iterable[Simplex]) -> Subcomplex:
        return cls(parent=parent, members=frozenset(f for s in generators for f in faces_of(s)))

    @property
    def dimension(self) -> int:
        return max((dim(s) for s in self.members), default=-1)

    @property
    def f_vector(self) -> tuple[int, ...]:
        counts = Counter(dim(s) for s in self.members)
        return tuple(counts[k] for k in range(self.dimension + 1))

    def skeleton(self, k: int) -> Subcomplex:
        return Subcomplex(parent=self.parent, members=frozenset(s for s in self.members if dim(s) <= k))

    def __contains__(self, s: object) -> bool:
        return s in self.members

    def __len__(self) -> int:
        return len(self.members)


def from_facets(facet_lists: Iterable[Sequence[int]]) -> SimplicialComplex:
    lists = list(facet_lists)
    if not lists:
        raise ValidationError("empty complex")
    return SimplicialComplex.generated_by(make_simplex(f) for f in lists)


def _require_face(complex: SimplicialComplex, sigma: Iterable[int]) -> Simplex:
    s = make_simplex(sigma)
    if s not in complex:
        raise NotAFaceError(f"not a face: {list(s)}")
    return s


def star(complex: SimplicialComplex, sigma: Iterable[int]) -> Subcomplex:
    """Closed star: every face of every facet containing sigma."""
    s = _require_face(complex, sigma)
    return Subcomplex.closure(complex, complex.facets_containing(s))


def link(complex: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Lk(sigma) = { tau : tau disjoint from sigma, tau u sigma a face }, as a standalone complex."""
    s = _require_face(complex, sigma)
    removed = set(s)
    pieces = (tuple(v for v in f if v not in removed) for f in complex.facets_containing(s))
    return SimplicialComplex.generated_by(p for p in pieces if p)


def connected_components(complex: SimplicialComplex) -> list[list[int]]:
    graph = nx.Graph()
    graph.add_nodes_from(complex.vertices)
    graph.add_edges_from(complex.faces_of_dimension(1))
    return sorted(sorted(c) for c in nx.connected_components(graph))


def _ridge_owners(complex: SimplicialComplex) -> dict[Simplex, list[int]]:
    l = complex.dimension
    owners: dict[Simplex, list[int]] = defaultdict(list)
    for i, f in enumerate(complex.facets):
        if dim(f) == l:
            for r in combinations(f, l):
                owners[r].append(i)
    return owners


def facet_components(complex: SimplicialComplex) -> list[list[Simplex]]:
    """Classes of top facets under the "share an (l-1)-face" relation."""
    l = complex.dimension
    top = [i for i, f in enumerate(complex.facets) if dim(f) == l]
    graph = nx.Graph()
    graph.add_nodes_from(top)
    if l >= 1:
        for owners in _ridge_owners(complex).values():
            graph.add_edges_from(zip(owners, owners[1:], strict=False))
    classes = [sorted((complex.facets[i] for i in c), key=face_order) for c in nx.connected_components(graph)]
    return sorted(classes)


def is_pseudomanifold(complex: SimplicialComplex) -> PseudomanifoldReport:
    """Purity plus "every (l-1)-face lies in exactly two facets".

    For l = 0 the only (l-1)-face is the empty face, so exactly two points qualify.
    Strong connectedness is reported but does not enter the predicate.
    """
    l = complex.dimension
    if complex.is_empty:
        return PseudomanifoldReport(is_pseudomanifold=False, dimension=l)

    impure = [list(f) for f in complex.facets if dim(f) < l]
    if l == 0:
        n = len(complex.facets)
        bad = [] if n == 2 else [RidgeViolation(face=[], facet_count=n)]
    else:
        owners = _ridge_owners(complex)
        bad = [
            RidgeViolation(face=list(r), facet_count=len(owners.get(r, ())))
            for r in complex.faces_of_dimension(l - 1)
            if len(owners.get(r, ())) != 2
        ]
    classes = facet_components(complex)
    ok = not impure and not bad
    if not ok:
        logger.debug("not a pseudomanifold: %d impure facets, %d bad ridges", len(impure), len(bad))
    return PseudomanifoldReport(
        is_pseudomanifold=ok,
        dimension=l,
        impure_faces=impure,
        bad_ridges=bad,
        strongly_connected=len(classes) == 1,
        facet_components=len(classes),
    )


def is_normal(complex: SimplicialComplex) -> NormalityReport:
    """Connected vertex links.

    Point links inside a positive-dimensional face sigma are joins del(sigma) * Lk(sigma),
    connected whenever both factors are non-empty, so vertex links decide normality.
    Pseudomanifolds of dimension <= 1 are disjoint unions of circles or S^0 and count as normal.
    """
    if not is_pseudomanifold(complex).is_pseudomanifold:
        raise PreconditionError("pseudomanifold required")
    if complex.dimension <= 1:
        return NormalityReport(is_normal=True)
    bad = [v for v in complex.vertices if len(connected_components(link(complex, (v,)))) != 1]
    return NormalityReport(is_normal=not bad, bad_vertices=bad)


def barycentric_subdivision(complex: SimplicialComplex) -> SimplicialComplex:
    """Vertex i of the output is the i-th face of the input in (dimension, lexicographic) order."""
    labels = {f: i for i, f in enumerate(sorted(complex.faces, key=face_order))}
    chains: set[Simplex] = set()
    for facet in complex.facets:
        for order in permutations(facet):
            chains.add(tuple(sorted(labels[tuple(sorted(order[: j + 1]))] for j in range(len(order)))))
    result = SimplicialComplex.generated_by(chains)
    logger.debug("subdivided f-vector %s -> %s", complex.f_vector, result.f_vector)
    return result
