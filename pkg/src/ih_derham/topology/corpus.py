"""Deterministic generators for the reference pseudomanifolds and their constructions."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from itertools import combinations

from ih_derham.topology.complex import SimplicialComplex, from_facets
from ih_derham.topology.domain.data_types import (
    ExpectedInvariants,
    NotFoundError,
    PreconditionError,
    ValidationError,
)

# 6-vertex projective plane, one of the standard minimal triangulations
RP2_FACETS = (
    (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
    (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5),
)  # fmt: skip


def boundary_of_simplex(l: int) -> SimplicialComplex:
    """The (l-1)-sphere bounding the l-simplex on {0..l}."""
    if l < 1:
        raise ValidationError(f"boundary_of_simplex needs l >= 1, got {l}")
    return from_facets(combinations(range(l + 1), l))


def torus_7vertex() -> SimplicialComplex:
    """Moebius' 7-vertex torus: {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return from_facets(facets)


def rp2_6vertex() -> SimplicialComplex:
    return from_facets(RP2_FACETS)


def cone(complex: SimplicialComplex, apex: int) -> SimplicialComplex:
    if apex in complex.vertices:
        raise PreconditionError(f"apex collision: vertex {apex} already in the complex")
    return from_facets([*f, apex] for f in complex.facets)


def suspension(complex: SimplicialComplex) -> SimplicialComplex:
    """Two cones on the same base, apexes max+1 and max+2."""
    top = max(complex.vertices, default=-1)
    north, south = top + 1, top + 2
    return from_facets([[*f, north] for f in complex.facets] + [[*f, south] for f in complex.facets])


def wedge(c1: SimplicialComplex, c2: SimplicialComplex, v1: int, v2: int) -> SimplicialComplex:
    """Disjoint union with v2 of c2 glued to v1 of c1; the other vertices of c2 shift past c1."""
    if v1 not in c1.vertices:
        raise PreconditionError(f"missing wedge vertex {v1} in the first complex")
    if v2 not in c2.vertices:
        raise PreconditionError(f"missing wedge vertex {v2} in the second complex")
    shift = max(c1.vertices) + 1
    relabel = {u: (v1 if u == v2 else u + shift) for u in c2.vertices}
    return from_facets([*c1.facets, *([relabel[u] for u in f] for f in c2.facets)])


def pinched_torus() -> SimplicialComplex:
    """Cylinder on circles a = 0..3 and b = 4..7, both boundary circles coned to apex 8."""
    a = [0, 1, 2, 3]
    b = [4, 5, 6, 7]
    apex = 8
    facets = []
    for i in range(4):
        j = (i + 1) % 4
        facets += [
            [a[i], a[j], b[i]],
            [a[j], b[i], b[j]],
            [apex, a[i], a[j]],
            [apex, b[i], b[j]],
        ]
    return from_facets(facets)


def disk() -> SimplicialComplex:
    """Two triangles sharing an edge; not a pseudomanifold."""
    return from_facets([[0, 1, 2], [1, 2, 3]])


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    complex: SimplicialComplex
    description: str
    expected: ExpectedInvariants | None = None


def _sphere_invariants(l: int) -> ExpectedInvariants:
    betti = [1, *([0] * (l - 2)), 1] if l >= 2 else [2]
    return ExpectedInvariants(
        betti=betti,
        pseudomanifold=True,
        normal=True,
        components=1,
        normalization_betti=betti,
        provenance="known",
    )


_GENERATORS: dict[str, tuple[Callable[[], SimplicialComplex], str, ExpectedInvariants]] = {
    "circle": (lambda: boundary_of_simplex(2), "boundary of a triangle", _sphere_invariants(2)),
    "sphere2": (lambda: boundary_of_simplex(3), "boundary of a tetrahedron", _sphere_invariants(3)),
    "sphere3": (lambda: boundary_of_simplex(4), "boundary of a 4-simplex", _sphere_invariants(4)),
    "torus": (
        torus_7vertex,
        "7-vertex torus",
        ExpectedInvariants(
            betti=[1, 2, 1],
            pseudomanifold=True,
            normal=True,
            components=1,
            normalization_betti=[1, 2, 1],
            provenance="known",
        ),
    ),
    "rp2": (
        rp2_6vertex,
        "6-vertex projective plane",
        ExpectedInvariants(
            betti=[1, 0, 0],
            torsion={1: [2]},
            pseudomanifold=True,
            normal=True,
            components=1,
            normalization_betti=[1, 0, 0],
            provenance="known",
        ),
    ),
    "pinched_torus": (
        pinched_torus,
        "torus with one meridian pinched to a point",
        ExpectedInvariants(
            betti=[1, 1, 1], pseudomanifold=True, normal=False, components=1, normalization_betti=[1, 0, 1]
        ),
    ),
    "suspension_torus": (
        lambda: suspension(torus_7vertex()),
        "suspension of the 7-vertex torus",
        ExpectedInvariants(
            betti=[1, 0, 2, 1], pseudomanifold=True, normal=True, components=1, normalization_betti=[1, 0, 2, 1]
        ),
    ),
    "suspension_rp2": (
        lambda: suspension(rp2_6vertex()),
        "suspension of the projective plane",
        ExpectedInvariants(
            betti=[1, 0, 0, 0],
            torsion={2: [2]},
            pseudomanifold=True,
            normal=True,
            components=1,
            normalization_betti=[1, 0, 0, 0],
        ),
    ),
    "wedge_spheres": (
        lambda: wedge(boundary_of_simplex(3), boundary_of_simplex(3), 0, 0),
        "two tetrahedron boundaries sharing a vertex",
        ExpectedInvariants(
            betti=[1, 0, 2], pseudomanifold=True, normal=False, components=1, normalization_betti=[2, 0, 2]
        ),
    ),
    "disk": (
        disk,
        "two triangles sharing an edge",
        ExpectedInvariants(betti=[1, 0, 0], pseudomanifold=False, components=1, provenance="known"),
    ),
}


def corpus_names() -> list[str]:
    return list(_GENERATORS)


def corpus_entry(name: str) -> CorpusEntry:
    try:
        build, description, expected = _GENERATORS[name]
    except KeyError:
        raise NotFoundError(f"unknown corpus complex: {name!r}; known: {', '.join(corpus_names())}") from None
    return CorpusEntry(name=name, complex=build(), description=description, expected=expected)


def corpus_entries() -> list[CorpusEntry]:
    return [corpus_entry(name) for name in corpus_names()]
