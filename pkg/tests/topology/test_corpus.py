import pytest

from ih_derham.topology.complex import connected_components, from_facets, is_normal, is_pseudomanifold
from ih_derham.topology.corpus import (
    boundary_of_simplex,
    cone,
    corpus_entries,
    corpus_entry,
    corpus_names,
    pinched_torus,
    rp2_6vertex,
    suspension,
    torus_7vertex,
    wedge,
)
from ih_derham.topology.domain.data_types import NotFoundError, PreconditionError, ValidationError
from ih_derham.topology.homology import boundary_matrices, homology

CORPUS = corpus_names()


def test_reference_f_vectors():
    assert torus_7vertex().f_vector == (7, 21, 14)
    assert rp2_6vertex().f_vector == (6, 15, 10)
    assert boundary_of_simplex(2).f_vector == (3, 3)
    assert boundary_of_simplex(3).f_vector == (4, 6, 4)
    assert pinched_torus().f_vector == (9, 24, 16)


def test_boundary_of_simplex_needs_positive_dimension():
    with pytest.raises(ValidationError):
        boundary_of_simplex(0)


@pytest.mark.parametrize("name", CORPUS)
def test_generators_are_deterministic(name):
    assert corpus_entry(name).complex == corpus_entry(name).complex


@pytest.mark.parametrize("name", CORPUS)
def test_expected_invariants_hold(name, rational_betti):
    entry = corpus_entry(name)
    expected = entry.expected
    result = homology(boundary_matrices(entry.complex))
    assert list(result.betti) == expected.betti
    assert list(rational_betti(entry.complex)) == expected.betti
    for degree in range(entry.complex.dimension + 1):
        assert result.torsion(degree) == expected.torsion.get(degree, [])
    assert is_pseudomanifold(entry.complex).is_pseudomanifold == expected.pseudomanifold
    assert len(connected_components(entry.complex)) == expected.components
    if expected.pseudomanifold:
        assert is_normal(entry.complex).is_normal == expected.normal


@pytest.mark.parametrize("name", CORPUS)
def test_cones_are_acyclic(name):
    c = corpus_entry(name).complex
    coned = cone(c, max(c.vertices) + 1)
    assert set(homology(boundary_matrices(coned)).reduced_betti) == {0}


def test_suspension_of_circle_is_a_sphere():
    s = suspension(boundary_of_simplex(2))
    assert homology(boundary_matrices(s)).betti == (1, 0, 1)
    assert s.f_vector == (5, 9, 6)


def test_cone_rejects_apex_collision(sphere2):
    with pytest.raises(PreconditionError, match="apex collision"):
        cone(sphere2, 0)


def test_wedge_rejects_missing_vertex(sphere2):
    with pytest.raises(PreconditionError, match="missing wedge vertex"):
        wedge(sphere2, sphere2, 0, 42)


def test_wedge_of_circles():
    c = wedge(boundary_of_simplex(2), boundary_of_simplex(2), 0, 0)
    assert homology(boundary_matrices(c)).betti == (1, 2)
    assert not is_pseudomanifold(c).is_pseudomanifold


def test_wedge_shares_only_the_glued_vertex():
    c = wedge(from_facets([[0, 1]]), from_facets([[0, 1]]), 1, 0)
    assert c.facets == ((0, 1), (1, 3))


def test_unknown_corpus_name():
    with pytest.raises(NotFoundError, match="unknown corpus complex.*known: .*torus"):
        corpus_entry("klein_bottle")


def test_corpus_lists_every_entry():
    assert [e.name for e in corpus_entries()] == CORPUS
    assert {"sphere2", "torus", "rp2", "pinched_torus", "suspension_torus"} <= set(CORPUS)


def test_provenance_of_expected_invariants():
    assert corpus_entry("sphere2").expected.provenance == "known"
    assert corpus_entry("rp2").expected.provenance == "known"
    assert corpus_entry("wedge_spheres").expected.provenance == "derived"
