import pytest

from ih_derham.topology.complex import facet_components, from_facets, is_normal, is_pseudomanifold
from ih_derham.topology.corpus import corpus_entries, corpus_entry
from ih_derham.topology.domain.data_types import Coefficients, PreconditionError
from ih_derham.topology.homology import boundary_matrices, cohomology
from ih_derham.topology.intersection import Stratification, default_stratification, regular_components
from ih_derham.topology.normalization import derham_verify, normalize, verify_projection

PSEUDOMANIFOLDS = [e.name for e in corpus_entries() if e.expected and e.expected.pseudomanifold]


def _rational_betti(complex):
    return cohomology(boundary_matrices(complex), Coefficients.RATIONALS).betti


# ----- normalize -----
def test_normal_complex_has_one_sheet_everywhere(sphere2):
    result = normalize(sphere2)
    assert set(result.sheet_count.values()) == {1}
    assert result.normalized.f_vector == sphere2.f_vector


def test_pinched_torus_apex_splits_in_two(pinched):
    result = normalize(pinched)
    assert result.sheet_count[(8,)] == 2
    assert [f for f, n in result.sheet_count.items() if n > 1] == [(8,)]
    assert result.normalized.f_vector == (10, 24, 16)
    assert _rational_betti(result.normalized) == (1, 0, 1)
    assert is_normal(result.normalized).is_normal


def test_pinched_apex_copies_keep_their_origin(pinched):
    result = normalize(pinched)
    copies = sorted(o for o in result.vertex_origin.values() if o[0] == 8)
    assert copies == [(8, 0), (8, 1)]
    assert all(ordinal == 0 for v, ordinal in result.vertex_origin.values() if v != 8)


def test_wedge_separates_into_two_spheres():
    c = corpus_entry("wedge_spheres").complex
    result = normalize(c)
    assert result.components == 2
    assert result.sheet_count[(0,)] == 2
    assert _rational_betti(result.normalized) == (2, 0, 2)


def test_normalize_requires_pseudomanifold():
    with pytest.raises(PreconditionError, match="pseudomanifold required"):
        normalize(corpus_entry("disk").complex)


def test_normalize_two_points():
    result = normalize(from_facets([[0], [1]]))
    assert result.normalized.f_vector == (2,)
    assert result.components == 2


def test_normalize_is_deterministic(pinched):
    a, b = normalize(pinched), normalize(pinched)
    assert a.normalized == b.normalized
    assert a.projection == b.projection
    assert a.vertex_origin == b.vertex_origin


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_projection_contract_holds(name):
    result = normalize(corpus_entry(name).complex)
    report = verify_projection(result)
    assert report.ok, report.violations


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_normalization_is_a_normal_pseudomanifold(name):
    normalized = normalize(corpus_entry(name).complex).normalized
    assert is_pseudomanifold(normalized).is_pseudomanifold
    assert is_normal(normalized).is_normal


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_normalizing_twice_changes_nothing(name):
    once = normalize(corpus_entry(name).complex).normalized
    twice = normalize(once)
    assert twice.normalized.f_vector == once.f_vector
    assert set(twice.sheet_count.values()) == {1}


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_components_follow_facet_classes(name):
    c = corpus_entry(name).complex
    assert normalize(c).components == len(facet_components(c))


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_normalization_betti_matches_corpus(name):
    entry = corpus_entry(name)
    assert list(_rational_betti(normalize(entry.complex).normalized)) == entry.expected.normalization_betti


@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_degree_zero_cohomology_counts_regular_components(name):
    c = corpus_entry(name).complex
    singular = default_stratification(c).singular
    assert _rational_betti(normalize(c).normalized)[0] == regular_components(c, singular)


def test_verify_projection_flags_a_corrupted_map(pinched):
    result = normalize(pinched)
    broken = dict(result.projection)
    facet = result.normalized.facets[0]
    broken[facet] = (0, 1, 99)
    tampered = type(result)(
        source=result.source,
        normalized=result.normalized,
        projection=broken,
        sheet_count=result.sheet_count,
        vertex_origin=result.vertex_origin,
    )
    report = verify_projection(tampered)
    assert not report.ok
    assert not report.simplicial


# ----- de Rham check -----
@pytest.mark.parametrize("name", PSEUDOMANIFOLDS)
def test_derham_matches_on_corpus(name):
    report = derham_verify(corpus_entry(name).complex)
    assert report.match
    assert report.heuristic_stratification
    assert report.regular_components == report.normalization_h0


def test_derham_pinched_torus(pinched):
    report = derham_verify(pinched)
    assert report.ih_top.betti == (1, 0, 1)
    assert report.normalization_cohomology.betti == (1, 0, 1)
    assert report.singular_faces == [[8]]


def test_derham_suspended_projective_plane_over_rationals():
    report = derham_verify(corpus_entry("suspension_rp2").complex)
    assert report.match
    assert report.ih_top.coefficients == Coefficients.RATIONALS
    assert report.ih_top.torsion(2) == []


def test_derham_with_supplied_stratification(pinched):
    strat = Stratification.from_generators(pinched, [[[8]]])
    report = derham_verify(pinched, strat)
    assert report.match
    assert not report.heuristic_stratification


def test_derham_with_empty_strata_sees_the_pinch(pinched):
    report = derham_verify(pinched, Stratification.from_generators(pinched, [[]]))
    assert not report.match
    assert report.ih_top.betti == (1, 1, 1)


def test_derham_requires_pseudomanifold():
    with pytest.raises(PreconditionError):
        derham_verify(corpus_entry("disk").complex)
