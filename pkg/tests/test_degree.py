import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DimensionMismatch, ImageNotInBoundary, NotClosed
from models.cover import Cover
from models.invariants import RegularValue
from services.cover import pl_map, random_partition, relabel_cover, subdivide_cover
from services.degree import DEGENERATE, candidate_regular_value, degree, degree_of_cover, face_preimage
from services.fixtures import constant_cover, sphere_with_identity
from services.simplicial import barycentric_subdivide, relabel, reverse_orientation, standard_simplex, standard_sphere
from tests.helpers import random_labels


@pytest.mark.parametrize("n", [1, 2, 3])
def test_identity_cover_has_degree_one(n):
    S, C = sphere_with_identity(n)
    result = degree_of_cover(S, C)
    assert result.degree == 1
    assert len(result.preimages) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_constant_cover_has_degree_zero(n):
    S = standard_sphere(n)
    assert degree_of_cover(S, constant_cover(S)).degree == 0


def test_swapping_two_labels_negates_the_degree():
    S, _ = sphere_with_identity(2)
    swapped = Cover(num_sets=4, labels={0: (1,), 1: (0,), 2: (2,), 3: (3,)})
    assert degree_of_cover(S, swapped).degree == -1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_candidate_values_lie_in_the_open_facet(n):
    for attempt in range(6):
        value = candidate_regular_value(n, attempt)
        assert len(value.point) == n + 2
        assert sum(value.point) == 1
        assert value.point[value.facet_index] == 0
        assert all(x > 0 for i, x in enumerate(value.point) if i != value.facet_index)
    assert candidate_regular_value(n, 0).facet_index == n + 1


def test_face_preimage_detects_boundary_hits():
    value = RegularValue(facet_index=2, point=(Fraction(1, 2), Fraction(1, 2), Fraction(0)))
    edge = [(Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0))]
    solution, local_sign = face_preimage(edge, value)
    assert solution == [Fraction(1, 2), Fraction(1, 2)]
    assert local_sign in (1, -1)
    # value sits on the image of a vertex
    corner = RegularValue(facet_index=2, point=(Fraction(1), Fraction(0), Fraction(0)))
    assert face_preimage(edge, corner) == DEGENERATE
    away = [(Fraction(0), Fraction(0), Fraction(1)), (Fraction(0), Fraction(1), Fraction(0))]
    assert face_preimage(away, value) is None


def test_degree_needs_a_closed_source_of_matching_dimension():
    T = standard_simplex(2)
    with pytest.raises(NotClosed):
        degree_of_cover(T, Cover(num_sets=4, labels={0: (0,), 1: (1,), 2: (2,)}))
    S, C = sphere_with_identity(1)
    with pytest.raises(DimensionMismatch):
        degree_of_cover(S, Cover(num_sets=4, labels=C.labels))


def test_degree_rejects_covering_simplices():
    S = standard_sphere(1)
    C = Cover(num_sets=3, labels={0: (0, 1), 1: (2,), 2: (2,)})
    with pytest.raises(ImageNotInBoundary):
        degree_of_cover(S, C)


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=50, deadline=None)
def test_reversing_orientation_negates_degree(seed):
    rng = random.Random(seed)
    for n in (1, 2):
        S = standard_sphere(n)
        M = barycentric_subdivide(S, 1)
        C = random_labels(M, n + 2, rng, multi=0.2)
        assert degree_of_cover(reverse_orientation(M), C).degree == -degree_of_cover(M, C).degree


def test_degree_does_not_depend_on_the_partition(subdivided_spheres):
    rng = random.Random(7)
    M = subdivided_spheres[2]
    for _ in range(100):
        C = random_labels(M, 4, rng, multi=0.3)
        expected = degree_of_cover(M, C).degree
        for _ in range(20):
            phi = random_partition(M.complex, C, rng)
            assert degree(pl_map(M, C, phi)).degree == expected


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
@settings(max_examples=50, deadline=None)
def test_degree_survives_subdivision(seed):
    rng = random.Random(seed)
    n = 1 + seed % 2
    S = standard_sphere(n)
    C = random_labels(S, n + 2, rng)
    expected = degree_of_cover(S, C).degree
    for times in (1, 2):
        M, C2, phi2 = subdivide_cover(S, C, times=times)
        assert degree(pl_map(M, C2, phi2)).degree == expected


def test_thread_count_does_not_change_the_result(subdivided_spheres):
    rng = random.Random(11)
    M = subdivided_spheres[2]
    C = random_labels(M, 4, rng)
    one = degree_of_cover(M, C, threads=1)
    many = degree_of_cover(M, C, threads=4)
    assert one == many


def test_relabeling_vertices_keeps_the_degree(rng):
    M = barycentric_subdivide(standard_sphere(2), 1)
    C = random_labels(M, 4, rng)
    shuffled = list(M.vertex_ids)
    rng.shuffle(shuffled)
    mapping = {v: 100 + w for v, w in zip(M.vertex_ids, shuffled)}
    moved = degree_of_cover(relabel(M, mapping), relabel_cover(C, mapping)).degree
    assert moved == degree_of_cover(M, C).degree
