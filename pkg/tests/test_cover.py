import random
from fractions import Fraction

import pytest

from errors import ImageNotInBoundary, LabelOutOfRange, MissingVertex, NotSubordinate, ValidationError
from models.cover import Cover, PartitionOfUnity
from services.cover import (
    check_cover, check_partition, cover_of_map, covering_simplex, default_partition, image_in_boundary,
    pl_map, random_partition, require_boundary_image, simplicial_map_as_cover, subdivide_cover,
)
from services.fixtures import constant_cover, sphere_with_identity
from services.simplicial import standard_simplex, standard_sphere


def test_check_cover_errors():
    S = standard_sphere(1)
    with pytest.raises(MissingVertex, match="vertex 2"):
        check_cover(S.complex, Cover(num_sets=3, labels={0: (0,), 1: (1,)}))
    with pytest.raises(LabelOutOfRange):
        check_cover(S.complex, Cover(num_sets=3, labels={0: (0,), 1: (1,), 2: (3,)}))
    with pytest.raises(ValidationError):
        check_cover(S.complex, Cover(num_sets=3, labels={0: (0,), 1: (), 2: (2,)}))


def test_covering_simplex_is_minimal():
    T = standard_simplex(2)
    C = Cover(num_sets=3, labels={0: (0, 1, 2), 1: (1,), 2: (2,)})
    assert covering_simplex(T.complex, C) == (0,)


def test_identity_cover_has_no_covering_simplex():
    S, C = sphere_with_identity(2)
    assert covering_simplex(S.complex, C) is None
    f = pl_map(S, C)
    assert image_in_boundary(f) == (True, None)


def test_covering_cover_maps_into_the_interior():
    T = standard_simplex(2)
    C = Cover(num_sets=3, labels={0: (0,), 1: (1,), 2: (2,)})
    with pytest.raises(ImageNotInBoundary):
        require_boundary_image(pl_map(T, C))


def test_default_partition_is_uniform():
    S = standard_sphere(1)
    C = Cover(num_sets=3, labels={0: (0, 1), 1: (1,), 2: (1,)})
    phi = default_partition(S.complex, C)
    assert phi.weights[0] == (Fraction(1, 2), Fraction(1, 2), Fraction(0))
    assert phi.support(1) == (1,)


def test_partition_must_sum_to_one_exactly():
    C = Cover(num_sets=3, labels={0: (0, 1)})
    phi = PartitionOfUnity(weights={0: (Fraction(1, 2), Fraction(1, 3), Fraction(0))})
    with pytest.raises(NotSubordinate) as caught:
        check_partition(C, phi, [0])
    assert caught.value.detail["sum"] == "5/6"
    assert caught.value.detail["vertex"] == 0


def test_partition_must_stay_inside_labels():
    C = Cover(num_sets=3, labels={0: (0,)})
    phi = PartitionOfUnity(weights={0: (Fraction(1, 2), Fraction(0), Fraction(1, 2))})
    with pytest.raises(NotSubordinate, match="index 2"):
        check_partition(C, phi, [0])


def test_random_partition_is_subordinate(rng):
    S = standard_sphere(2)
    C = Cover(num_sets=4, labels={0: (0, 1), 1: (1,), 2: (0,), 3: (0, 1)})
    for _ in range(10):
        phi = random_partition(S.complex, C, rng)
        check_partition(C, phi, S.vertex_ids)
        assert all(phi.support(v) == C.labels[v] for v in S.vertex_ids)


def test_cover_of_map_recovers_labels():
    S = standard_sphere(2)
    C = Cover(num_sets=4, labels={0: (0, 1), 1: (1,), 2: (0,), 3: (0, 1)})
    assert cover_of_map(pl_map(S, C)) == C


def test_simplicial_map_as_cover():
    C, phi = simplicial_map_as_cover({0: 1, 1: 0, 2: 2})
    assert C.num_sets == 3
    assert C.labels == {0: (1,), 1: (0,), 2: (2,)}
    assert phi.weights[0] == (Fraction(0), Fraction(1), Fraction(0))
    with pytest.raises(LabelOutOfRange):
        simplicial_map_as_cover({0: 5}, num_sets=3)


def test_subdivided_cover_keeps_covering_status():
    S, C = sphere_with_identity(1)
    S2, C2, phi2 = subdivide_cover(S, C, times=2)
    assert covering_simplex(S2.complex, C2) is None
    check_partition(C2, phi2, S2.vertex_ids)
    # original vertices keep their labels
    corners = [v for v, c in S2.carriers.items() if len(c) == 1]
    assert sorted(C2.labels[v] for v in corners) == [(0,), (1,), (2,)]


def test_constant_cover_labels_everything():
    S = standard_sphere(2)
    C = constant_cover(S)
    assert C.num_sets == 4
    assert set(C.labels.values()) == {(0,)}


def test_covering_simplex_matches_interior_image(subdivided_spheres):
    M = subdivided_spheres[2]
    rng = random.Random(17)
    outcomes = set()
    for _ in range(200):
        extra = rng.choice([0.0, 0.1, 0.3, 0.6])
        labels = {}
        for v in M.vertex_ids:
            size = 1 + sum(rng.random() < extra for _ in range(3))
            labels[v] = tuple(sorted(rng.sample(range(4), size)))
        C = Cover(num_sets=4, labels=labels)
        hit = covering_simplex(M.complex, C)
        outcomes.add(hit is None)
        for _ in range(3):
            f = pl_map(M, C, random_partition(M.complex, C, rng))
            inside, facet = image_in_boundary(f)
            assert inside == (hit is None)
            if hit is not None:
                assert set(hit) <= set(facet)
            for simplex in M.complex.facets:
                weights = [Fraction(rng.randint(1, 9)) for _ in simplex]
                total = sum(weights)
                point = [sum(w * f.vertex_images[v][i] for w, v in zip(weights, simplex)) / total for i in range(4)]
                covered = set().union(*(C.labels[v] for v in simplex)) == {0, 1, 2, 3}
                assert all(x > 0 for x in point) == covered
    assert outcomes == {True, False}
