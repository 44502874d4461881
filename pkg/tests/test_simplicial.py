import pytest

from errors import (
    DegenerateFacet, DuplicateFacet, EmptyBoundary, HasBoundary, MixedDimension, NonOrientable,
    NotClosed, NotPseudomanifold, NotStronglyConnected,
)
from services.fixtures import cone_over_hexagon, hexagon, rp2_complex
from services.simplicial import (
    barycentric_subdivide, boundary_components, boundary_of, build_complex, cone, facet_signs,
    induced_boundary, induced_face_sign, prism, relabel, relative_orientation, reverse_orientation,
    standard_simplex, standard_sphere, validate_pseudomanifold,
)


def test_build_complex_canonicalizes():
    K = build_complex([(2, 1, 0), (3, 1, 2)])
    assert K.facets == ((0, 1, 2), (1, 2, 3))
    assert K.vertex_ids == (0, 1, 2, 3)
    assert K.dimension == 2


@pytest.mark.parametrize("facets, error", [
    ([(0, 1, 2), (2, 3)], MixedDimension),
    ([(0, 1, 2), (2, 1, 0)], DuplicateFacet),
    ([(0, 1, 1)], DegenerateFacet),
])
def test_build_complex_rejects(facets, error):
    with pytest.raises(error):
        build_complex(facets)


def test_three_facets_on_an_edge_is_not_a_pseudomanifold():
    K = build_complex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    with pytest.raises(NotPseudomanifold):
        validate_pseudomanifold(K)


def test_disconnected_facets_rejected():
    K = build_complex([(0, 1, 2), (3, 4, 5)])
    with pytest.raises(NotStronglyConnected):
        validate_pseudomanifold(K)


def test_rp2_is_not_orientable():
    with pytest.raises(NonOrientable):
        validate_pseudomanifold(rp2_complex())


def test_supplied_incoherent_orientation_rejected():
    K = standard_sphere(2).complex
    with pytest.raises(NonOrientable):
        validate_pseudomanifold(K, orientation=[1, 1, 1, 1])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_sphere_is_closed_with_alternating_signs(n):
    S = standard_sphere(n)
    assert S.is_closed
    # facet k in ascending order omits vertex n + 1 - k
    assert facet_signs(S) == [(-1) ** k for k in range(n + 2)]


def test_want_closed_rejects_disc():
    with pytest.raises(HasBoundary):
        validate_pseudomanifold(standard_simplex(2).complex, want_closed=True)


def test_induced_face_sign_convention():
    assert induced_face_sign(1, 2, 2) == -1
    assert induced_face_sign(1, 1, 2) == 1
    assert induced_face_sign(-1, 0, 2) == 1


def test_boundary_of_triangle_is_a_closed_cycle():
    T = standard_simplex(2)
    A = boundary_of(T)
    assert A.is_closed
    assert A.complex.facets == ((0, 1), (0, 2), (1, 2))
    assert sorted(induced_boundary(T)) == [(0, 2), (1, 0), (2, 1)]


def test_closed_complex_has_no_boundary():
    with pytest.raises(EmptyBoundary):
        boundary_of(standard_sphere(1))


@pytest.mark.parametrize("times, facets, vertices", [(1, 6, 7), (2, 36, 25)])
def test_subdivision_counts(times, facets, vertices):
    T = barycentric_subdivide(standard_simplex(2), times)
    assert len(T.complex.facets) == facets
    assert len(T.vertex_ids) == vertices
    assert T.complex.euler_characteristic() == 1
    assert len(T.boundary_faces) == 3 * 2 ** times


def test_subdivision_keeps_carriers_in_the_root_simplex():
    T = barycentric_subdivide(standard_simplex(2), 2)
    assert set(T.carriers) == set(T.vertex_ids)
    assert all(set(c) <= {0, 1, 2} for c in T.carriers.values())
    assert sum(1 for c in T.carriers.values() if len(c) == 1) == 3


def test_subdivided_sphere_boundary_orientation_is_coherent():
    S = barycentric_subdivide(standard_sphere(2), 1)
    assert S.is_closed
    # revalidating with the carried orientation succeeds
    validate_pseudomanifold(S.complex, want_closed=True, orientation=facet_signs(S))


def test_prism_over_an_edge():
    P = prism(standard_simplex(1))
    assert len(P.manifold.complex.facets) == 2
    assert P.manifold.dimension == 2
    assert set(P.bottom) == set(P.top) == {0, 1}


@pytest.mark.parametrize("layers", [0, 1, 2])
def test_prism_over_sphere_has_two_boundary_copies(layers):
    S = standard_sphere(1)
    P = prism(S, layers=layers)
    assert len(P.manifold.complex.facets) == 2 * len(S.complex.facets) * (layers + 1)
    components = boundary_components(boundary_of(P.manifold))
    assert len(components) == 2
    ends = {tuple(sorted(c.vertex_ids)) for c in components}
    assert ends == {tuple(sorted(P.bottom.values())), tuple(sorted(P.top.values()))}


def test_cone_boundary_is_the_base():
    X = cone_over_hexagon()
    A = boundary_of(X)
    H = hexagon()
    assert A.complex.facets == H.complex.facets
    assert facet_signs(A) == facet_signs(H)
    assert 6 in X.vertex_ids and 6 not in A.vertex_ids


def test_cone_needs_closed_base():
    with pytest.raises(NotClosed):
        cone(standard_simplex(2))


def test_reverse_orientation_flips_every_facet():
    S = standard_sphere(2)
    R = reverse_orientation(S)
    assert facet_signs(R) == [-s for s in facet_signs(S)]
    assert relative_orientation(S, R) == -1
    assert relative_orientation(S, S) == 1


def test_relabel_preserves_structure():
    S = standard_sphere(2)
    shifted = relabel(S, {v: v + 10 for v in S.vertex_ids})
    assert shifted.vertex_ids == (10, 11, 12, 13)
    assert relative_orientation(S, shifted) == 1
    assert relative_orientation(S, standard_sphere(1)) is None
