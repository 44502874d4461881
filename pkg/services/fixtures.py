"""Canonical inputs: spheres, discs, Sperner discs, the hexagon cone, RP^2 and the Hopf map."""
import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from errors import ValidationError
from models.complex import GeometricRealization, OrientedPseudomanifold, SimplicialComplex
from models.cover import Cover
from services.cover import identity_cover, simplicial_map_as_cover
from services.simplicial import (
    barycentric_subdivide, build_complex, cone, standard_simplex, standard_sphere,
    validate_pseudomanifold,
)

logger = logging.getLogger(__name__)

RP2_FACETS = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
]


def sphere_with_identity(n: int) -> Tuple[OrientedPseudomanifold, Cover]:
    """Boundary of the (n+1)-simplex with labels(v_k) = {k}"""
    M = standard_sphere(n)
    return M, identity_cover(M)


def constant_cover(M: OrientedPseudomanifold, label: int = 0, num_sets: int = None) -> Cover:
    size = num_sets if num_sets is not None else M.dimension + 2
    return Cover(num_sets=size, labels={v: (label,) for v in M.vertex_ids})


def rp2_complex() -> SimplicialComplex:
    """Six-vertex projective plane; not orientable"""
    return build_complex(RP2_FACETS)


def sperner_disc(times: int) -> Tuple[OrientedPseudomanifold, Cover]:
    """
    Barycentric subdivisions of the 2-simplex with the canonical Sperner
    labeling: each vertex takes the smallest root vertex of its carrier.
    """
    T = standard_simplex(2)
    if times:
        T = barycentric_subdivide(T, times)
    carriers = T.carriers or {v: (v,) for v in T.vertex_ids}
    labels = {v: (min(carriers[v]),) for v in T.vertex_ids}
    return T, Cover(num_sets=3, labels=labels)


def hexagon() -> OrientedPseudomanifold:
    """Six-cycle with vertices on a regular-ish rational hexagon"""
    K = build_complex([(i, (i + 1) % 6) for i in range(6)])
    points = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]
    realization = GeometricRealization(coordinates={
        i: (Fraction(x), Fraction(y)) for i, (x, y) in enumerate(points)
    })
    return validate_pseudomanifold(K, want_closed=True, realization=realization)


def cone_over_hexagon() -> OrientedPseudomanifold:
    """Disc with 6 boundary vertices and one interior vertex (id 6)"""
    return cone(hexagon())


def hopf_map() -> Tuple[OrientedPseudomanifold, Dict[int, int]]:
    """
    Simplicial Hopf map from a 15-vertex 3-sphere onto the boundary of the
    3-simplex.

    The source is the boundary of the convex hull of two triangles a_0a_1a_2
    and b_0b_1b_2 lying in orthogonal planes of R^4, each tetrahedron
    a_i a_{i+1} b_j b_{j+1} cut along the midpoints m_ij = (a_i + b_j)/2 into
    two triangular prisms of three tetrahedra each. Vertex ids: a_i = i,
    b_j = 3 + j, m_ij = 6 + 3i + j. Map: a_i -> 3, b_j -> 0, m_ij -> (i - j) mod 3.
    """
    def a(i):
        return i % 3

    def b(j):
        return 3 + j % 3

    def m(i, j):
        return 6 + 3 * (i % 3) + j % 3

    facets: List[Tuple[int, ...]] = []
    for i in range(3):
        for j in range(3):
            facets.append((a(i), a(i + 1), m(i + 1, j), m(i + 1, j + 1)))
            facets.append((a(i), m(i, j), m(i + 1, j), m(i + 1, j + 1)))
            facets.append((a(i), m(i, j), m(i, j + 1), m(i + 1, j + 1)))
            facets.append((b(j), b(j + 1), m(i, j + 1), m(i + 1, j + 1)))
            facets.append((b(j), m(i, j), m(i, j + 1), m(i + 1, j + 1)))
            facets.append((b(j), m(i, j), m(i + 1, j), m(i + 1, j + 1)))

    a_points = [(1, 0), (-1, 1), (-1, -1)]
    b_points = [(1, 0), (-1, 1), (-1, -1)]
    coordinates = {}
    for i, (x, y) in enumerate(a_points):
        coordinates[a(i)] = (Fraction(x), Fraction(y), Fraction(0), Fraction(0))
    for j, (z, w) in enumerate(b_points):
        coordinates[b(j)] = (Fraction(0), Fraction(0), Fraction(z), Fraction(w))
    for i in range(3):
        for j in range(3):
            coordinates[m(i, j)] = tuple(
                (p + q) / 2 for p, q in zip(coordinates[a(i)], coordinates[b(j)])
            )

    K = build_complex(facets)
    M = validate_pseudomanifold(K, want_closed=True, realization=GeometricRealization(coordinates=coordinates))
    vertex_map = {a(i): 3 for i in range(3)}
    vertex_map.update({b(j): 0 for j in range(3)})
    vertex_map.update({m(i, j): (i - j) % 3 for i in range(3) for j in range(3)})
    return M, vertex_map


def hopf_cover() -> Tuple[OrientedPseudomanifold, Cover]:
    M, vertex_map = hopf_map()
    C, _ = simplicial_map_as_cover(vertex_map, num_sets=4)
    return M, C


def build(name: str) -> Dict[str, object]:
    """Named fixture as {"complex": ..., "cover": ...} domain objects"""
    builders = {
        "sphere1": lambda: sphere_with_identity(1),
        "sphere2": lambda: sphere_with_identity(2),
        "sphere3": lambda: sphere_with_identity(3),
        "disc": lambda: (standard_simplex(2), Cover(num_sets=3, labels={0: (0,), 1: (1,), 2: (2,)})),
        "sperner0": lambda: sperner_disc(0),
        "sperner1": lambda: sperner_disc(1),
        "sperner2": lambda: sperner_disc(2),
        "cone-hexagon": lambda: (cone_over_hexagon(), None),
        "hopf": hopf_cover,
    }
    if name == "rp2":
        return {"complex": rp2_complex(), "cover": None}
    if name not in builders:
        raise ValidationError(
            f"unknown fixture {name!r}",
            {"fixture": name, "known": sorted(list(builders) + ["rp2"])}
        )
    complex_, cover = builders[name]()
    logger.debug(f"built fixture {name}")
    return {"complex": complex_, "cover": cover}


FIXTURE_NAMES = (
    "sphere1", "sphere2", "sphere3", "disc", "sperner0", "sperner1", "sperner2",
    "cone-hexagon", "hopf", "rp2",
)
