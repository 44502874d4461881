"""
Complexes, orientations, boundaries, subdivision and prisms.

Orientation conventions:
  * a facet orientation is the even-permutation class of its vertex tuple;
  * induced boundary orientation is outward-normal-last: the face tuple t of
    an oriented facet s is induced when (t, x) is positively oriented for a
    point x displaced outward, i.e. (t, v) is negatively oriented for the
    opposite vertex v. For s = (v_0..v_d) the face omitting v_k is induced
    as (-1)^(d-k+1) times its listed order.
"""
import logging
from collections import deque
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from errors import (
    DegenerateFacet, DuplicateFacet, EmptyBoundary, HasBoundary, MixedDimension,
    NonOrientable, NotClosed, NotPseudomanifold, NotStronglyConnected, ValidationError,
)
from models.complex import (
    GeometricRealization, OrientedPseudomanifold, PrismComplex, Simplex, SimplicialComplex,
)
from utils.rational import permutation_parity

logger = logging.getLogger(__name__)


def build_complex(facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Validate a facet list and return the canonical pure complex"""
    raw = [list(f) for f in facets]
    if not raw:
        raise ValidationError("complex needs at least one facet")
    sizes = {len(f) for f in raw}
    if len(sizes) != 1:
        raise MixedDimension(
            "facets have different sizes",
            {"sizes": sorted(sizes)}
        )
    canonical = []
    for facet in raw:
        ordered = tuple(sorted(int(v) for v in facet))
        if len(set(ordered)) != len(ordered):
            raise DegenerateFacet(f"facet {list(facet)} repeats a vertex", {"facet": list(facet)})
        canonical.append(ordered)
    seen = set()
    for facet in canonical:
        if facet in seen:
            raise DuplicateFacet(f"facet {list(facet)} listed twice", {"facet": list(facet)})
        seen.add(facet)
    vertices = sorted({v for f in canonical for v in f})
    return SimplicialComplex(vertex_ids=tuple(vertices), facets=tuple(sorted(canonical)))


def induced_face_sign(facet_sign: int, position: int, dimension: int) -> int:
    """Sign of the ascending face omitting position `position` of an ascending facet"""
    return facet_sign * (-1) ** (dimension - position + 1)


def orientation_sign(oriented: Sequence[int]) -> int:
    """Orientation of an oriented tuple relative to its ascending order"""
    return permutation_parity(oriented)


def orient_tuple(facet: Simplex, facet_sign: int) -> Simplex:
    if facet_sign > 0 or len(facet) < 2:
        return tuple(facet)
    return (facet[1], facet[0]) + tuple(facet[2:])


def _face_incidence(facets: Sequence[Simplex]) -> Dict[Simplex, List[Tuple[int, int]]]:
    """(d-1)-face -> [(facet index, position of the omitted vertex)]"""
    incidence: Dict[Simplex, List[Tuple[int, int]]] = {}
    for index, facet in enumerate(facets):
        for position in range(len(facet)):
            face = facet[:position] + facet[position + 1:]
            incidence.setdefault(face, []).append((index, position))
    return incidence


def validate_pseudomanifold(
    K: SimplicialComplex,
    want_closed: bool = False,
    orientation: Optional[Sequence[int]] = None,
    realization: Optional[GeometricRealization] = None,
) -> OrientedPseudomanifold:
    """
    Check the pseudomanifold conditions and return K with a coherent orientation.

    Without a supplied orientation the first facet (lexicographic order) is
    oriented ascending and the orientation is propagated across interior faces.
    """
    d = K.dimension
    if d < 1:
        raise NotPseudomanifold("pseudomanifolds need dimension at least 1", {"dimension": d})
    incidence = _face_incidence(K.facets)
    crowded = [face for face, hits in incidence.items() if len(hits) > 2]
    if crowded:
        raise NotPseudomanifold(
            f"face {list(crowded[0])} lies in {len(incidence[crowded[0]])} facets",
            {"face": list(crowded[0])}
        )

    graph = nx.Graph()
    graph.add_nodes_from(range(len(K.facets)))
    for hits in incidence.values():
        if len(hits) == 2:
            graph.add_edge(hits[0][0], hits[1][0])
    if not nx.is_connected(graph):
        raise NotStronglyConnected(
            "facet adjacency graph is disconnected",
            {"components": nx.number_connected_components(graph)}
        )

    if orientation is not None:
        if len(orientation) != len(K.facets):
            raise ValidationError("orientation needs one sign per facet")
        signs = [1 if s > 0 else -1 for s in orientation]
    else:
        signs = _propagate_orientation(K, incidence, graph)

    for face, hits in incidence.items():
        if len(hits) != 2:
            continue
        (a, pa), (b, pb) = hits
        total = induced_face_sign(signs[a], pa, d) + induced_face_sign(signs[b], pb, d)
        if total != 0:
            raise NonOrientable(
                f"orientation is incoherent across face {list(face)}",
                {"face": list(face), "supplied": orientation is not None}
            )

    boundary = tuple(sorted(face for face, hits in incidence.items() if len(hits) == 1))
    if want_closed and boundary:
        raise HasBoundary(
            f"complex has {len(boundary)} boundary faces",
            {"boundary_faces": [list(f) for f in boundary[:10]]}
        )
    if realization is not None:
        missing = [v for v in K.vertex_ids if v not in realization.coordinates]
        if missing:
            raise ValidationError(f"vertex {missing[0]} has no coordinates", {"vertex": missing[0]})

    oriented = tuple(orient_tuple(f, s) for f, s in zip(K.facets, signs))
    logger.debug(f"validated {d}-pseudomanifold with {len(K.facets)} facets, {len(boundary)} boundary faces")
    return OrientedPseudomanifold(
        complex=K,
        oriented_facets=oriented,
        boundary_faces=boundary,
        realization=realization,
    )


def _propagate_orientation(K: SimplicialComplex, incidence, graph: nx.Graph) -> List[int]:
    d = K.dimension
    signs = [0] * len(K.facets)
    signs[0] = 1
    neighbours: Dict[int, List[Tuple[int, int, int]]] = {}
    for hits in incidence.values():
        if len(hits) == 2:
            (a, pa), (b, pb) = hits
            neighbours.setdefault(a, []).append((b, pa, pb))
            neighbours.setdefault(b, []).append((a, pb, pa))
    queue = deque([0])
    while queue:
        current = queue.popleft()
        for other, p_here, p_there in sorted(neighbours.get(current, [])):
            wanted = -induced_face_sign(signs[current], p_here, d) * induced_face_sign(1, p_there, d)
            if signs[other] == 0:
                signs[other] = wanted
                queue.append(other)
            elif signs[other] != wanted:
                raise NonOrientable(
                    "no coherent orientation exists",
                    {"facets": [list(K.facets[current]), list(K.facets[other])]}
                )
    return signs


def facet_signs(M: OrientedPseudomanifold) -> List[int]:
    return [orientation_sign(t) for t in M.oriented_facets]


def reverse_orientation(M: OrientedPseudomanifold) -> OrientedPseudomanifold:
    flipped = tuple(orient_tuple(f, -s) for f, s in zip(M.complex.facets, facet_signs(M)))
    return M.model_copy(update={"oriented_facets": flipped})


def induced_boundary(M: OrientedPseudomanifold) -> List[Simplex]:
    """Boundary faces as oriented tuples carrying the induced orientation"""
    d = M.dimension
    wanted = set(M.boundary_faces)
    oriented = []
    for facet, s in zip(M.complex.facets, facet_signs(M)):
        for position in range(len(facet)):
            face = facet[:position] + facet[position + 1:]
            if face in wanted:
                oriented.append(orient_tuple(face, induced_face_sign(s, position, d)))
    return sorted(oriented, key=lambda t: tuple(sorted(t)))


def boundary_of(M: OrientedPseudomanifold) -> OrientedPseudomanifold:
    """Boundary complex with the outward-normal-last induced orientation"""
    if not M.boundary_faces:
        raise EmptyBoundary("pseudomanifold has no boundary")
    oriented = induced_boundary(M)
    K = build_complex(oriented)
    by_face = {tuple(sorted(t)): t for t in oriented}
    realization = _restrict_realization(M.realization, K.vertex_ids)
    signs = [orientation_sign(by_face[f]) for f in K.facets]
    graph = _adjacency(K)
    oriented_facets = tuple(by_face[f] for f in K.facets)
    # the boundary may have several components, so the connectivity check is per component
    if K.dimension >= 1:
        for face, hits in _face_incidence(K.facets).items():
            if len(hits) > 2:
                raise NotPseudomanifold(f"boundary face {list(face)} is singular", {"face": list(face)})
            if len(hits) == 1:
                raise NotClosed("boundary of a pseudomanifold should be closed", {"face": list(face)})
            (a, pa), (b, pb) = hits
            if induced_face_sign(signs[a], pa, K.dimension) + induced_face_sign(signs[b], pb, K.dimension):
                raise NonOrientable("induced boundary orientation is incoherent", {"face": list(face)})
    logger.debug(f"boundary has {nx.number_connected_components(graph)} components")
    return OrientedPseudomanifold(
        complex=K,
        oriented_facets=oriented_facets,
        boundary_faces=(),
        realization=realization,
        carriers=_restrict_map(M.carriers, K.vertex_ids),
    )


def boundary_components(M: OrientedPseudomanifold) -> List[OrientedPseudomanifold]:
    """Connected components of a closed (possibly disconnected) oriented complex"""
    graph = _adjacency(M.complex)
    pieces = []
    for component in sorted(nx.connected_components(graph), key=min):
        indices = sorted(component)
        facets = [M.complex.facets[i] for i in indices]
        K = build_complex(facets)
        by_face = {M.complex.facets[i]: M.oriented_facets[i] for i in indices}
        pieces.append(OrientedPseudomanifold(
            complex=K,
            oriented_facets=tuple(by_face[f] for f in K.facets),
            realization=_restrict_realization(M.realization, K.vertex_ids),
        ))
    return pieces


def _adjacency(K: SimplicialComplex) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(K.facets)))
    for hits in _face_incidence(K.facets).values():
        for (a, _), (b, _) in zip(hits, hits[1:]):
            graph.add_edge(a, b)
    return graph


def _restrict_realization(realization: Optional[GeometricRealization], vertices: Iterable[int]):
    if realization is None:
        return None
    return GeometricRealization(coordinates={v: realization.coordinates[v] for v in vertices})


def _restrict_map(mapping: Optional[Mapping[int, Simplex]], vertices: Iterable[int]):
    if mapping is None:
        return None
    return {v: mapping[v] for v in vertices if v in mapping}


def barycentric_subdivide(M: OrientedPseudomanifold, times: int = 1) -> OrientedPseudomanifold:
    """
    Barycentric subdivision, `times` rounds.

    New vertex ids enumerate the faces of the previous complex (by dimension,
    then lexicographically); vertex_origin records the face, carriers the face
    of the root complex. The facet (b(F_0), .., b(F_d)) of the flag
    F_0 < .. < F_d built along the oriented tuple permuted by pi receives the
    sign of pi, which preserves the fundamental class.
    """
    if times < 1:
        raise ValidationError("subdivision count must be positive", {"times": times})
    current = M
    for _ in range(times):
        current = _subdivide_once(current)
    logger.info(f"subdivided {M.dimension}-complex {times}x: {len(M.complex.facets)} -> {len(current.complex.facets)} facets")
    return current


def _subdivide_once(M: OrientedPseudomanifold) -> OrientedPseudomanifold:
    K = M.complex
    d = K.dimension
    faces: List[Simplex] = []
    for k in range(d + 1):
        faces.extend(K.faces(k))
    face_id = {face: index for index, face in enumerate(faces)}

    root = M.carriers or {v: (v,) for v in K.vertex_ids}
    carriers = {}
    for face, index in face_id.items():
        carriers[index] = tuple(sorted({r for v in face for r in root[v]}))

    new_facets = []
    for oriented in M.oriented_facets:
        for perm in permutations(range(d + 1)):
            chain = tuple(
                face_id[tuple(sorted(oriented[perm[j]] for j in range(k + 1)))]
                for k in range(d + 1)
            )
            new_facets.append(chain if permutation_parity(perm) > 0 else _odd(chain))
    K_new = build_complex(new_facets)
    by_face = {tuple(sorted(t)): t for t in new_facets}

    realization = None
    if M.realization is not None:
        coordinates = {}
        for face, index in face_id.items():
            points = [M.realization.coordinates[v] for v in face]
            coordinates[index] = tuple(
                sum((p[i] for p in points), Fraction(0)) / len(points) for i in range(len(points[0]))
            )
        realization = GeometricRealization(coordinates=coordinates)

    boundary = [face for face, hits in _face_incidence(K_new.facets).items() if len(hits) == 1]
    return OrientedPseudomanifold(
        complex=K_new,
        oriented_facets=tuple(by_face[f] for f in K_new.facets),
        boundary_faces=tuple(sorted(boundary)),
        realization=realization,
        vertex_origin={index: face for face, index in face_id.items()},
        carriers=carriers,
    )


def _odd(chain: Simplex) -> Simplex:
    """Chain tuple with reversed orientation"""
    return (chain[1], chain[0]) + chain[2:]


def prism(M: OrientedPseudomanifold, vertex_order: Optional[Sequence[int]] = None,
          layers: int = 0) -> PrismComplex:
    """
    Staircase triangulation of |M| x [0,1].

    Bottom vertices keep their ids; layer l (with `layers` intermediate layers
    between bottom and top) is shifted by l * (max id + 1). The orientation
    makes the top copy's induced orientation agree with M, so the bottom copy
    carries the reverse.
    """
    order = list(vertex_order) if vertex_order is not None else list(M.vertex_ids)
    if sorted(order) != list(M.vertex_ids):
        raise ValidationError("vertex order must list every vertex exactly once")
    if layers < 0:
        raise ValidationError("layer count must be nonnegative", {"layers": layers})
    rank_of = {v: i for i, v in enumerate(order)}
    shift = max(M.vertex_ids) - min(M.vertex_ids) + 1
    levels = [{v: v + l * shift for v in M.vertex_ids} for l in range(layers + 2)]
    bottom, top = levels[0], levels[-1]

    cells = []
    for lower, upper in zip(levels, levels[1:]):
        for facet in M.complex.facets:
            ordered = sorted(facet, key=rank_of.__getitem__)
            for i in range(len(ordered)):
                cells.append(tuple(lower[v] for v in ordered[:i + 1]) + tuple(upper[v] for v in ordered[i:]))
    K = build_complex(cells)

    realization = None
    if M.realization is not None:
        coordinates = {}
        for l, level in enumerate(levels):
            height = Fraction(l, layers + 1)
            for v, point in M.realization.coordinates.items():
                coordinates[level[v]] = tuple(point) + (height,)
        realization = GeometricRealization(coordinates=coordinates)

    W = validate_pseudomanifold(K, realization=realization)
    W = _align_with_top(W, M, top)
    logger.info(f"prism over {len(M.complex.facets)} facets has {len(K.facets)} cells")
    return PrismComplex(manifold=W, base=M, bottom=bottom, top=top)


def _align_with_top(W: OrientedPseudomanifold, M: OrientedPseudomanifold, top: Dict[int, int]) -> OrientedPseudomanifold:
    wanted = {tuple(sorted(top[v] for v in f)): orientation_sign(tuple(top[v] for v in t))
              for f, t in zip(M.complex.facets, M.oriented_facets)}
    for face in induced_boundary(W):
        key = tuple(sorted(face))
        if key in wanted:
            if orientation_sign(face) != wanted[key]:
                return reverse_orientation(W)
            return W
    return W


def cone(M: OrientedPseudomanifold, apex: Optional[int] = None) -> OrientedPseudomanifold:
    """Cone over a closed pseudomanifold; its boundary is M with M's orientation"""
    if not M.is_closed:
        raise NotClosed("cone needs a closed pseudomanifold")
    apex = max(M.vertex_ids) + 1 if apex is None else apex
    if apex in M.vertex_ids:
        raise ValidationError(f"apex {apex} is already a vertex", {"apex": apex})
    K = build_complex([tuple(f) + (apex,) for f in M.complex.facets])
    realization = None
    if M.realization is not None:
        dim = M.realization.ambient_dimension
        coordinates = {v: tuple(p) + (Fraction(0),) for v, p in M.realization.coordinates.items()}
        coordinates[apex] = tuple(Fraction(0) for _ in range(dim)) + (Fraction(1),)
        realization = GeometricRealization(coordinates=coordinates)
    W = validate_pseudomanifold(K, realization=realization)
    identity = {v: v for v in M.vertex_ids}
    return _align_with_top(W, M, identity)


def standard_simplex(n: int) -> OrientedPseudomanifold:
    """Solid n-simplex on vertices 0..n with coordinates e_0..e_n"""
    K = build_complex([tuple(range(n + 1))])
    return validate_pseudomanifold(K, realization=_unit_vectors(n + 1))


def standard_sphere(n: int) -> OrientedPseudomanifold:
    """Boundary of the (n+1)-simplex on vertices 0..n+1"""
    vertices = list(range(n + 2))
    K = build_complex([tuple(v for v in vertices if v != k) for k in vertices])
    return validate_pseudomanifold(K, want_closed=True, realization=_unit_vectors(n + 2))


def _unit_vectors(count: int) -> GeometricRealization:
    return GeometricRealization(coordinates={
        v: tuple(Fraction(1 if i == v else 0) for i in range(count)) for v in range(count)
    })


def relabel(M: OrientedPseudomanifold, mapping: Mapping[int, int]) -> OrientedPseudomanifold:
    """Rename vertices through an injective mapping, keeping orientation"""
    if len(set(mapping[v] for v in M.vertex_ids)) != len(M.vertex_ids):
        raise ValidationError("relabeling must be injective")
    oriented = [tuple(mapping[v] for v in t) for t in M.oriented_facets]
    K = build_complex(oriented)
    by_face = {tuple(sorted(t)): t for t in oriented}
    realization = None
    if M.realization is not None:
        realization = GeometricRealization(
            coordinates={mapping[v]: p for v, p in M.realization.coordinates.items()}
        )
    return OrientedPseudomanifold(
        complex=K,
        oriented_facets=tuple(by_face[f] for f in K.facets),
        boundary_faces=tuple(sorted(tuple(sorted(mapping[v] for v in f)) for f in M.boundary_faces)),
        realization=realization,
    )


def canonical_relabel(M: OrientedPseudomanifold) -> Tuple[OrientedPseudomanifold, Dict[int, int]]:
    mapping = {v: i for i, v in enumerate(M.vertex_ids)}
    return relabel(M, mapping), mapping


def relative_orientation(M1: OrientedPseudomanifold, M2: OrientedPseudomanifold) -> Optional[int]:
    """
    +1 or -1 when the canonically relabeled complexes have equal facet sets
    (with equal or opposite orientations), None when they differ.
    """
    A, _ = canonical_relabel(M1)
    B, _ = canonical_relabel(M2)
    if A.complex.facets != B.complex.facets:
        return None
    products = {a * b for a, b in zip(facet_signs(A), facet_signs(B))}
    return products.pop() if len(products) == 1 else None
