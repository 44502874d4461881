"""
Covers by open vertex stars and the induced map into the simplex.

U_i is the union of the open stars of vertices labeled i, so a point lies in
U_i exactly when its carrier simplex has an i-labeled vertex. The total
intersection is empty iff no simplex is jointly labeled with every index.
"""
import logging
import random
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from errors import (
    ImageNotInBoundary, LabelOutOfRange, MissingVertex, NotSubordinate, ValidationError,
)
from models.complex import OrientedPseudomanifold, Simplex, SimplicialComplex
from models.cover import Cover, PartitionOfUnity, PLMap
from services.simplicial import barycentric_subdivide
from utils.rational import format_rational

logger = logging.getLogger(__name__)


def check_cover(K: SimplicialComplex, C: Cover) -> None:
    """Every vertex of K labeled, with nonempty in-range label sets"""
    if C.num_sets < 1:
        raise ValidationError("cover needs at least one set", {"num_sets": C.num_sets})
    for v in K.vertex_ids:
        if v not in C.labels:
            raise MissingVertex(f"vertex {v} has no labels", {"vertex": v})
    for v, labels in C.labels.items():
        if not labels:
            raise ValidationError(f"vertex {v} has an empty label set", {"vertex": v})
        bad = [i for i in labels if i < 0 or i >= C.num_sets]
        if bad:
            raise LabelOutOfRange(
                f"vertex {v} has label {bad[0]} outside 0..{C.num_sets - 1}",
                {"vertex": v, "label": bad[0], "num_sets": C.num_sets}
            )


def covering_simplex(K: SimplicialComplex, C: Cover) -> Optional[Simplex]:
    """
    A minimal simplex of K whose label sets jointly cover every index, or None.

    A covering simplex exists iff some facet is covering; the returned face is
    shrunk vertex by vertex inside the first covering facet.
    """
    check_cover(K, C)
    full = (1 << C.num_sets) - 1
    masks = C.masks()
    for facet in K.facets:
        bits = 0
        for v in facet:
            bits |= masks[v]
        if bits != full:
            continue
        face = list(facet)
        for v in list(facet):
            rest = [u for u in face if u != v]
            rest_bits = 0
            for u in rest:
                rest_bits |= masks[u]
            if rest and rest_bits == full:
                face = rest
        return tuple(face)
    return None


def default_partition(K: SimplicialComplex, C: Cover) -> PartitionOfUnity:
    """Uniform weights over each vertex's labels"""
    check_cover(K, C)
    weights = {}
    for v in K.vertex_ids:
        labels = set(C.labels[v])
        share = Fraction(1, len(labels))
        weights[v] = tuple(share if i in labels else Fraction(0) for i in range(C.num_sets))
    return PartitionOfUnity(weights=weights)


def random_partition(K: SimplicialComplex, C: Cover, rng: random.Random,
                     max_weight: int = 9) -> PartitionOfUnity:
    """Random subordinate rational partition whose supports equal the label sets"""
    check_cover(K, C)
    weights = {}
    for v in K.vertex_ids:
        raw = {i: rng.randint(1, max_weight) for i in C.labels[v]}
        total = sum(raw.values())
        weights[v] = tuple(Fraction(raw.get(i, 0), total) for i in range(C.num_sets))
    return PartitionOfUnity(weights=weights)


def check_partition(C: Cover, phi: PartitionOfUnity, vertices: Iterable[int]) -> None:
    for v in vertices:
        if v not in phi.weights:
            raise MissingVertex(f"vertex {v} has no weights", {"vertex": v})
        w = phi.weights[v]
        if len(w) != C.num_sets:
            raise NotSubordinate(
                f"vertex {v} needs {C.num_sets} weights, got {len(w)}",
                {"vertex": v}
            )
        total = sum(w, Fraction(0))
        if any(x < 0 for x in w) or total != 1:
            raise NotSubordinate(
                f"weights of vertex {v} sum to {format_rational(total)}, not 1",
                {"vertex": v, "sum": format_rational(total), "weights": [format_rational(x) for x in w]}
            )
        labels = set(C.labels[v])
        stray = [i for i, x in enumerate(w) if x > 0 and i not in labels]
        if stray:
            raise NotSubordinate(
                f"vertex {v} has weight on index {stray[0]} outside its labels",
                {"vertex": v, "index": stray[0]}
            )


def pl_map(M: OrientedPseudomanifold, C: Cover, phi: Optional[PartitionOfUnity] = None) -> PLMap:
    """f(x) = sum phi_i(x) v_i, affine on every simplex"""
    phi = phi or default_partition(M.complex, C)
    check_cover(M.complex, C)
    check_partition(C, phi, M.vertex_ids)
    return PLMap(
        source=M,
        target_dim=C.num_sets - 1,
        vertex_images={v: tuple(phi.weights[v]) for v in M.vertex_ids},
    )


def image_in_boundary(f: PLMap) -> Tuple[bool, Optional[Simplex]]:
    """
    Whether f lands in the boundary of the target simplex.

    Checked on facets: every face of a facet inherits the facet's common
    vanishing coordinate.
    """
    for facet in f.source.complex.facets:
        common = ~0
        for v in facet:
            common &= f.zero_mask(v)
        if not common & ((1 << (f.target_dim + 1)) - 1):
            return False, facet
    return True, None


def require_boundary_image(f: PLMap) -> None:
    ok, witness = image_in_boundary(f)
    if not ok:
        raise ImageNotInBoundary(
            f"simplex {list(witness)} maps into the interior of the target simplex",
            {"simplex": list(witness)}
        )


def cover_of_map(f: PLMap) -> Cover:
    """Labels = supports of the vertex images: U_i is the preimage of the open star of v_i"""
    labels = {
        v: tuple(i for i, w in enumerate(image) if w > 0)
        for v, image in f.vertex_images.items()
    }
    return Cover(num_sets=f.target_dim + 1, labels=labels)


def restrict_cover(C: Cover, vertices: Iterable[int]) -> Cover:
    labels = {}
    for v in vertices:
        if v not in C.labels:
            raise MissingVertex(f"vertex {v} is not labeled by the cover", {"vertex": v})
        labels[v] = C.labels[v]
    return Cover(num_sets=C.num_sets, labels=labels)


def relabel_cover(C: Cover, mapping: Mapping[int, int]) -> Cover:
    """Move labels along a vertex mapping (old id -> new id)"""
    return Cover(num_sets=C.num_sets, labels={mapping[v]: ls for v, ls in C.labels.items()})


def simplicial_map_as_cover(vertex_map: Mapping[int, int],
                            num_sets: Optional[int] = None) -> Tuple[Cover, PartitionOfUnity]:
    """Singleton labels and unit weights reproducing a simplicial map into the target simplex"""
    if not vertex_map:
        raise ValidationError("vertex map is empty")
    size = num_sets if num_sets is not None else max(vertex_map.values()) + 1
    bad = {v: t for v, t in vertex_map.items() if t < 0 or t >= size}
    if bad:
        v = min(bad)
        raise LabelOutOfRange(f"vertex {v} maps to {bad[v]} outside 0..{size - 1}", {"vertex": v})
    labels = {v: (t,) for v, t in vertex_map.items()}
    weights = {
        v: tuple(Fraction(1 if i == t else 0) for i in range(size))
        for v, t in vertex_map.items()
    }
    return Cover(num_sets=size, labels=labels), PartitionOfUnity(weights=weights)


def subdivide_cover(M: OrientedPseudomanifold, C: Cover, phi: Optional[PartitionOfUnity] = None,
                    times: int = 1) -> Tuple[OrientedPseudomanifold, Cover, PartitionOfUnity]:
    """
    Transport a cover and partition through barycentric subdivision.

    A new vertex b(F) receives the union of the labels of F and the average of
    their weights, which keeps the PL map and the covering status unchanged.
    """
    phi = phi or default_partition(M.complex, C)
    current, labels, weights = M, dict(C.labels), dict(phi.weights)
    for _ in range(times):
        current = barycentric_subdivide(current, 1)
        new_labels: Dict[int, Tuple[int, ...]] = {}
        new_weights: Dict[int, Tuple[Fraction, ...]] = {}
        for v, face in current.vertex_origin.items():
            new_labels[v] = tuple(sorted({i for u in face for i in labels[u]}))
            new_weights[v] = tuple(
                sum((weights[u][i] for u in face), Fraction(0)) / len(face)
                for i in range(C.num_sets)
            )
        labels, weights = new_labels, new_weights
    return current, Cover(num_sets=C.num_sets, labels=labels), PartitionOfUnity(weights=weights)


def identity_cover(M: OrientedPseudomanifold) -> Cover:
    """labels(v_k) = {k} on a complex whose vertices are 0..N-1"""
    return Cover(num_sets=len(M.vertex_ids), labels={v: (i,) for i, v in enumerate(M.vertex_ids)})
