"""
Homotopy and cobordism verdicts for covers.

A verdict says what was decided and on what basis: an explicit witness
(a cover of a bounding complex without covering simplex), computed degrees,
or the vanishing of the cobordism group when the source and target sphere
dimensions differ.
"""
import logging
from typing import List, Optional, Tuple

from errors import (
    CoveringSimplexInInput, DimensionMismatch, NotClosed, RecheckFailed, ValidationError,
)
from models.complex import OrientedPseudomanifold
from models.cover import Cover
from models.search import LabelMode, SearchVerdict
from models.verdict import (
    Basis, BoundaryPiece, ClassificationVerdict, Relation, Witness, WitnessKind,
)
from services.cover import check_cover, covering_simplex, restrict_cover
from services.degree import degree_of_cover
from services.homology import is_homology_sphere
from services.obstruction import cone_problem, make_problem, verify_kkm
from services.simplicial import boundary_of, prism, relative_orientation, validate_pseudomanifold

logger = logging.getLogger(__name__)

HOPF_DEGREE = "hopf_degree_theorem"
VANISHING = "cobordism_group_vanishes_for_unequal_dimensions"


def _require_regular(M: OrientedPseudomanifold, C: Cover, name: str) -> None:
    check_cover(M.complex, C)
    hit = covering_simplex(M.complex, C)
    if hit is not None:
        raise CoveringSimplexInInput(
            f"{name} has covering simplex {list(hit)}",
            {"cover": name, "simplex": list(hit)}
        )


def prism_witness(K: OrientedPseudomanifold, S1: Cover, S2: Cover, layers: int = 0,
                  budget: Optional[int] = None, threads: Optional[int] = None) -> Optional[Witness]:
    """
    S1 on the bottom and S2 on the top of a prism over K; intermediate layers
    are labeled by search. Returns the witness or None.
    """
    P = prism(K, layers=layers)
    labels = {P.bottom[v]: S1.labels[v] for v in K.vertex_ids}
    labels.update({P.top[v]: S2.labels[v] for v in K.vertex_ids})
    ends = Cover(num_sets=S1.num_sets, labels=labels)
    problem = make_problem(P.manifold, ends, match_dimension=False)
    certificate = verify_kkm(problem, budget=budget, threads=threads)
    if certificate.verdict != SearchVerdict.EXTENDABLE:
        return None
    pieces = [
        BoundaryPiece(vertex_map=dict(P.bottom), facets=K.complex.facets, cover=S1),
        BoundaryPiece(vertex_map=dict(P.top), facets=K.complex.facets, cover=S2),
    ]
    return Witness(kind=WitnessKind.PRISM, manifold=P.manifold, cover=certificate.witness,
                   pieces=pieces, subdivisions=layers)


def covers_homotopic(K: OrientedPseudomanifold, S1: Cover, S2: Cover, subdivide: int = 0,
                     budget: Optional[int] = None, threads: Optional[int] = None) -> ClassificationVerdict:
    """
    Prism witness first (with up to `subdivide` intermediate layers searched),
    then degrees when the dimensions agree.
    """
    if S1.num_sets != S2.num_sets:
        raise DimensionMismatch(
            "covers use different numbers of sets",
            {"num_sets": [S1.num_sets, S2.num_sets]}
        )
    if not K.is_closed:
        raise NotClosed("homotopies are classified on closed complexes")
    _require_regular(K, S1, "first cover")
    _require_regular(K, S2, "second cover")

    for layers in range(subdivide + 1):
        witness = prism_witness(K, S1, S2, layers, budget, threads)
        if witness is not None:
            logger.info(f"prism witness found with {layers} intermediate layers")
            return ClassificationVerdict(relation=Relation.HOMOTOPIC, basis=Basis.WITNESS, witness=witness)

    m, n = K.dimension, S1.num_sets - 2
    if m != n:
        return ClassificationVerdict(
            relation=Relation.UNKNOWN,
            notes=[f"no prism witness and degrees are undefined for maps S^{m} -> S^{n}"],
        )
    d1 = degree_of_cover(K, S1, threads=threads).degree
    d2 = degree_of_cover(K, S2, threads=threads).degree
    if d1 != d2:
        return ClassificationVerdict(relation=Relation.DISTINCT, basis=Basis.INVARIANT, degrees=(d1, d2))
    if is_homology_sphere(K.complex, m):
        return ClassificationVerdict(
            relation=Relation.HOMOTOPIC, basis=Basis.INVARIANT, degrees=(d1, d2), theorem=HOPF_DEGREE,
        )
    return ClassificationVerdict(
        relation=Relation.UNKNOWN, degrees=(d1, d2),
        notes=["equal degrees but the complex is not a certified homology sphere"],
    )


def covers_cobordant(M1: OrientedPseudomanifold, S1: Cover,
                     M2: Optional[OrientedPseudomanifold] = None, S2: Optional[Cover] = None,
                     threads: Optional[int] = None, **kwargs) -> ClassificationVerdict:
    """Cobordism of (M1, S1) and (M2, S2); without a second pair this is null-cobordance"""
    if M2 is None or S2 is None:
        return null_cobordance(M1, S1, threads=threads, **kwargs)
    if M1.dimension != M2.dimension:
        raise DimensionMismatch(
            "cobordant pairs need complexes of equal dimension",
            {"dimensions": [M1.dimension, M2.dimension]}
        )
    if S1.num_sets != S2.num_sets:
        raise DimensionMismatch(
            "covers use different numbers of sets",
            {"num_sets": [S1.num_sets, S2.num_sets]}
        )
    _require_regular(M1, S1, "first cover")
    _require_regular(M2, S2, "second cover")
    m, n = M1.dimension, S1.num_sets - 2

    if m != n:
        if is_homology_sphere(M1.complex, m) and is_homology_sphere(M2.complex, m):
            return ClassificationVerdict(relation=Relation.COBORDANT, basis=Basis.THEOREM, theorem=VANISHING)
        return ClassificationVerdict(
            relation=Relation.UNKNOWN,
            notes=["unequal dimensions need certified homology spheres"],
        )

    d1 = degree_of_cover(M1, S1, threads=threads).degree
    d2 = degree_of_cover(M2, S2, threads=threads).degree
    # each degree is taken against its own complex's orientation
    spheres = is_homology_sphere(M1.complex, m) and is_homology_sphere(M2.complex, m)
    if d1 != d2 and spheres:
        return ClassificationVerdict(relation=Relation.DISTINCT, basis=Basis.INVARIANT, degrees=(d1, d2))
    relative = relative_orientation(M1, M2)
    if d1 == d2 and relative is not None:
        notes = [] if relative > 0 else ["second complex carries the opposite orientation"]
        return ClassificationVerdict(
            relation=Relation.COBORDANT, basis=Basis.INVARIANT, degrees=(d1, d2), notes=notes,
        )
    reason = ("unequal degrees but the complexes are not both certified homology spheres" if d1 != d2
              else "equal degrees but the complexes are not identical after relabeling")
    return ClassificationVerdict(relation=Relation.UNKNOWN, degrees=(d1, d2), notes=[reason])


def null_cobordance(M: OrientedPseudomanifold, S: Cover, subdivide: int = 0,
                    budget: Optional[int] = None, threads: Optional[int] = None,
                    label_mode: LabelMode = LabelMode.SINGLETON) -> ClassificationVerdict:
    """
    Equal dimensions: null-cobordant iff the degree is 0, upgraded to a witness
    when a cone over M (subdivided up to `subdivide` times) carries an extension.
    Unequal dimensions: null-cobordant on certified homology spheres.
    """
    _require_regular(M, S, "cover")
    m, n = M.dimension, S.num_sets - 2
    if m != n:
        if is_homology_sphere(M.complex, m):
            return ClassificationVerdict(relation=Relation.NULL_COBORDANT, basis=Basis.THEOREM, theorem=VANISHING)
        return ClassificationVerdict(
            relation=Relation.UNKNOWN,
            notes=["unequal dimensions need a certified homology sphere"],
        )

    d = degree_of_cover(M, S, threads=threads).degree
    if d != 0:
        return ClassificationVerdict(relation=Relation.DISTINCT, basis=Basis.INVARIANT, degrees=(d,))

    for times in range(subdivide + 1):
        witness = _cone_witness(M, S, times, budget, threads, label_mode)
        if witness is not None:
            notes = [] if times == 0 else [
                f"witness boundary is the {times}-fold barycentric subdivision of M with the transported cover"
            ]
            return ClassificationVerdict(
                relation=Relation.NULL_COBORDANT, basis=Basis.WITNESS, witness=witness,
                degrees=(d,), notes=notes,
            )
    return ClassificationVerdict(relation=Relation.NULL_COBORDANT, basis=Basis.INVARIANT, degrees=(d,))


def _cone_witness(M, S, times, budget, threads, label_mode) -> Optional[Witness]:
    problem = cone_problem(M, S, label_mode, subdivide=times)
    certificate = verify_kkm(problem, budget=budget, threads=threads)
    if certificate.verdict != SearchVerdict.EXTENDABLE:
        logger.info(f"cone extension {certificate.verdict.value} after {times} subdivisions")
        return None
    X = problem.ambient
    A = boundary_of(X)
    piece = BoundaryPiece(
        vertex_map={v: v for v in A.vertex_ids},
        facets=A.complex.facets,
        cover=restrict_cover(certificate.witness, A.vertex_ids),
    )
    return Witness(kind=WitnessKind.CONE, manifold=X, cover=certificate.witness,
                   pieces=[piece], subdivisions=times)


def validate_witness(witness: Witness) -> None:
    """
    Re-check a witness: W is an oriented pseudomanifold, its cover has no
    covering simplex, and the pieces tile the boundary carrying their covers.
    """
    W = witness.manifold
    try:
        fresh = validate_pseudomanifold(W.complex)
        check_cover(W.complex, witness.cover)
    except ValidationError as e:
        raise RecheckFailed(f"witness complex or cover is invalid: {e.message}", e.detail)
    hit = covering_simplex(W.complex, witness.cover)
    if hit is not None:
        raise RecheckFailed(f"witness cover has covering simplex {list(hit)}", {"simplex": list(hit)})

    tiled: List[Tuple[int, ...]] = []
    for index, piece in enumerate(witness.pieces):
        for v, image in piece.vertex_map.items():
            if image not in witness.cover.labels:
                raise RecheckFailed(f"piece {index} maps vertex {v} outside the witness", {"piece": index})
            if v not in piece.cover.labels or tuple(piece.cover.labels[v]) != tuple(witness.cover.labels[image]):
                raise RecheckFailed(
                    f"witness does not restrict to piece {index} at vertex {v}",
                    {"piece": index, "vertex": v}
                )
        for facet in piece.facets:
            tiled.append(tuple(sorted(piece.vertex_map[v] for v in facet)))
    if sorted(tiled) != sorted(fresh.boundary_faces):
        raise RecheckFailed(
            "pieces do not tile the witness boundary",
            {"pieces": len(tiled), "boundary_faces": len(fresh.boundary_faces)}
        )


def check_verdict(verdict: ClassificationVerdict) -> None:
    """Witness verdicts re-validate; other bases carry the data they claim"""
    if verdict.basis == Basis.WITNESS:
        if verdict.witness is None:
            raise RecheckFailed("witness verdict has no witness")
        validate_witness(verdict.witness)
    elif verdict.basis == Basis.INVARIANT and not verdict.degrees:
        raise RecheckFailed("invariant verdict carries no degrees")
    elif verdict.basis == Basis.THEOREM and verdict.theorem != VANISHING:
        raise RecheckFailed("theorem verdicts are only issued for unequal dimensions")
