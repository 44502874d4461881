"""
PL degree of maps into the boundary of the target simplex by exact
regular-value counting.

Target facet k (omitting vertex k) of the boundary of the (n+1)-simplex is
oriented with sign (-1)^(n+1-k) relative to its ascending vertex order, the
orientation the validator assigns to the standard sphere. With this choice the
identity cover has degree +1.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from sympy import prime

from errors import DimensionMismatch, GenericityExhausted, NotClosed
from models.cover import PLMap
from models.invariants import DegreeResult, Preimage, RegularValue
from services.config import TopologyConfig
from services.cover import pl_map, require_boundary_image
from utils.rational import determinant, in_affine_hull, sign, solve

logger = logging.getLogger(__name__)

DEGENERATE = "degenerate"


def target_facet_sign(n: int, k: int) -> int:
    return (-1) ** (n + 1 - k)


def candidate_regular_value(n: int, attempt: int) -> RegularValue:
    """
    Deterministic interior point of a facet of the boundary of the (n+1)-simplex.

    Attempt 0 uses weights proportional to 1..n+1 on the facet omitting the
    last vertex; later attempts rotate the facet and perturb each weight by
    1/p for fresh primes p.
    """
    k = (n + 1 - attempt) % (n + 2)
    raw = []
    for j in range(n + 1):
        weight = Fraction(j + 1)
        if attempt > 0:
            weight += Fraction(1, prime(attempt * (n + 1) + j))
        raw.append(weight)
    total = sum(raw, Fraction(0))
    point = [w / total for w in raw]
    point.insert(k, Fraction(0))
    return RegularValue(facet_index=k, point=tuple(point), attempt=attempt)


def face_preimage(
    images: Sequence[Sequence[Fraction]], value: RegularValue
) -> Union[None, str, Tuple[List[Fraction], int]]:
    """
    Preimage of the regular value inside one simplex whose vertex count equals
    the target facet's.

    Returns None when the value is not attained, DEGENERATE when it is attained
    on a proper face or by a collapsed simplex, otherwise the barycentric
    solution and the local orientation sign det(W') * s_k, where W' holds the
    vertex images without coordinate k as columns.
    """
    k = value.facet_index
    n = len(value.point) - 2
    in_facet = [j for j, w in enumerate(images) if w[k] == 0]
    if len(in_facet) < len(images):
        # only the face spanned by in_facet can reach the facet
        if in_facet and in_affine_hull([images[j] for j in in_facet], value.point):
            return DEGENERATE
        return None
    columns = [[w[i] for i in range(len(w)) if i != k] for w in images]
    rows = [list(r) for r in zip(*columns)]
    target = [value.point[i] for i in range(len(value.point)) if i != k]
    solution = solve(rows, target)
    if solution is None:
        if in_affine_hull(images, value.point):
            return DEGENERATE
        return None
    if any(x < 0 for x in solution):
        return None
    if any(x == 0 for x in solution):
        return DEGENERATE
    return solution, sign(determinant(rows)) * target_facet_sign(n, k)


def _check_degree_input(f: PLMap) -> int:
    M = f.source
    if not M.is_closed:
        raise NotClosed("degree needs a closed source", {"boundary_faces": len(M.boundary_faces)})
    n = f.target_dim - 1
    if M.dimension != n:
        raise DimensionMismatch(
            f"source has dimension {M.dimension}, target sphere has dimension {n}",
            {"source_dimension": M.dimension, "target_dimension": n}
        )
    require_boundary_image(f)
    return n


def degree(f: PLMap, threads: Optional[int] = None, attempts: Optional[int] = None,
           start: int = 0) -> DegreeResult:
    """Signed count of preimages of a regular value over the source facets"""
    n = _check_degree_input(f)
    threads = threads or TopologyConfig.THREADS
    attempts = attempts or TopologyConfig.REGULAR_VALUE_ATTEMPTS
    M = f.source
    facets = list(M.oriented_facets)

    for attempt in range(start, start + attempts):
        value = candidate_regular_value(n, attempt)

        def hit(oriented):
            return face_preimage([f.vertex_images[v] for v in oriented], value)

        if threads > 1 and len(facets) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                hits = list(pool.map(hit, facets))
        else:
            hits = [hit(t) for t in facets]

        if any(h == DEGENERATE for h in hits):
            logger.warning(f"regular value attempt {attempt} is degenerate, retrying")
            continue
        preimages = [
            Preimage(facet=oriented, barycentric=tuple(h[0]), sign=h[1])
            for oriented, h in zip(facets, hits) if h is not None
        ]
        total = sum(p.sign for p in preimages)
        logger.info(f"degree {total} from {len(preimages)} preimages (attempt {attempt})")
        return DegreeResult(degree=total, preimages=preimages, regular_value_used=value)

    raise GenericityExhausted(
        f"no regular value found in {attempts} candidates",
        {"attempts": attempts}
    )


def degree_of_cover(M, C, phi=None, **kwargs) -> DegreeResult:
    """degree(pl_map(M, C, phi))"""
    return degree(pl_map(M, C, phi), **kwargs)
