"""
Preimage curves, projection to 3-space, linking numbers and the Hopf invariant.

The preimage of a regular value under a PL map from an (n+1)-complex to the
boundary of the (n+1)-simplex is a 1-manifold: a straight segment inside every
facet it meets, joining the points where it crosses codimension-one faces.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import prime

from errors import (
    CurvesIntersect, DimensionMismatch, GenericityExhausted, NoRealization,
    PoleOnCurve, ValidationError,
)
from models.complex import OrientedPseudomanifold, Simplex
from models.cover import PLMap
from models.invariants import Crossing, HopfResult, LinkingResult, PLCurve, Point, RegularValue
from services.config import TopologyConfig
from services.cover import require_boundary_image
from services.degree import DEGENERATE, candidate_regular_value, face_preimage
from services.homology import is_homology_sphere
from services.simplicial import facet_signs, induced_face_sign
from utils.rational import combine, dot, orient2d, sign, solve

logger = logging.getLogger(__name__)


class _Degenerate(Exception):
    pass


def _trace(f: PLMap, value: RegularValue, threads: int) -> PLCurve:
    M = f.source
    d = M.dimension
    faces = M.complex.faces(d - 1)

    def crossing(face):
        return face_preimage([f.vertex_images[v] for v in face], value)

    if threads > 1 and len(faces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(crossing, faces))
    else:
        hits = [crossing(face) for face in faces]
    if any(h == DEGENERATE for h in hits):
        raise _Degenerate("value attained on a lower face")
    points = {face: h for face, h in zip(faces, hits) if h is not None}

    successor: Dict[Simplex, Simplex] = {}
    for facet, s in zip(M.complex.facets, facet_signs(M)):
        crossed = []
        for position in range(len(facet)):
            face = facet[:position] + facet[position + 1:]
            if face in points:
                crossed.append((points[face][1] * induced_face_sign(s, position, d), face))
        if not crossed:
            continue
        if len(crossed) != 2 or crossed[0][0] == crossed[1][0]:
            raise _Degenerate(f"facet {list(facet)} meets the preimage {len(crossed)} times")
        entry, exit_ = sorted(crossed)
        successor[entry[1]] = exit_[1]

    def where(face):
        lam = points[face][0]
        return combine(lam, [M.realization.coordinates[v] for v in face])

    has_predecessor = set(successor.values())
    arcs, arc_ends, loops = [], [], []
    visited = set()
    for start in sorted(points):
        if start in has_predecessor or start in visited:
            continue
        path = [start]
        visited.add(start)
        while path[-1] in successor:
            path.append(successor[path[-1]])
            visited.add(path[-1])
        arcs.append([where(face) for face in path])
        arc_ends.append((path[0], path[-1]))
    for start in sorted(points):
        if start in visited:
            continue
        path = [start]
        visited.add(start)
        while successor[path[-1]] != start:
            path.append(successor[path[-1]])
            visited.add(path[-1])
        loops.append([where(face) for face in path])
    return PLCurve(loops=loops, arcs=arcs, arc_ends=arc_ends, regular_value=value)


def preimage_curve(f: PLMap, value: Optional[RegularValue] = None,
                   threads: Optional[int] = None, attempts: Optional[int] = None) -> PLCurve:
    """
    Preimage of a regular value as oriented loops and boundary arcs.

    Without a value, candidates are drawn in the order used for degrees and
    retried on degeneracy. A supplied value that turns out degenerate raises
    GenericityExhausted.
    """
    M = f.source
    if M.realization is None:
        raise NoRealization("preimage curves need vertex coordinates")
    n = f.target_dim - 1
    if M.dimension != n + 1:
        raise DimensionMismatch(
            f"source dimension {M.dimension} should exceed the target sphere dimension {n} by one",
            {"source_dimension": M.dimension, "target_dimension": n}
        )
    require_boundary_image(f)
    threads = threads or TopologyConfig.THREADS
    if value is not None:
        candidates: Iterable[RegularValue] = [value]
    else:
        candidates = (candidate_regular_value(n, a) for a in range(attempts or TopologyConfig.REGULAR_VALUE_ATTEMPTS))
    for candidate in candidates:
        try:
            curve = _trace(f, candidate, threads)
        except _Degenerate as e:
            logger.warning(f"regular value attempt {candidate.attempt} rejected: {str(e)}")
            continue
        logger.info(f"preimage curve: {len(curve.loops)} loops, {len(curve.arcs)} arcs")
        return curve
    raise GenericityExhausted("no regular value gave a generic preimage curve")


def signed_endpoint_sum(curve: PLCurve, faces: Optional[Iterable[Simplex]] = None) -> int:
    """
    +1 per arc end and -1 per arc start, optionally counted only on the given
    boundary faces. On one boundary component this is the degree of the map
    restricted to it (with the induced orientation); over all faces it is 0.
    """
    wanted = None if faces is None else {tuple(sorted(face)) for face in faces}
    total = 0
    for start, end in curve.arc_ends:
        if wanted is None or end in wanted:
            total += 1
        if wanted is None or start in wanted:
            total -= 1
    return total


def stereographic_project(curve: PLCurve, pole: Sequence[Fraction]) -> PLCurve:
    """
    Central projection from the pole onto the hyperplane through the origin
    orthogonal to it, read in coordinates by dropping the first coordinate where
    the pole is nonzero. The chart is reflected when needed so that its
    orientation does not depend on the pole.

    Straight segments stay straight because every curve point lies strictly on
    the near side of the supporting hyperplane <x, pole> = |pole|^2.
    """
    pole = tuple(Fraction(x) for x in pole)
    norm = dot(pole, pole)
    if norm == 0:
        raise ValidationError("pole must be nonzero")
    k = next(i for i, x in enumerate(pole) if x != 0)
    flip = (-1) ** (k + 1) * sign(pole[k]) < 0

    def project(x: Point) -> Point:
        height = dot(x, pole)
        if height >= norm:
            raise PoleOnCurve(
                "curve point lies on the far side of the pole's supporting hyperplane",
                {"point": [str(c) for c in x]}
            )
        t = norm / (norm - height)
        image = [p + t * (c - p) for c, p in zip(x, pole)]
        del image[k]
        if flip:
            image[0] = -image[0]
        return tuple(image)

    return PLCurve(
        loops=[[project(x) for x in loop] for loop in curve.loops],
        arcs=[[project(x) for x in arc] for arc in curve.arcs],
        arc_ends=list(curve.arc_ends),
        subdivisions=0,
        regular_value=curve.regular_value,
    )


def _segments(curve: PLCurve) -> List[Tuple[Tuple[int, int], Point, Point]]:
    if curve.arcs:
        raise ValidationError("linking numbers need closed loops only")
    found = []
    for i, loop in enumerate(curve.loops):
        for j in range(len(loop)):
            found.append(((i, j), loop[j], loop[(j + 1) % len(loop)]))
    return found


def projection_direction(attempt: int) -> Tuple[Fraction, Fraction]:
    if attempt == 0:
        return Fraction(0), Fraction(0)
    return Fraction(1, prime(2 * attempt)), Fraction(-1, prime(2 * attempt + 1))


def _crossings(seg_a, seg_b, s: Fraction, t: Fraction) -> List[Crossing]:
    found = []

    def flat(x):
        return (x[0] - s * x[2], x[1] - t * x[2])

    for id_a, a0, a1 in seg_a:
        p0, p1 = flat(a0), flat(a1)
        for id_b, b0, b1 in seg_b:
            q0, q1 = flat(b0), flat(b1)
            o1, o2 = orient2d(p0, p1, q0), orient2d(p0, p1, q1)
            o3, o4 = orient2d(q0, q1, p0), orient2d(q0, q1, p1)
            if 0 in (o1, o2, o3, o4):
                # touching or collinear: only harmless when the boxes are apart
                if _boxes_meet(p0, p1, q0, q1):
                    raise _Degenerate("projected segments touch")
                continue
            if o1 == o2 or o3 == o4:
                continue
            da = (p1[0] - p0[0], p1[1] - p0[1])
            db = (q1[0] - q0[0], q1[1] - q0[1])
            denom = da[0] * db[1] - da[1] * db[0]
            u = ((q0[0] - p0[0]) * db[1] - (q0[1] - p0[1]) * db[0]) / denom
            v = ((q0[0] - p0[0]) * da[1] - (q0[1] - p0[1]) * da[0]) / denom
            za = a0[2] + u * (a1[2] - a0[2])
            zb = b0[2] + v * (b1[2] - b0[2])
            if za == zb:
                raise CurvesIntersect(
                    "curves meet in space",
                    {"segment_a": list(id_a), "segment_b": list(id_b)}
                )
            a_over = za > zb
            over, under = (da, db) if a_over else (db, da)
            found.append(Crossing(
                segment_a=id_a, segment_b=id_b, a_over=a_over,
                sign=sign(over[0] * under[1] - over[1] * under[0]),
            ))
    return found


def _boxes_meet(p0, p1, q0, q1) -> bool:
    return (max(min(p0[0], p1[0]), min(q0[0], q1[0])) <= min(max(p0[0], p1[0]), max(q0[0], q1[0]))
            and max(min(p0[1], p1[1]), min(q0[1], q1[1])) <= min(max(p0[1], p1[1]), max(q0[1], q1[1])))


def linking_number(a: PLCurve, b: PLCurve, attempts: Optional[int] = None) -> LinkingResult:
    """Half the signed count of crossings between the two curves in a generic projection"""
    seg_a, seg_b = _segments(a), _segments(b)
    for point in (p for loop in a.loops + b.loops for p in loop):
        if len(point) != 3:
            raise DimensionMismatch("linking numbers need curves in 3-space", {"ambient": len(point)})
    attempts = attempts or TopologyConfig.PROJECTION_ATTEMPTS
    for attempt in range(attempts):
        s, t = projection_direction(attempt)
        try:
            crossings = _crossings(seg_a, seg_b, s, t)
        except _Degenerate:
            logger.warning(f"projection direction {attempt} is degenerate, retrying")
            continue
        total = sum(c.sign for c in crossings)
        if total % 2:
            # odd totals only arise from unclosed input
            raise ValidationError("odd crossing sum; curves are not closed loops")
        return LinkingResult(
            linking_number=total // 2,
            crossing_list=crossings,
            direction=(s, t, Fraction(1)),
        )
    raise GenericityExhausted(f"no generic projection among {attempts} directions", {"attempts": attempts})


def pole_candidates(M: OrientedPseudomanifold) -> List[Point]:
    """
    Feet of the perpendiculars from the origin to the facets' affine hulls,
    kept when the foot lies in its closed facet and every vertex lies on the
    near side of the hyperplane through the foot orthogonal to it.
    """
    if M.realization is None:
        raise NoRealization("poles need vertex coordinates")
    coords = M.realization.coordinates
    everything = list(coords.values())
    found: List[Point] = []
    for facet in M.complex.facets:
        points = [coords[v] for v in facet]
        base = points[0]
        rows = [[Fraction(1)] * len(points)]
        rhs = [Fraction(1)]
        for q in points[1:]:
            direction = [x - y for x, y in zip(q, base)]
            rows.append([dot(p, direction) for p in points])
            rhs.append(Fraction(0))
        lam = solve(rows, rhs)
        if lam is None or any(x < 0 for x in lam):
            continue
        foot = combine(lam, points)
        norm = dot(foot, foot)
        if norm == 0 or any(dot(v, foot) > norm for v in everything):
            continue
        if foot not in found:
            found.append(foot)
    return found


def valid_poles(M: OrientedPseudomanifold, curves: Sequence[PLCurve]) -> List[Point]:
    """Pole candidates whose supporting hyperplane misses every curve"""
    kept = []
    for pole in pole_candidates(M):
        norm = dot(pole, pole)
        if all(dot(x, pole) < norm for c in curves for loop in c.loops for x in loop):
            kept.append(pole)
    return kept


def partner_value(value: RegularValue) -> RegularValue:
    """A second point of the same target facet, weights reversed"""
    k = value.facet_index
    rest = [x for i, x in enumerate(value.point) if i != k]
    rest.reverse()
    if rest == [x for i, x in enumerate(value.point) if i != k]:
        rest = [x * (i + 2) for i, x in enumerate(rest)]
        total = sum(rest, Fraction(0))
        rest = [x / total for x in rest]
    rest.insert(k, Fraction(0))
    return RegularValue(facet_index=k, point=tuple(rest), attempt=value.attempt)


def hopf_invariant(f: PLMap, threads: Optional[int] = None, attempts: Optional[int] = None,
                   pole: Optional[Sequence[Fraction]] = None) -> HopfResult:
    """Linking number of the preimages of two regular values in one target facet"""
    M = f.source
    if M.dimension != 3 or f.target_dim != 3:
        raise DimensionMismatch(
            "hopf invariants need a 3-dimensional source mapped to the boundary of the 3-simplex",
            {"source_dimension": M.dimension, "target_dim": f.target_dim}
        )
    if M.realization is None:
        raise NoRealization("hopf invariants need vertex coordinates")
    if not M.is_closed:
        raise ValidationError("hopf invariants need a closed source")
    if not is_homology_sphere(M.complex, 3):
        raise ValidationError("hopf invariants need a homology 3-sphere as source")
    require_boundary_image(f)
    threads = threads or TopologyConfig.THREADS
    attempts = attempts or TopologyConfig.REGULAR_VALUE_ATTEMPTS

    for attempt in range(attempts):
        first = candidate_regular_value(2, attempt)
        second = partner_value(first)
        try:
            c1 = _trace(f, first, threads)
            c2 = _trace(f, second, threads)
        except _Degenerate as e:
            logger.warning(f"regular value pair {attempt} rejected: {str(e)}")
            continue
        if pole is None:
            poles = valid_poles(M, [c1, c2])
            if not poles:
                logger.warning(f"no valid pole for regular value pair {attempt}")
                continue
            chosen = poles[0]
        else:
            chosen = tuple(Fraction(x) for x in pole)
        linking = linking_number(stereographic_project(c1, chosen), stereographic_project(c2, chosen))
        logger.info(f"hopf invariant {linking.linking_number} (pair {attempt})")
        return HopfResult(
            hopf_invariant=linking.linking_number,
            regular_values=(first, second),
            pole=chosen,
            linking=linking,
        )
    raise GenericityExhausted("no regular value pair with a valid pole", {"attempts": attempts})
