"""
Exhaustive search for cover extensions without a covering simplex.

Free vertices are assigned in ascending id order, label options in a fixed
order. A branch is cut as soon as some facet of the ambient complex carries
every label; the cut prefix, together with its facet, is kept so that an
obstructed verdict is a checkable partition of the whole assignment space.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from errors import (
    BudgetExceeded, CoveringSimplexInInput, DimensionMismatch, EmptyBoundary,
    LabelOutOfRange, MissingVertex, NotSperner, RecheckFailed, ValidationError,
)
from models.complex import OrientedPseudomanifold, Simplex
from models.cover import Cover
from models.search import (
    Certificate, ExtensionProblem, LabelMode, PrunedBranch, SearchStats, SearchVerdict,
)
from services.config import TopologyConfig
from services.cover import check_cover, covering_simplex, restrict_cover
from services.simplicial import barycentric_subdivide, boundary_of, cone
from utils.metrics import SearchMetrics
from utils.rational import permutation_parity

logger = logging.getLogger(__name__)


def allowed_label_sets(num_sets: int, mode: LabelMode) -> List[Tuple[int, ...]]:
    """Singletons ascending, or every nonempty subset ordered by size then lexicographically"""
    if mode == LabelMode.SINGLETON:
        return [(i,) for i in range(num_sets)]
    found = []
    for size in range(1, num_sets + 1):
        found.extend(combinations(range(num_sets), size))
    return found


def boundary_vertices(X: OrientedPseudomanifold) -> Tuple[int, ...]:
    return tuple(sorted({v for face in X.boundary_faces for v in face}))


def make_problem(X: OrientedPseudomanifold, boundary_cover: Cover,
                 label_mode: LabelMode = LabelMode.SINGLETON,
                 match_dimension: bool = True) -> ExtensionProblem:
    """
    Validate an extension problem: cover exactly on the boundary, nothing
    covering there. match_dimension asks for n+2 sets on an (n+1)-dimensional
    ambient, the setting of the Sperner-KKM obstruction.
    """
    if X.is_closed:
        raise EmptyBoundary("extension problems need an ambient complex with boundary")
    if match_dimension and boundary_cover.num_sets != X.dimension + 1:
        raise DimensionMismatch(
            f"a {X.dimension}-dimensional ambient needs {X.dimension + 1} sets, cover has {boundary_cover.num_sets}",
            {"ambient_dimension": X.dimension, "num_sets": boundary_cover.num_sets}
        )
    rim = boundary_vertices(X)
    extra = sorted(set(boundary_cover.labels) - set(rim))
    if extra:
        raise ValidationError(
            f"cover labels vertex {extra[0]} which is not on the boundary",
            {"vertex": extra[0]}
        )
    A = boundary_of(X)
    check_cover(A.complex, boundary_cover)
    hit = covering_simplex(A.complex, boundary_cover)
    if hit is not None:
        raise CoveringSimplexInInput(
            f"boundary cover already has covering simplex {list(hit)}",
            {"simplex": list(hit)}
        )
    free = tuple(v for v in X.vertex_ids if v not in set(rim))
    return ExtensionProblem(
        ambient=X, boundary_cover=boundary_cover, free_vertices=free, label_mode=label_mode,
    )


class _OutOfBudget(Exception):
    pass


class _Tally:
    def __init__(self):
        self.nodes = 0
        self.exhausted = 0
        self.pruned: List[PrunedBranch] = []
        self.witness: Optional[Tuple[int, ...]] = None  # choice indices
        self.out_of_budget = False


class ExtensionSearch:
    """Depth-first search over label choices for the free vertices"""

    def __init__(self, problem: ExtensionProblem, budget: Optional[int] = None,
                 threads: Optional[int] = None):
        self.problem = problem
        self.budget = budget if budget is not None else TopologyConfig.NODE_BUDGET
        self.threads = threads or TopologyConfig.THREADS
        self.options = allowed_label_sets(problem.num_sets, problem.label_mode)
        self.option_masks = [sum(1 << i for i in opt) for opt in self.options]
        self.full = (1 << problem.num_sets) - 1
        self.free = list(problem.free_vertices)
        self.depth_of = {v: i for i, v in enumerate(self.free)}

        cover = problem.boundary_cover
        self.facets = list(problem.ambient.complex.facets)
        self.base_masks = []
        self.facets_at: Dict[int, List[int]] = {i: [] for i in range(len(self.free))}
        for index, facet in enumerate(self.facets):
            bits = 0
            for v in facet:
                if v in self.depth_of:
                    self.facets_at[self.depth_of[v]].append(index)
                else:
                    bits |= cover.mask(v)
            self.base_masks.append(bits)

    @property
    def search_space(self) -> int:
        return len(self.options) ** len(self.free)

    def _remaining(self, depth: int) -> int:
        return len(self.options) ** (len(self.free) - depth)

    def _descend(self, tally: _Tally, masks: List[int], prefix: List[int], budget: int) -> bool:
        """True once a witness is stored in the tally"""
        depth = len(prefix)
        for choice, bits in enumerate(self.option_masks):
            tally.nodes += 1
            if tally.nodes > budget:
                raise _OutOfBudget()
            touched = self.facets_at[depth]
            covering = None
            for index in touched:
                if masks[index] | bits == self.full:
                    covering = index
                    break
            prefix.append(choice)
            if covering is not None:
                tally.pruned.append(PrunedBranch(prefix=tuple(prefix), covering_facet=self.facets[covering]))
                tally.exhausted += self._remaining(depth + 1)
                prefix.pop()
                continue
            if depth + 1 == len(self.free):
                tally.witness = tuple(prefix)
                return True
            saved = [masks[index] for index in touched]
            for index in touched:
                masks[index] |= bits
            found = self._descend(tally, masks, prefix, budget)
            for index, old in zip(touched, saved):
                masks[index] = old
            prefix.pop()
            if found:
                return True
        return False

    def _subtree(self, choice: int) -> _Tally:
        """Search below a fixed label for the first free vertex, with the full budget"""
        tally = _Tally()
        masks = list(self.base_masks)
        bits = self.option_masks[choice]
        tally.nodes = 1
        for index in self.facets_at[0]:
            if masks[index] | bits == self.full:
                tally.pruned.append(PrunedBranch(prefix=(choice,), covering_facet=self.facets[index]))
                tally.exhausted = self._remaining(1)
                return tally
        if len(self.free) == 1:
            tally.witness = (choice,)
            return tally
        for index in self.facets_at[0]:
            masks[index] |= bits
        try:
            self._descend(tally, masks, [choice], self.budget)
        except _OutOfBudget:
            tally.out_of_budget = True
        return tally

    def run(self) -> Certificate:
        problem = self.problem
        # facets covered before any assignment settle everything at once
        for index, bits in enumerate(self.base_masks):
            if bits == self.full:
                stats = SearchStats(nodes=0, search_space=self.search_space,
                                    exhausted=self.search_space, complete=True)
                return Certificate(
                    verdict=SearchVerdict.OBSTRUCTED, problem=problem,
                    pruned=[PrunedBranch(prefix=(), covering_facet=self.facets[index])],
                    stats=stats,
                )
        if not self.free:
            stats = SearchStats(nodes=0, search_space=1, exhausted=0, complete=True)
            return Certificate(verdict=SearchVerdict.EXTENDABLE, problem=problem,
                               witness=self._witness_cover(()), stats=stats)

        with SearchMetrics(f"extension search ({len(self.free)} free vertices)", self.budget) as metrics:
            choices = range(len(self.options))
            if self.threads > 1:
                with ThreadPoolExecutor(max_workers=self.threads) as pool:
                    tallies = pool.map(self._subtree, choices)
                    certificate = self._merge(tallies)
            else:
                certificate = self._merge(self._subtree(c) for c in choices)
            metrics.add(certificate.stats.nodes)
        return certificate.model_copy(update={
            "stats": certificate.stats.model_copy(update={"elapsed_seconds": metrics.elapsed})
        })

    def _merge(self, tallies) -> Certificate:
        """Combine first-level subtrees in order, as a sequential run would see them"""
        nodes = exhausted = 0
        pruned: List[PrunedBranch] = []
        for tally in tallies:
            if tally.out_of_budget or nodes + tally.nodes > self.budget:
                stats = SearchStats(nodes=self.budget, search_space=self.search_space,
                                    exhausted=exhausted, complete=False)
                logger.warning(f"node budget {self.budget} exhausted")
                return Certificate(verdict=SearchVerdict.INCONCLUSIVE, problem=self.problem,
                                   pruned=pruned, stats=stats)
            nodes += tally.nodes
            exhausted += tally.exhausted
            pruned.extend(tally.pruned)
            if tally.witness is not None:
                stats = SearchStats(nodes=nodes, search_space=self.search_space,
                                    exhausted=exhausted, complete=True)
                return Certificate(verdict=SearchVerdict.EXTENDABLE, problem=self.problem,
                                   witness=self._witness_cover(tally.witness), stats=stats)
        stats = SearchStats(nodes=nodes, search_space=self.search_space,
                            exhausted=exhausted, complete=exhausted == self.search_space)
        return Certificate(verdict=SearchVerdict.OBSTRUCTED, problem=self.problem,
                           pruned=pruned, stats=stats)

    def _witness_cover(self, choices: Sequence[int]) -> Cover:
        labels = dict(self.problem.boundary_cover.labels)
        for v, choice in zip(self.free, choices):
            labels[v] = self.options[choice]
        return Cover(num_sets=self.problem.num_sets, labels=labels)


def verify_kkm(problem: ExtensionProblem, budget: Optional[int] = None,
               threads: Optional[int] = None) -> Certificate:
    """Obstructed, extendable (with witness) or inconclusive when the budget runs out"""
    certificate = ExtensionSearch(problem, budget, threads).run()
    logger.info(f"extension search verdict: {certificate.verdict.value}")
    return certificate


def find_extension(problem: ExtensionProblem, budget: Optional[int] = None,
                   threads: Optional[int] = None) -> Optional[Cover]:
    """
    First extension without a covering simplex in search order, or None.

    None only speaks about this ambient complex; another bounding complex may
    still admit an extension.
    """
    certificate = verify_kkm(problem, budget, threads)
    if certificate.verdict == SearchVerdict.INCONCLUSIVE:
        raise BudgetExceeded(
            f"search stopped after {certificate.stats.nodes} nodes",
            {"nodes": certificate.stats.nodes, "search_space": certificate.stats.search_space}
        )
    return certificate.witness


def recheck_certificate(certificate: Certificate) -> None:
    """Independently re-validate a certificate; raises RecheckFailed"""
    problem = certificate.problem
    try:
        rebuilt = make_problem(problem.ambient, problem.boundary_cover, problem.label_mode,
                               match_dimension=False)
    except ValidationError as e:
        raise RecheckFailed(f"embedded problem is invalid: {e.message}", e.detail)
    if rebuilt.free_vertices != problem.free_vertices:
        raise RecheckFailed("free vertices do not match the ambient complex")
    options = allowed_label_sets(problem.num_sets, problem.label_mode)

    if certificate.verdict == SearchVerdict.EXTENDABLE:
        witness = certificate.witness
        if witness is None:
            raise RecheckFailed("extendable certificate carries no witness")
        try:
            restricted = restrict_cover(witness, problem.boundary_cover.labels)
            hit = covering_simplex(problem.ambient.complex, witness)
        except (MissingVertex, LabelOutOfRange) as e:
            raise RecheckFailed(f"witness is malformed: {e.message}", e.detail)
        if restricted.labels != problem.boundary_cover.labels:
            raise RecheckFailed("witness does not restrict to the boundary cover")
        bad = [v for v in problem.free_vertices if tuple(witness.labels[v]) not in options]
        if bad:
            raise RecheckFailed(f"vertex {bad[0]} carries labels outside the search mode", {"vertex": bad[0]})
        if hit is not None:
            raise RecheckFailed(f"witness has covering simplex {list(hit)}", {"simplex": list(hit)})
        return

    if certificate.verdict == SearchVerdict.INCONCLUSIVE:
        return

    k = len(problem.free_vertices)
    free_index = {v: i for i, v in enumerate(problem.free_vertices)}
    full = set(range(problem.num_sets))
    facets = set(problem.ambient.complex.facets)
    total = 0
    for branch in certificate.pruned:
        if len(branch.prefix) > k or any(c < 0 or c >= len(options) for c in branch.prefix):
            raise RecheckFailed("pruned prefix is out of range", {"prefix": list(branch.prefix)})
        if tuple(branch.covering_facet) not in facets:
            raise RecheckFailed("pruned branch names a non-facet", {"facet": list(branch.covering_facet)})
        labels = set()
        for v in branch.covering_facet:
            if v in free_index:
                i = free_index[v]
                if i >= len(branch.prefix):
                    raise RecheckFailed("pruned facet has unassigned vertices", {"prefix": list(branch.prefix)})
                labels.update(options[branch.prefix[i]])
            else:
                labels.update(problem.boundary_cover.labels[v])
        if labels != full:
            raise RecheckFailed("pruned facet is not covering", {"facet": list(branch.covering_facet)})
        total += len(options) ** (k - len(branch.prefix))
    ordered = sorted(tuple(b.prefix) for b in certificate.pruned)
    for first, second in zip(ordered, ordered[1:]):
        if second[:len(first)] == first:
            raise RecheckFailed("pruned branches overlap", {"prefixes": [list(first), list(second)]})
    if total != len(options) ** k:
        raise RecheckFailed(
            "pruned branches do not exhaust the assignment space",
            {"accounted": total, "search_space": len(options) ** k}
        )


def subdivide_problem(problem: ExtensionProblem, times: int) -> ExtensionProblem:
    """
    Subdivide the ambient complex; each new boundary vertex b(F) takes the
    union of the labels of F, which keeps the boundary map unchanged.
    """
    X = problem.ambient
    labels = dict(problem.boundary_cover.labels)
    for _ in range(times):
        boundary_faces = set()
        for face in X.boundary_faces:
            for size in range(1, len(face) + 1):
                boundary_faces.update(combinations(face, size))
        X = barycentric_subdivide(X, 1)
        labels = {
            v: tuple(sorted({i for u in face for i in labels[u]}))
            for v, face in X.vertex_origin.items() if face in boundary_faces
        }
    return make_problem(X, Cover(num_sets=problem.num_sets, labels=labels), problem.label_mode,
                        match_dimension=False)


def cone_problem(M: OrientedPseudomanifold, cover: Cover,
                 label_mode: LabelMode = LabelMode.SINGLETON, subdivide: int = 0) -> ExtensionProblem:
    """Extension problem on the cone over M (a disc bounded by M)"""
    problem = make_problem(cone(M), cover, label_mode)
    return subdivide_problem(problem, subdivide) if subdivide else problem


def sperner_count(T: OrientedPseudomanifold, labels: Cover) -> Tuple[int, int]:
    """
    (signed, unsigned) counts of fully labeled facets of a triangulated simplex.

    A vertex's carrier is the face of the root simplex it lies in (recorded by
    subdivision; the root simplex is its own carrier). Labels index the root
    vertices in ascending order and must be singletons from the carrier.
    """
    roots = sorted({r for face in (T.carriers or {v: (v,) for v in T.vertex_ids}).values() for r in face})
    carriers = T.carriers or {v: (v,) for v in T.vertex_ids}
    if len(roots) != T.dimension + 1 or labels.num_sets != T.dimension + 1:
        raise DimensionMismatch(
            "labeling needs one label per root vertex",
            {"root_vertices": len(roots), "num_sets": labels.num_sets}
        )
    position = {r: i for i, r in enumerate(roots)}
    for v in T.vertex_ids:
        if v not in labels.labels:
            raise MissingVertex(f"vertex {v} is not labeled", {"vertex": v})
        own = labels.labels[v]
        if len(own) != 1:
            raise NotSperner(f"vertex {v} needs a single label", {"vertex": v})
        allowed = {position[r] for r in carriers[v]}
        if own[0] not in allowed:
            raise NotSperner(
                f"vertex {v} on carrier {list(carriers[v])} has label {own[0]}",
                {"vertex": v, "label": own[0], "carrier": list(carriers[v])}
            )
    signed = unsigned = 0
    for oriented in T.oriented_facets:
        values = [labels.labels[v][0] for v in oriented]
        if len(set(values)) == len(values):
            unsigned += 1
            signed += permutation_parity(values)
    logger.info(f"sperner count: signed {signed}, unsigned {unsigned}")
    return signed, unsigned
