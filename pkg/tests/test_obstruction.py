from itertools import product

import pytest

from errors import BudgetExceeded, CoveringSimplexInInput, DimensionMismatch, EmptyBoundary, NotSperner, RecheckFailed
from models.cover import Cover
from models.search import LabelMode, SearchVerdict
from services.cover import restrict_cover
from services.degree import degree_of_cover
from services.fixtures import cone_over_hexagon, hexagon, sperner_disc, sphere_with_identity
from services.obstruction import (
    allowed_label_sets, boundary_vertices, cone_problem, find_extension, make_problem,
    recheck_certificate, sperner_count, subdivide_problem, verify_kkm,
)
from services.simplicial import boundary_of, standard_simplex

WINDING = Cover(num_sets=3, labels={0: (0,), 1: (0,), 2: (1,), 3: (1,), 4: (2,), 5: (2,)})
ALTERNATING = Cover(num_sets=3, labels={v: (v % 2,) for v in range(6)})


def without_timing(certificate):
    return certificate.model_copy(update={
        "stats": certificate.stats.model_copy(update={"elapsed_seconds": 0.0})
    })


def test_label_sets_are_ordered():
    assert allowed_label_sets(3, LabelMode.SINGLETON) == [(0,), (1,), (2,)]
    assert allowed_label_sets(3, LabelMode.SUBSETS) == [
        (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2),
    ]


@pytest.mark.parametrize("times", [0, 1, 2])
def test_sperner_counts(times):
    T, labels = sperner_disc(times)
    signed, unsigned = sperner_count(T, labels)
    assert unsigned % 2 == 1
    assert signed in (1, -1)
    rim = boundary_vertices(T)
    boundary_degree = degree_of_cover(boundary_of(T), restrict_cover(labels, rim)).degree
    assert signed == -boundary_degree


def test_sperner_rejects_labels_off_the_carrier():
    T, labels = sperner_disc(1)
    corner = next(v for v, c in T.carriers.items() if c == (0,))
    bad = dict(labels.labels)
    bad[corner] = (1,)
    with pytest.raises(NotSperner):
        sperner_count(T, Cover(num_sets=3, labels=bad))


def test_winding_hexagon_is_obstructed():
    problem = make_problem(cone_over_hexagon(), WINDING)
    assert problem.free_vertices == (6,)
    certificate = verify_kkm(problem, threads=1)
    assert certificate.verdict == SearchVerdict.OBSTRUCTED
    assert certificate.stats.complete
    assert len(certificate.pruned) == 3
    assert certificate.witness is None
    recheck_certificate(certificate)


def test_alternating_hexagon_extends_over_the_apex():
    problem = make_problem(cone_over_hexagon(), ALTERNATING)
    certificate = verify_kkm(problem, threads=1)
    assert certificate.verdict == SearchVerdict.EXTENDABLE
    assert certificate.witness.labels[6] == (0,)
    recheck_certificate(certificate)
    assert find_extension(problem, threads=1) == certificate.witness


def test_recheck_catches_a_covering_witness():
    certificate = verify_kkm(make_problem(cone_over_hexagon(), ALTERNATING), threads=1)
    labels = dict(certificate.witness.labels)
    labels[6] = (2,)
    tampered = certificate.model_copy(update={"witness": Cover(num_sets=3, labels=labels)})
    with pytest.raises(RecheckFailed, match=r"covering simplex \[0, 1, 6\]"):
        recheck_certificate(tampered)


def test_recheck_catches_missing_branches():
    certificate = verify_kkm(make_problem(cone_over_hexagon(), WINDING), threads=1)
    tampered = certificate.model_copy(update={"pruned": certificate.pruned[:-1]})
    with pytest.raises(RecheckFailed, match="exhaust"):
        recheck_certificate(tampered)
    doubled = certificate.model_copy(update={"pruned": certificate.pruned + certificate.pruned[:1]})
    with pytest.raises(RecheckFailed):
        recheck_certificate(doubled)


def test_tiny_budget_is_inconclusive():
    problem = make_problem(cone_over_hexagon(), WINDING)
    certificate = verify_kkm(problem, budget=1, threads=1)
    assert certificate.verdict == SearchVerdict.INCONCLUSIVE
    assert not certificate.stats.complete
    with pytest.raises(BudgetExceeded):
        find_extension(problem, budget=1, threads=1)


def test_thread_count_does_not_change_certificates():
    for problem in (
        make_problem(cone_over_hexagon(), WINDING),
        subdivide_problem(make_problem(cone_over_hexagon(), ALTERNATING), 1),
    ):
        one = verify_kkm(problem, threads=1)
        four = verify_kkm(problem, threads=4)
        assert without_timing(one) == without_timing(four)


def test_subset_mode_searches_more_options():
    problem = make_problem(cone_over_hexagon(), WINDING, LabelMode.SUBSETS)
    certificate = verify_kkm(problem, threads=1)
    assert certificate.verdict == SearchVerdict.OBSTRUCTED
    assert certificate.stats.search_space == 7
    recheck_certificate(certificate)


@pytest.mark.parametrize("times", [1, 2])
def test_sperner_boundary_does_not_extend(times):
    T, labels = sperner_disc(times)
    problem = make_problem(T, restrict_cover(labels, boundary_vertices(T)))
    certificate = verify_kkm(problem, threads=1)
    assert certificate.verdict == SearchVerdict.OBSTRUCTED
    recheck_certificate(certificate)


def rim_cycle(A):
    """Vertices of a closed polygon in walking order"""
    neighbours = {v: [] for v in A.vertex_ids}
    for a, b in A.complex.facets:
        neighbours[a].append(b)
        neighbours[b].append(a)
    walk = [min(A.vertex_ids)]
    previous = None
    while len(walk) < len(neighbours):
        nxt = next(w for w in neighbours[walk[-1]] if w != previous)
        previous = walk[-1]
        walk.append(nxt)
    return walk


def runs_through(walk, values, hub):
    """Every run of non-hub labels takes the label of its first vertex, so no edge joins the two other labels"""
    start = next(i for i, value in enumerate(values) if value == hub)
    fixed, current = {}, None
    for step in range(len(walk)):
        i = (start + step) % len(walk)
        if values[i] == hub:
            current = None
        elif current is None:
            current = values[i]
        fixed[walk[i]] = (hub,) if values[i] == hub else (current,)
    return fixed


def test_twice_subdivided_disc_sweep(rng):
    T, _ = sperner_disc(2)
    A = boundary_of(T)
    walk = rim_cycle(A)
    assert len(walk) == 12
    assert len(T.vertex_ids) - len(walk) == 13

    winding = 0
    while winding < 100:
        labels = {v: (rng.randrange(3),) for v in walk}
        cover = Cover(num_sets=3, labels=labels)
        if degree_of_cover(A, cover).degree == 0:
            continue
        winding += 1
        certificate = verify_kkm(make_problem(T, cover), threads=1)
        assert certificate.verdict == SearchVerdict.OBSTRUCTED
        assert certificate.stats.complete
        recheck_certificate(certificate)

    for _ in range(25):
        values = [rng.randrange(3) for _ in walk]
        hub = rng.randrange(3)
        values[rng.randrange(len(walk))] = hub
        cover = Cover(num_sets=3, labels=runs_through(walk, values, hub))
        assert degree_of_cover(A, cover).degree == 0
        certificate = verify_kkm(make_problem(T, cover), threads=1)
        assert certificate.verdict == SearchVerdict.EXTENDABLE
        assert certificate.stats.complete
        recheck_certificate(certificate)


def test_every_hexagon_labeling_agrees_with_its_degree():
    H = hexagon()
    obstructed = extendable = 0
    for values in product(range(3), repeat=6):
        cover = Cover(num_sets=3, labels={v: (values[v],) for v in range(6)})
        wraps = degree_of_cover(H, cover).degree
        certificate = verify_kkm(cone_problem(H, cover), threads=1)
        recheck_certificate(certificate)
        if certificate.verdict == SearchVerdict.OBSTRUCTED:
            obstructed += 1
        else:
            assert certificate.verdict == SearchVerdict.EXTENDABLE
            assert wraps == 0
            extendable += 1
    assert obstructed > 0 and extendable > 0


def test_problem_validation():
    with pytest.raises(EmptyBoundary):
        make_problem(*sphere_with_identity(1))
    with pytest.raises(DimensionMismatch):
        make_problem(cone_over_hexagon(), Cover(num_sets=4, labels=dict(WINDING.labels)))
    T = standard_simplex(2)
    with pytest.raises(CoveringSimplexInInput):
        make_problem(T, Cover(num_sets=3, labels={0: (0, 1, 2), 1: (1,), 2: (2,)}))


def covers_a_facet(K, labels, num_sets):
    full = set(range(num_sets))
    return any(set().union(*(labels[v] for v in facet)) == full for facet in K.facets)


def witness_mutations(certificate):
    """Every single-label change of the witness, with whether it should survive a recheck"""
    problem = certificate.problem
    options = allowed_label_sets(problem.num_sets, problem.label_mode)
    subsets = allowed_label_sets(problem.num_sets, LabelMode.SUBSETS)
    for v, current in certificate.witness.labels.items():
        for replacement in subsets:
            if replacement == tuple(current):
                continue
            labels = dict(certificate.witness.labels)
            labels[v] = replacement
            if v in problem.boundary_cover.labels or replacement not in options:
                valid = False
            else:
                valid = not covers_a_facet(problem.ambient.complex, labels, problem.num_sets)
            yield Cover(num_sets=problem.num_sets, labels=labels), valid


def branch_mutations(certificate, rng):
    """Changed prefixes never survive; a swapped facet survives only if the prefix still covers it"""
    problem = certificate.problem
    options = allowed_label_sets(problem.num_sets, problem.label_mode)
    free_index = {v: i for i, v in enumerate(problem.free_vertices)}
    facets = list(problem.ambient.complex.facets)

    def still_covering(prefix, facet):
        labels = set()
        for v in facet:
            if v in free_index:
                if free_index[v] >= len(prefix):
                    return False
                labels.update(options[prefix[free_index[v]]])
            else:
                labels.update(problem.boundary_cover.labels[v])
        return labels == set(range(problem.num_sets))

    for index, branch in enumerate(certificate.pruned):
        changed = []
        for position, choice in enumerate(branch.prefix):
            for other in range(len(options)):
                if other != choice:
                    prefix = branch.prefix[:position] + (other,) + branch.prefix[position + 1:]
                    changed.append((branch.model_copy(update={"prefix": prefix}), False))
        changed.append((branch.model_copy(update={"prefix": branch.prefix + (0,)}), False))
        changed.append((branch.model_copy(update={"prefix": branch.prefix[:-1]}), False))
        for facet in rng.sample(facets, min(4, len(facets))):
            if facet != branch.covering_facet:
                changed.append((branch.model_copy(update={"covering_facet": facet}),
                                still_covering(branch.prefix, facet)))
        changed.append((branch.model_copy(update={"covering_facet": branch.covering_facet[:-1]}), False))
        for mutated, valid in changed:
            pruned = list(certificate.pruned)
            pruned[index] = mutated
            yield certificate.model_copy(update={"pruned": pruned}), valid


def free_vertex_mutations(certificate):
    problem = certificate.problem
    free = problem.free_vertices
    rim = sorted(problem.boundary_cover.labels)
    lists = [free[1:], free + (rim[0],)]
    if len(free) > 1:
        lists.append((free[1], free[0]) + free[2:])
    for changed in lists:
        yield certificate.model_copy(update={"problem": problem.model_copy(update={"free_vertices": changed})})


def assert_recheck(certificate, valid):
    if valid:
        recheck_certificate(certificate)
    else:
        with pytest.raises(RecheckFailed):
            recheck_certificate(certificate)


@pytest.mark.parametrize("subdivide", [0, 1])
def test_recheck_rejects_every_broken_witness(subdivide):
    certificate = verify_kkm(cone_problem(hexagon(), ALTERNATING, subdivide=subdivide), threads=1)
    assert certificate.verdict == SearchVerdict.EXTENDABLE
    kept = broken = 0
    for witness, valid in witness_mutations(certificate):
        assert_recheck(certificate.model_copy(update={"witness": witness}), valid)
        kept += valid
        broken += not valid
    assert kept > 0 and broken > 0
    for tampered in free_vertex_mutations(certificate):
        assert_recheck(tampered, False)


@pytest.mark.parametrize("subdivide", [0, 1])
def test_recheck_rejects_every_broken_branch(rng, subdivide):
    S, identity = sphere_with_identity(1)
    certificate = verify_kkm(cone_problem(S, identity, subdivide=subdivide), threads=1)
    assert certificate.verdict == SearchVerdict.OBSTRUCTED
    recheck_certificate(certificate)
    for tampered, valid in branch_mutations(certificate, rng):
        assert_recheck(tampered, valid)
    for tampered in free_vertex_mutations(certificate):
        assert_recheck(tampered, False)
