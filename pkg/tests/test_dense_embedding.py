import random
from fractions import Fraction

import pytest

from helpers import all_red_graph, random_valid_partial_assignment
from cuberamsey.bits import mask_of
from cuberamsey.colored_graph import (
    ColouredGraph,
    random_triangle_free_greedy,
    verify_red_embedding,
)
from cuberamsey.dense_embedding import (
    AssignmentEntry,
    Cleaned,
    Extended,
    PartialAssignment,
    ThresholdSchedule,
    candidate_set_size,
    check_partial_assignment,
    dense_embed,
    embed_partial_assignment,
    extend_or_clean,
)
from cuberamsey.errors import HypothesisError
from cuberamsey.hypercube import InitialSubcube, subcube_vertices


def test_candidate_set_size_is_exact_ceiling():
    assert candidate_set_size(Fraction(1, 4), 6, 2) == 20
    assert candidate_set_size(Fraction(1, 10), 8, 3) == 36  # ceil(35.2)
    assert candidate_set_size(Fraction(1, 2), 4, 4) == 2  # ceil(1.5)
    assert candidate_set_size(Fraction(1, 3), 5, 1) == 22  # ceil(64/3)


def test_partial_assignment_validates_gamma():
    with pytest.raises(ValueError):
        PartialAssignment((), Fraction(0))
    with pytest.raises(ValueError):
        PartialAssignment((), Fraction(1))
    pa = PartialAssignment.empty(0.25)
    assert pa.gamma == Fraction(1, 4)


def _single_entry(n, gamma, codim, members):
    e = AssignmentEntry(InitialSubcube((0,) * codim), tuple(members))
    return PartialAssignment((e,), gamma)


def test_check_clause_a_sizes_and_order():
    g = Fraction(1, 4)
    G = all_red_graph(64)
    want = candidate_set_size(g, 4, 1)  # 10
    ok, clause, _ = check_partial_assignment(G, _single_entry(4, g, 1, range(want)), 4)
    assert ok
    ok, clause, _ = check_partial_assignment(
        G, _single_entry(4, g, 1, range(want - 1)), 4
    )
    assert (ok, clause) == (False, "a")
    # decreasing codimension
    e1 = AssignmentEntry(InitialSubcube((0, 0)), tuple(range(candidate_set_size(g, 4, 2))))
    e2 = AssignmentEntry(
        InitialSubcube((1,)), tuple(range(20, 20 + candidate_set_size(g, 4, 1)))
    )
    ok, clause, _ = check_partial_assignment(G, PartialAssignment((e1, e2), g), 4)
    assert (ok, clause) == (False, "a")


def test_check_clause_b_red_clique_and_disjointness():
    g = Fraction(1, 4)
    n = 4
    want = candidate_set_size(g, n, 1)
    G = ColouredGraph.from_blue_edges(32, [(0, 1)])
    ok, clause, _ = check_partial_assignment(G, _single_entry(n, g, 1, range(want)), n)
    assert (ok, clause) == (False, "b")
    # shared vertices between entries
    H = all_red_graph(32)
    w2 = candidate_set_size(g, n, 2)
    e1 = AssignmentEntry(InitialSubcube((0, 0)), tuple(range(w2)))
    e2 = AssignmentEntry(InitialSubcube((1, 1)), tuple(range(w2)))
    ok, clause, _ = check_partial_assignment(H, PartialAssignment((e1, e2), g), n)
    assert (ok, clause) == (False, "b")


def test_check_clause_c_overlapping_subcubes():
    g = Fraction(1, 4)
    n = 4
    w1 = candidate_set_size(g, n, 1)
    w2 = candidate_set_size(g, n, 2)
    H = all_red_graph(64)
    e1 = AssignmentEntry(InitialSubcube((0,)), tuple(range(w1)))
    e2 = AssignmentEntry(InitialSubcube((0, 1)), tuple(range(w1, w1 + w2)))
    ok, clause, _ = check_partial_assignment(H, PartialAssignment((e1, e2), g), n)
    assert (ok, clause) == (False, "c")


def test_check_clause_21_cross_degree_is_one_sided():
    g = Fraction(1, 2)
    n = 3
    w = candidate_set_size(g, n, 1)  # 6
    first = tuple(range(w))
    second = tuple(range(w, 2 * w))
    # threshold into the earlier set: g * 2^(n-1) / 1 = 2
    edges = [(first[0], v) for v in second[:3]]  # degree 3 of one later vertex
    G = ColouredGraph.from_blue_edges(2 * w, [(min(a, b), max(a, b)) for a, b in edges])
    e1 = AssignmentEntry(InitialSubcube((0,)), first)
    e2 = AssignmentEntry(InitialSubcube((1,)), second)
    ok, clause, _ = check_partial_assignment(G, PartialAssignment((e1, e2), g), n)
    assert ok, clause  # degree of the *later* vertices into first is <= 1 each

    edges = [(v, second[0]) for v in first[:3]]  # one later vertex, degree 3
    G = ColouredGraph.from_blue_edges(2 * w, edges)
    ok, clause, _ = check_partial_assignment(G, PartialAssignment((e1, e2), g), n)
    assert (ok, clause) == (False, "2.1")


def test_randomized_valid_assignments_embed_and_verify():
    rng = random.Random(2024)
    done = 0
    for _ in range(40):
        n = rng.randrange(4, 8)
        gamma = rng.choice([Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)])
        G, pa = random_valid_partial_assignment(n, gamma, rng)
        ok, clause, detail = check_partial_assignment(G, pa, n)
        assert ok, (clause, detail)
        phi = embed_partial_assignment(G, pa, n)
        covered = [
            z for e in pa.entries for z in subcube_vertices(e.subcube, n)
        ]
        assert sorted(phi) == sorted(covered)
        assert verify_red_embedding(G, n, phi, domain=covered).ok
        # every image sits in its own candidate set
        for e in pa.entries:
            mm = set(e.members)
            for z in subcube_vertices(e.subcube, n):
                assert phi[z] in mm
        done += 1
    assert done == 40


def test_extend_or_clean_precondition_errors():
    g = Fraction(1, 4)
    n = 4
    G = all_red_graph(40)
    pa = PartialAssignment.empty(g)
    full = (1 << 40) - 1
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(G, pa, full, 0, 2, n)
    assert e.value.hypothesis == "threshold-range"
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(G, pa, full, 1, n + 1, n)
    assert e.value.hypothesis == "threshold-range"

    w2 = candidate_set_size(g, n, 2)
    entry = AssignmentEntry(InitialSubcube((0, 0)), tuple(range(w2)))
    pa2 = PartialAssignment((entry,), g)
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(G, pa2, full & ~mask_of(entry.members), 1, 1, n)
    assert e.value.hypothesis == "codimension-order"
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(G, pa2, full, 1, 2, n)
    assert e.value.hypothesis == "active-overlap"

    # assigned vertex too blue towards the active set
    blue_hub = [(0, v) for v in range(w2, w2 + 20)]
    H = ColouredGraph.from_blue_edges(40, blue_hub)
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(H, pa2, full & ~mask_of(entry.members), 1, 2, n)
    assert e.value.hypothesis == "active-degree"


def test_extend_or_clean_cube_covered():
    g = Fraction(1, 4)
    n = 2
    w = candidate_set_size(g, n, 1)
    G = all_red_graph(4 * w)
    e1 = AssignmentEntry(InitialSubcube((0,)), tuple(range(w)))
    e2 = AssignmentEntry(InitialSubcube((1,)), tuple(range(w, 2 * w)))
    pa = PartialAssignment((e1, e2), g)
    A = ((1 << (4 * w)) - 1) & ~pa.used_mask()
    with pytest.raises(HypothesisError) as e:
        extend_or_clean(G, pa, A, 1, 1, n)
    assert e.value.hypothesis == "cube-covered"


def test_dichotomy_outcomes_on_random_graphs():
    rng = random.Random(77)
    extended = cleaned = 0
    for _ in range(60):
        n = rng.randrange(3, 6)
        b = rng.randrange(1, n)
        a = rng.randrange(1, b + 1)
        g = rng.choice([Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)])
        hub = rng.random() < 0.5
        N = rng.randrange(3 << n, 5 << n)
        if hub:
            # a vertex with a big independent blue star forces an extension
            star = 1 << (n - b + 1)
            edges = [(0, v) for v in range(1, 1 + star)]
            G = ColouredGraph.from_blue_edges(N, edges)
        else:
            G = random_triangle_free_greedy(N, N // 8, rng)
        pa = PartialAssignment.empty(g)
        A = (1 << N) - 1
        step = extend_or_clean(G, pa, A, a, b, n)
        if isinstance(step, Extended):
            extended += 1
            ok, clause, detail = check_partial_assignment(G, step.assignment, n)
            assert ok, (clause, detail)
        else:
            cleaned += 1
            assert isinstance(step, Cleaned)
            # nobody keeps a big blue star into the cleaned set
            need = 1 << (n - b + 1)
            for u in range(N):
                assert (G.blue[u] & step.mask).bit_count() < need
            # and the cleaning stayed within its counting allowance
            allowance = Fraction(b * b, g) * (1 << (n - a + 1))
            assert A.bit_count() - step.mask.bit_count() <= allowance
    assert extended >= 10 and cleaned >= 10


def test_threshold_schedule_validation():
    with pytest.raises(ValueError):
        ThresholdSchedule((2,))
    with pytest.raises(ValueError):
        ThresholdSchedule((3, 2))
    with pytest.raises(ValueError):
        ThresholdSchedule((0, 1))
    assert ThresholdSchedule((2, 3, 4)).passes == 2


def test_dense_embed_all_red():
    for n, sched in ((2, (1, 1)), (3, (1, 1, 2)), (4, (1, 1, 2))):
        G = all_red_graph(2 << n)
        phi = dense_embed(G, n, Fraction(1, 4), ThresholdSchedule(sched))
        assert verify_red_embedding(G, n, phi).ok


def test_dense_embed_hypothesis_errors():
    sched = ThresholdSchedule((1, 1, 2))
    with pytest.raises(HypothesisError) as e:
        dense_embed(all_red_graph(4), 3, Fraction(1, 4), sched)
    assert e.value.hypothesis == "order"
    with pytest.raises(HypothesisError) as e:
        dense_embed(all_red_graph(16), 2, Fraction(1, 4), sched)
    assert e.value.hypothesis == "schedule-depth"
    hub = ColouredGraph.from_blue_edges(16, [(0, v) for v in range(1, 4)])
    with pytest.raises(HypothesisError) as e:
        dense_embed(hub, 2, Fraction(1, 4), ThresholdSchedule((1, 1)))
    assert e.value.hypothesis == "max-degree"
    tri = ColouredGraph.from_blue_edges(32, [(0, 1), (0, 2), (1, 2)])
    with pytest.raises(HypothesisError) as e:
        dense_embed(tri, 3, Fraction(1, 4), ThresholdSchedule((2, 2)))
    assert e.value.hypothesis == "triangle-free"


def test_dense_embed_sparse_random_hosts():
    rng = random.Random(13)
    for n in (4, 5, 6):
        N = 2 << n
        G = random_triangle_free_greedy(N, N // 8, rng)
        sched = ThresholdSchedule((2, 3, min(4, n - 1)))
        cap = 1 << (n - 2)
        if any(m.bit_count() > cap for m in G.blue):
            continue
        phi = dense_embed(G, n, Fraction(1, 4), sched)
        assert verify_red_embedding(G, n, phi).ok
