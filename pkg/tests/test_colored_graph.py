import io
import random
from itertools import combinations

import pytest

from cuberamsey.bits import bits_list, mask_of
from cuberamsey.colored_graph import (
    ColouredGraph,
    find_red_clique,
    is_blue_triangle_free,
    lower_bound_coloring,
    max_balanced_biclique,
    max_disjoint_red_cliques,
    random_bipartite_blue,
    random_triangle_free_greedy,
    red_components,
    verify_red_embedding,
)
from cuberamsey.errors import GraphParseError


def random_colouring(n, p, rng):
    """Arbitrary symmetric blue relation, not necessarily triangle free."""
    blue = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                blue[u] |= 1 << v
                blue[v] |= 1 << u
    return ColouredGraph(n, blue)


def brute_has_blue_triangle(G):
    for a, b, c in combinations(range(G.n_vertices), 3):
        if G.is_blue(a, b) and G.is_blue(a, c) and G.is_blue(b, c):
            return (a, b, c)
    return None


def brute_max_red_clique(G, pool, m):
    vs = [v for v in range(G.n_vertices) if (pool >> v) & 1]
    for cand in combinations(vs, m):
        if G.is_red_clique(cand):
            return cand
    return None


def test_constructor_validates():
    with pytest.raises(ValueError):
        ColouredGraph(2, [0b10])  # wrong length
    with pytest.raises(ValueError):
        ColouredGraph(2, [0b01, 0b00])  # self loop
    with pytest.raises(ValueError):
        ColouredGraph(2, [0b10, 0b00])  # asymmetric
    with pytest.raises(ValueError):
        ColouredGraph(2, [0b100, 0b000])  # out of range


def test_text_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        G = random_colouring(rng.randrange(1, 15), rng.random(), rng)
        buf = io.StringIO()
        G.to_text(buf)
        buf.seek(0)
        H = ColouredGraph.from_text(buf)
        assert H.n_vertices == G.n_vertices
        assert H.blue == G.blue


def test_from_text_rejects_garbage():
    for text, bad_line in [
        ("", None),
        ("x\n", 1),
        ("3\n0 0\n", 2),
        ("3\n1 0\n", 2),  # needs u < v
        ("3\n0 5\n", 2),
        ("3\n0 1 2\n", 2),
        ("-1\n", 1),
    ]:
        with pytest.raises(GraphParseError):
            ColouredGraph.from_text(io.StringIO(text))


def test_from_text_allows_comments_and_blanks():
    G = ColouredGraph.from_text(io.StringIO("# colouring\n3\n\n0 2\n"))
    assert G.n_vertices == 3
    assert G.is_blue(0, 2) and not G.is_blue(0, 1)


def test_triangle_detection_against_brute_force():
    rng = random.Random(17)
    for _ in range(150):
        n = rng.randrange(3, 13)
        G = random_colouring(n, rng.choice([0.1, 0.3, 0.6, 0.9]), rng)
        ok, tri = is_blue_triangle_free(G)
        brute = brute_has_blue_triangle(G)
        assert ok == (brute is None)
        if not ok:
            a, b, c = tri
            assert G.is_blue(a, b) and G.is_blue(a, c) and G.is_blue(b, c)


def test_red_components_against_brute_force():
    rng = random.Random(29)
    for _ in range(80):
        n = rng.randrange(1, 14)
        G = random_colouring(n, rng.random(), rng)
        comps = red_components(G)
        # brute union-find over red edges
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u in range(n):
            for v in range(u + 1, n):
                if G.is_red(u, v):
                    parent[find(u)] = find(v)
        groups = {}
        for v in range(n):
            groups.setdefault(find(v), 0)
            groups[find(v)] |= 1 << v
        assert sorted(comps) == sorted(groups.values())


def test_find_red_clique_against_brute_force():
    rng = random.Random(41)
    for _ in range(120):
        n = rng.randrange(4, 13)
        G = random_colouring(n, rng.choice([0.3, 0.5, 0.8]), rng)
        pool = 0
        for v in range(n):
            if rng.random() < 0.8:
                pool |= 1 << v
        m = rng.randrange(2, 5)
        got = find_red_clique(G, pool, m)
        brute = brute_max_red_clique(G, pool, m)
        assert (got is None) == (brute is None)
        if got is not None:
            assert len(got) == m
            assert all((pool >> v) & 1 for v in got)
            assert G.is_red_clique(got)


def test_max_disjoint_red_cliques_family_properties():
    rng = random.Random(59)
    for _ in range(60):
        n = rng.randrange(6, 15)
        G = random_colouring(n, rng.choice([0.2, 0.5, 0.8]), rng)
        A = (1 << n) - 1
        m = rng.randrange(2, 5)
        fam = max_disjoint_red_cliques(G, A, m)
        seen = 0
        for cl in fam:
            assert len(cl) == m
            assert G.is_red_clique(cl)
            cm = mask_of(cl)
            assert cm & A == cm
            assert not (cm & seen), "cliques overlap"
            seen |= cm
        # maximality: the leftover provably has no further red m-clique
        assert brute_max_red_clique(G, A & ~seen, m) is None


def brute_max_balanced_biclique(G, side1, side2):
    best = 0
    bx, by = (), ()
    for w in range(1, min(len(side1), len(side2)) + 1):
        found = None
        for X in combinations(side1, w):
            for Y in combinations(side2, w):
                if all(G.is_red(x, y) for x in X for y in Y):
                    found = (X, Y)
                    break
            if found:
                break
        if found:
            best, (bx, by) = w, found
        else:
            break
    return best, bx, by


def test_max_balanced_biclique_against_subset_enumeration():
    rng = random.Random(67)
    for _ in range(60):
        n1 = rng.randrange(1, 7)
        n2 = rng.randrange(1, 7)
        side1 = list(range(n1))
        side2 = list(range(n1, n1 + n2))
        G = random_colouring(n1 + n2, rng.choice([0.2, 0.5, 0.8]), rng)
        w, X, Y = max_balanced_biclique(G, side1, side2)
        bw, _, _ = brute_max_balanced_biclique(G, side1, side2)
        assert w == bw
        assert len(X) == len(Y) == w
        assert set(X) <= set(side1) and set(Y) <= set(side2)
        assert all(G.is_red(x, y) for x in X for y in Y)


def test_max_balanced_biclique_conventions():
    # no red cross pair at all: the empty biclique, w = 0
    G = ColouredGraph.from_blue_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert max_balanced_biclique(G, [0, 1], [2, 3]) == (0, (), ())
    # all red: w is the smaller side
    H = ColouredGraph(5, [0] * 5)
    w, X, Y = max_balanced_biclique(H, [0, 1], [2, 3, 4])
    assert w == 2 and X == (0, 1) and len(Y) == 2
    with pytest.raises(ValueError):
        max_balanced_biclique(H, [0, 1], [1, 2])


def test_max_balanced_biclique_planted_block():
    # dense blue cross with an all-red corner; the exact answer is the corner
    rng = random.Random(71)
    n1, n2, b = 12, 12, 5
    blue = [0] * (n1 + n2)
    for u in range(n1):
        for v in range(n1, n1 + n2):
            if u < b and v - n1 < b:
                continue
            blue[u] |= 1 << v
            blue[v] |= 1 << u
    G = ColouredGraph(n1 + n2, blue)
    w, X, Y = max_balanced_biclique(G, range(n1), range(n1, n1 + n2))
    assert w == b
    assert all(G.is_red(x, y) for x in X for y in Y)


def test_lower_bound_coloring_properties():
    for n in range(1, 7):
        G = lower_bound_coloring(n)
        assert G.n_vertices == 2 * ((1 << n) - 1)
        ok, _ = is_blue_triangle_free(G)
        assert ok
        comps = red_components(G)
        assert len(comps) == 2
        assert all(c.bit_count() == (1 << n) - 1 for c in comps)


def test_random_bipartite_blue_is_triangle_free():
    rng = random.Random(83)
    for p in (0.0, 0.3, 1.0):
        G = random_bipartite_blue(20, p, rng)
        ok, _ = is_blue_triangle_free(G)
        assert ok
        half = 10
        for u in range(half):
            assert G.blue[u] & ((1 << half) - 1) == 0


def test_random_triangle_free_greedy_respects_both_promises():
    rng = random.Random(97)
    for _ in range(20):
        n = rng.randrange(6, 40)
        target = rng.randrange(0, n)
        G = random_triangle_free_greedy(n, target, rng)
        ok, _ = is_blue_triangle_free(G)
        assert ok
        assert G.blue_edge_count() <= target


def test_generators_are_seed_deterministic():
    a = random_triangle_free_greedy(30, 12, random.Random(5))
    b = random_triangle_free_greedy(30, 12, random.Random(5))
    assert a.blue == b.blue
    c = random_bipartite_blue(30, 0.4, random.Random(9))
    d = random_bipartite_blue(30, 0.4, random.Random(9))
    assert c.blue == d.blue


def test_verify_red_embedding():
    G = ColouredGraph(6, [0] * 6)  # everything red
    phi = {0: 0, 1: 1, 2: 2, 3: 3}
    assert verify_red_embedding(G, 2, phi).ok
    # non-injective
    bad = dict(phi)
    bad[3] = 0
    assert not verify_red_embedding(G, 2, bad).ok
    # missing cube vertices are a caller bug, not a verdict
    with pytest.raises(ValueError):
        verify_red_embedding(G, 2, {0: 0, 1: 1})
    # restricted domain is fine
    assert verify_red_embedding(G, 2, {0: 0, 1: 1}, domain=[0, 1]).ok
    # blue cube edge caught
    H = ColouredGraph.from_blue_edges(6, [(0, 1)])
    v = verify_red_embedding(H, 2, phi)
    assert not v.ok
    assert any("non-red" in e for e in v.errors)
    # out-of-range image
    assert not verify_red_embedding(G, 2, {0: 0, 1: 1, 2: 2, 3: 9}).ok
