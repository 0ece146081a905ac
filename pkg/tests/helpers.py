"""Shared instance builders for the test suite."""

import random
from math import comb

from cuberamsey.colored_graph import ColouredGraph
from cuberamsey.dense_embedding import (
    AssignmentEntry,
    PartialAssignment,
    candidate_set_size,
)
from cuberamsey.hypercube import InitialSubcube, subcube_distance


def all_red_graph(n_vertices: int) -> ColouredGraph:
    return ColouredGraph(n_vertices, [0] * n_vertices, validate=False)


def two_clique_linked_graph(n: int, extra: int = 0, m: int = None) -> ColouredGraph:
    """Two red cliques of size m (default 2^(n+1)), complete blue across
    except for a planted red biclique of side 2*C(n, n//2) on the lowest
    indices."""
    if m is None:
        m = 1 << (n + 1)
    N = 2 * m + extra
    b = 2 * comb(n, n // 2)
    low_pl = (1 << b) - 1
    high_pl = low_pl << m
    cross_hi = ((1 << m) - 1) << m
    cross_lo = (1 << m) - 1
    blue = []
    for v in range(m):
        mask = cross_hi
        if v < b:
            mask &= ~high_pl
        blue.append(mask)
    for v in range(m, 2 * m):
        mask = cross_lo
        if v - m < b:
            mask &= ~low_pl
        blue.append(mask)
    for _ in range(extra):
        blue.append(0)
    return ColouredGraph(N, blue, validate=False)


def random_subcube_antichain(n: int, rng: random.Random, max_codim=None):
    """Disjoint initial subcubes, sorted by codimension."""
    if max_codim is None:
        max_codim = min(n - 1, 3)
    leaves = []

    def split(prefix):
        if len(prefix) < max_codim and (not prefix or rng.random() < 0.45):
            split(prefix + (0,))
            split(prefix + (1,))
        else:
            leaves.append(prefix)

    split(())
    kept = [p for p in leaves if rng.random() < 0.75]
    if not kept:
        kept = [leaves[0]]
    kept.sort(key=lambda p: (len(p), p))
    return [InitialSubcube(p) for p in kept]


def random_valid_partial_assignment(n: int, gamma, rng: random.Random):
    """A host graph plus an assignment that passes every defining clause.

    Candidate sets are disjoint red cliques of exactly the right size;
    blue noise runs only between candidate sets, and for cube-adjacent
    pairs each later vertex stays at or below the cross-degree threshold
    towards the earlier set.
    """
    subcubes = random_subcube_antichain(n, rng)
    sizes = [candidate_set_size(gamma, n, x.codim) for x in subcubes]
    starts = []
    at = 0
    for sz in sizes:
        starts.append(at)
        at += sz
    total = at
    members = [
        tuple(range(st, st + sz)) for st, sz in zip(starts, sizes)
    ]
    blue = [0] * total
    for i in range(len(subcubes)):
        for j in range(i + 1, len(subcubes)):
            dist = subcube_distance(subcubes[i], subcubes[j])
            if dist == 1:
                d_i = subcubes[i].codim
                thr = gamma * (1 << (n - d_i)) / d_i
                cap = int(thr)
                for v in members[j]:
                    for u in rng.sample(members[i], min(rng.randint(0, cap), sizes[i])):
                        blue[u] |= 1 << v
                        blue[v] |= 1 << u
            else:
                # unconstrained direction: sprinkle a few edges anyway
                for _ in range(rng.randrange(0, 3)):
                    u = rng.choice(members[i])
                    v = rng.choice(members[j])
                    blue[u] |= 1 << v
                    blue[v] |= 1 << u
    G = ColouredGraph(total, blue)
    entries = tuple(
        AssignmentEntry(x, mem) for x, mem in zip(subcubes, members)
    )
    return G, PartialAssignment(entries, gamma)


def gap_consequence_holds(G: ColouredGraph, dec) -> bool:
    """Audit every round: sparse vertices stay below s/lambda into the
    cliques that were extracted but left out of that round's snake."""
    lam = dec.params.lam
    for rec in dec.rounds:
        outside = [
            c for i, c in enumerate(rec.cliques) if i not in rec.snake_indices
        ]
        for v in rec.sparse_added:
            for c in outside:
                deg = sum(1 for u in c if G.is_blue(v, u))
                if lam * deg >= rec.s:
                    return False
    return True


def two_clique_linked_shuffled(n: int, rng: random.Random, extra: int = 0):
    """Same structure as ``two_clique_linked_graph`` with vertex labels
    drawn at random; built directly from group masks so large instances
    stay cheap."""
    m = 1 << (n + 1)
    b = 2 * comb(n, n // 2)
    N = 2 * m + extra
    labels = (
        [0] * b + [1] * (m - b) + [2] * b + [3] * (m - b) + [4] * extra
    )
    rng.shuffle(labels)
    gm = [0] * 5
    for v, g in enumerate(labels):
        gm[g] |= 1 << v
    blue_of = {
        0: gm[3],
        1: gm[2] | gm[3],
        2: gm[1],
        3: gm[0] | gm[1],
        4: 0,
    }
    blue = [blue_of[g] for g in labels]
    return ColouredGraph(N, blue, validate=False)
