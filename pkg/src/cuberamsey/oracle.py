"""Exhaustive ground truth for small cases.

Nothing here scales; everything here is trusted.  A depth-first search
finds red cubes in arbitrary colourings, and two enumeration modes sweep
every 2-colouring of a small complete graph: a plain sweep over all
2^C(N,2) colourings with a vectorised blue-triangle prefilter, and a
sweep over canonical triangle-free blue graphs only, one per isomorphism
class.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .bits import bit, iter_bits
from .colored_graph import ColouredGraph, red_components
from .hypercube import bandwidth_order

# unlabeled triangle-free graphs on 1..9 vertices; generation is checked
# against these before its output is trusted
TRIANGLE_FREE_GRAPH_COUNTS = (1, 2, 3, 7, 14, 38, 107, 410, 1897)


@dataclass(frozen=True)
class CubeSearchResult:
    found: bool
    embedding: Optional[dict[int, int]]
    nodes: int


def contains_red_cube(G: ColouredGraph, n: int) -> CubeSearchResult:
    """Exhaustive search for a red copy of Q_n in G.

    Cube vertices are tried in bandwidth order, candidates are the
    intersection of the red masks of already-placed neighbours.  The cube
    is connected, so its image lies inside one red component; components
    with fewer than 2^n vertices are skipped outright, and the search
    runs per component.  The cost is exponential in 2^n; meant for
    graphs of a few dozen vertices.  A graph smaller than the cube
    trivially contains none.
    """
    size = 1 << n
    if G.n_vertices < size:
        return CubeSearchResult(False, None, 0)
    order = bandwidth_order(range(size), n)
    pos = {z: i for i, z in enumerate(order)}
    nbrs_before = [
        [pos[order[i] ^ (1 << p)] for p in range(n) if pos[order[i] ^ (1 << p)] < i]
        for i in range(size)
    ]
    assigned = [0] * size
    used = 0
    nodes = 0

    def dfs(i: int, pool: int) -> bool:
        nonlocal used, nodes
        if i == size:
            return True
        avail = pool & ~used
        for j in nbrs_before[i]:
            avail &= G.red_mask(assigned[j])
        for v in iter_bits(avail):
            nodes += 1
            assigned[i] = v
            used |= bit(v)
            if dfs(i + 1, pool):
                return True
            used &= ~bit(v)
        return False

    for comp in red_components(G):
        if comp.bit_count() < size:
            continue
        if dfs(0, comp):
            return CubeSearchResult(
                True, {order[i]: assigned[i] for i in range(size)}, nodes
            )
    return CubeSearchResult(False, None, nodes)


@dataclass(frozen=True)
class RamseyVerdict:
    """Outcome of an exhaustive sweep at one graph size.

    ``holds`` says every colouring of K_N has a blue triangle or a red
    n-cube; when it fails, ``witness`` is a colouring with neither.
    ``checked`` counts colourings for the plain mode and isomorphism
    classes for the canonical mode.
    """

    n: int
    N: int
    holds: bool
    witness: Optional[ColouredGraph]
    checked: int
    mode: str


def _pair_index(i: int, j: int) -> int:
    # pairs ordered (0,1), (0,2), (1,2), (0,3), ...: all pairs into a new
    # vertex come after all pairs among the old ones
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def _graph_from_pairbits(N: int, c: int) -> ColouredGraph:
    edges = [
        (i, j)
        for i in range(N)
        for j in range(i + 1, N)
        if (c >> _pair_index(i, j)) & 1
    ]
    return ColouredGraph.from_blue_edges(N, edges)


def _plain_sweep(n: int, N: int) -> RamseyVerdict:
    P = N * (N - 1) // 2
    cs = np.arange(1 << P, dtype=np.uint32)
    has_triangle = np.zeros(cs.shape, dtype=bool)
    for a, b, c in combinations(range(N), 3):
        mask = np.uint32(
            (1 << _pair_index(a, b))
            | (1 << _pair_index(a, c))
            | (1 << _pair_index(b, c))
        )
        has_triangle |= (cs & mask) == mask
    surv = cs[~has_triangle]

    if (1 << n) > N:
        # no colouring can hold the cube; the all-red colouring survives
        # the triangle filter and witnesses the failure
        return RamseyVerdict(n, N, False, _graph_from_pairbits(N, 0), 1 << P, "plain")
    if n == 1:
        # a red edge is missing only from the all-blue colouring
        no_cube = surv == np.uint32((1 << P) - 1)
    else:
        # a red 4-cycle pairs two vertices with two common red neighbours
        no_cube = np.ones(surv.shape, dtype=bool)
        for i, j in combinations(range(N), 2):
            cnt = np.zeros(surv.shape, dtype=np.uint8)
            for k in range(N):
                if k == i or k == j:
                    continue
                both_red = (
                    (surv >> np.uint32(_pair_index(i, k)))
                    | (surv >> np.uint32(_pair_index(j, k)))
                ) & np.uint32(1)
                cnt += (both_red == 0).astype(np.uint8)
            no_cube &= ~(cnt >= 2)
    idx = np.flatnonzero(no_cube)
    if idx.size:
        witness = _graph_from_pairbits(N, int(surv[idx[0]]))
        return RamseyVerdict(n, N, False, witness, 1 << P, "plain")
    return RamseyVerdict(n, N, True, None, 1 << P, "plain")


def _is_canonical(adj: list[int], v: int) -> bool:
    """Is this labeling lexicographically least among all relabelings?

    The code lists, vertex by vertex, each vertex's adjacency column
    towards smaller labels.  The search walks every relabeling whose
    partial code ties the given one and rejects as soon as any column
    can be beaten.
    """
    cols = [tuple((adj[t] >> s) & 1 for s in range(t)) for t in range(v)]
    chosen: list[int] = []
    in_use = [False] * v

    def dfs(t: int) -> bool:
        if t == v:
            return True
        target = cols[t]
        for u in range(v):
            if in_use[u]:
                continue
            col = tuple((adj[u] >> w) & 1 for w in chosen)
            if col < target:
                return False
            if col == target:
                chosen.append(u)
                in_use[u] = True
                ok = dfs(t + 1)
                chosen.pop()
                in_use[u] = False
                if not ok:
                    return False
        return True

    return dfs(0)


def canonical_triangle_free_graphs(N: int) -> list[list[int]]:
    """All triangle-free blue graphs on N vertices, one per isomorphism
    class, as adjacency mask lists in canonical labeling.

    Grown one vertex at a time: the new vertex is attached to an
    independent set (anything else closes a triangle) and the result is
    kept only when canonically labeled.  Dropping the last vertex of a
    canonical graph is canonical, so every class is reached exactly once.
    """
    if N < 1:
        raise ValueError("graph size must be positive")
    level: list[list[int]] = [[0]]
    for v in range(2, N + 1):
        nxt: list[list[int]] = []
        for adj in level:
            for S in range(1 << (v - 1)):
                if any(adj[u] & S for u in iter_bits(S)):
                    continue
                cand = [adj[u] | (((S >> u) & 1) << (v - 1)) for u in range(v - 1)]
                cand.append(S)
                if _is_canonical(cand, v):
                    nxt.append(cand)
        level = nxt
    return level


def _canonical_sweep(n: int, N: int) -> RamseyVerdict:
    graphs = canonical_triangle_free_graphs(N)
    expected = TRIANGLE_FREE_GRAPH_COUNTS[N - 1]
    assert len(graphs) == expected, (
        f"generated {len(graphs)} classes at N={N}, expected {expected}"
    )
    for adj in graphs:
        G = ColouredGraph(N, list(adj), validate=False)
        if not contains_red_cube(G, n).found:
            return RamseyVerdict(n, N, False, G, len(graphs), "canonical")
    return RamseyVerdict(n, N, True, None, len(graphs), "canonical")


def exhaustive_ramsey(n: int, N: int, mode: str = "auto") -> RamseyVerdict:
    """Does every red/blue colouring of K_N contain a blue triangle or a
    red n-cube?

    The plain mode enumerates all colourings and needs N <= 7; the
    canonical mode enumerates triangle-free blue graphs up to isomorphism
    and needs N <= 9.  Larger N is refused with a cost estimate rather
    than attempted.
    """
    if n < 1:
        raise ValueError("cube dimension must be positive")
    if N < 1:
        raise ValueError("graph size must be positive")
    if mode == "auto":
        mode = "plain" if N <= 7 else "canonical"
    if mode == "plain":
        if N > 7:
            raise ValueError(
                f"plain enumeration of K_{N} means 2^{comb(N, 2)} colourings; "
                f"use canonical mode up to N = 9"
            )
        return _plain_sweep(n, N)
    if mode == "canonical":
        if N > 9:
            raise ValueError(
                f"canonical enumeration is tabulated only to N = 9 "
                f"(1897 classes); N = {N} would need an unverified count"
            )
        return _canonical_sweep(n, N)
    raise ValueError(f"unknown mode {mode!r}")
