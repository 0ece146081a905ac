"""Two-coloured complete graphs stored as blue-adjacency bitmasks.

A colouring of K_N assigns every unordered pair either blue or red.  We
store the blue relation only; a pair of distinct vertices is red exactly
when it is not blue.  All vertex sets passed around the package are int
bitmasks, so the natural unit of work is a mask intersection rather than
an edge list.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from .bits import bit, bits_list, iter_bits, lowest_bits, mask_of
from .errors import GraphParseError


@dataclass
class Verdict:
    """Outcome of a verification pass: ``ok`` plus human-readable errors."""

    ok: bool
    errors: list[str] = field(default_factory=list)

    @classmethod
    def success(cls) -> "Verdict":
        return cls(True, [])

    @classmethod
    def failure(cls, *errors: str) -> "Verdict":
        return cls(False, list(errors))

    def __bool__(self) -> bool:
        return self.ok


class ColouredGraph:
    """A complete graph on vertices 0..n_vertices-1 with blue/red edges.

    ``blue`` is a list of bitmasks, one per vertex; bit v of ``blue[u]``
    says uv is blue.  The relation must be irreflexive and symmetric.
    Construction with ``validate=False`` skips that check; it is meant for
    internal constructions that are symmetric by shape.
    """

    def __init__(self, n_vertices: int, blue: list[int], validate: bool = True):
        if n_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(blue) != n_vertices:
            raise ValueError(
                f"expected {n_vertices} adjacency masks, got {len(blue)}"
            )
        self.n_vertices = n_vertices
        self.blue = blue
        self.full_mask = (1 << n_vertices) - 1
        if validate:
            self._validate()

    def _validate(self):
        for u, m in enumerate(self.blue):
            if m >> self.n_vertices:
                raise ValueError(f"mask of vertex {u} mentions out-of-range vertices")
            if (m >> u) & 1:
                raise ValueError(f"vertex {u} is blue-adjacent to itself")
        for u, m in enumerate(self.blue):
            rest = m >> (u + 1)
            v = u + 1
            while rest:
                if rest & 1 and not (self.blue[v] >> u) & 1:
                    raise ValueError(f"blue edge {u}-{v} is not symmetric")
                rest >>= 1
                v += 1

    @classmethod
    def from_blue_edges(
        cls, n_vertices: int, edges: Iterable[tuple[int, int]]
    ) -> "ColouredGraph":
        blue = [0] * n_vertices
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge {u}-{v} out of range")
            blue[u] |= bit(v)
            blue[v] |= bit(u)
        return cls(n_vertices, blue, validate=False)

    # -- colour queries -------------------------------------------------

    def is_blue(self, u: int, v: int) -> bool:
        return bool((self.blue[u] >> v) & 1)

    def is_red(self, u: int, v: int) -> bool:
        return u != v and not self.is_blue(u, v)

    def red_mask(self, v: int) -> int:
        return self.full_mask & ~self.blue[v] & ~bit(v)

    def blue_degree(self, v: int, within: Optional[int] = None) -> int:
        m = self.blue[v] if within is None else self.blue[v] & within
        return m.bit_count()

    def red_degree(self, v: int, within: Optional[int] = None) -> int:
        m = self.red_mask(v) if within is None else self.red_mask(v) & within
        return m.bit_count()

    def blue_edge_count(self) -> int:
        return sum(m.bit_count() for m in self.blue) // 2

    def is_red_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        m = mask_of(vs)
        return all(self.blue[v] & m == 0 for v in vs)

    # -- derived graphs -------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> tuple["ColouredGraph", list[int]]:
        """Induced colouring on the given vertices.

        Returns the subgraph together with the list mapping new indices to
        old ones (new index i corresponds to old vertex ``order[i]``).
        """
        order = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(order)}
        chosen = mask_of(order)
        blue = []
        for v in order:
            m = self.blue[v] & chosen
            nm = 0
            for w in iter_bits(m):
                nm |= bit(pos[w])
            blue.append(nm)
        return ColouredGraph(len(order), blue, validate=False), order

    # -- text round trip ------------------------------------------------

    def to_text(self, stream: TextIO):
        """Write the colouring: vertex count, then blue edges u v with u < v."""
        stream.write(f"{self.n_vertices}\n")
        for u in range(self.n_vertices):
            for v in iter_bits(self.blue[u] >> (u + 1)):
                stream.write(f"{u} {v + u + 1}\n")

    @classmethod
    def from_text(cls, stream: TextIO) -> "ColouredGraph":
        n = None
        blue: list[int] = []
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if n is None:
                if len(parts) != 1:
                    raise GraphParseError(
                        "first line must hold the vertex count", lineno
                    )
                try:
                    n = int(parts[0])
                except ValueError:
                    raise GraphParseError(f"bad vertex count {parts[0]!r}", lineno)
                if n < 0:
                    raise GraphParseError(f"negative vertex count {n}", lineno)
                blue = [0] * n
                continue
            if len(parts) != 2:
                raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphParseError(f"non-integer endpoint in {line!r}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(f"edge {u} {v} out of range", lineno)
            if u >= v:
                raise GraphParseError(f"edges must satisfy u < v, got {u} {v}", lineno)
            blue[u] |= bit(v)
            blue[v] |= bit(u)
        if n is None:
            raise GraphParseError("empty graph file")
        return cls(n, blue, validate=False)


# -- triangle freeness ---------------------------------------------------


def is_blue_triangle_free(G: ColouredGraph) -> tuple[bool, Optional[tuple]]:
    """Decide whether the blue graph contains a triangle.

    Vertices with identical blue masks can never be blue-adjacent (the
    edge would force a self-loop via symmetry), so it is enough to look
    for a triangle between distinct mask classes.  Colourings built from
    a few large pieces collapse to a handful of classes.
    """
    class_index: dict[int, int] = {}
    reps: list[int] = []
    vertex_class = [0] * G.n_vertices
    for v in range(G.n_vertices):
        m = G.blue[v]
        i = class_index.get(m)
        if i is None:
            i = len(reps)
            class_index[m] = i
            reps.append(v)
        vertex_class[v] = i

    k = len(reps)
    class_adj = [0] * k
    for i, r in enumerate(reps):
        m = 0
        for w in iter_bits(G.blue[r]):
            m |= bit(vertex_class[w])
        class_adj[i] = m

    for a in range(k):
        rest = class_adj[a] >> (a + 1)
        b = a + 1
        while rest:
            if rest & 1:
                common = class_adj[a] & class_adj[b]
                if common:
                    c = (common & -common).bit_length() - 1
                    return False, (reps[a], reps[b], reps[c])
            rest >>= 1
            b += 1
    return True, None


# -- red components ------------------------------------------------------


def red_components(G: ColouredGraph) -> list[int]:
    """Connected components of the red graph, as masks, by smallest member."""
    unvisited = G.full_mask
    comps = []
    while unvisited:
        start = unvisited & -unvisited
        comp = start
        frontier = start
        unvisited ^= start
        while frontier:
            grow = 0
            for v in iter_bits(frontier):
                grow |= G.red_mask(v) & unvisited
            unvisited &= ~grow
            comp |= grow
            frontier = grow
        comps.append(comp)
    return comps


# -- exact searches ------------------------------------------------------


def _red_clique_decision(G: ColouredGraph, pool: int, m: int) -> Optional[int]:
    """Find a red clique of size m inside the pool, or prove none exists.

    A red clique is an independent set of the blue graph restricted to the
    pool.  Branches on the vertex of largest blue degree; a greedy blue
    matching bounds how many vertices any independent set must lose.
    Returns the clique as a mask, or None.
    """
    if m <= 0:
        return 0

    def matching_bound(cand: int) -> int:
        # every blue edge inside cand costs the independent set a vertex
        free = cand
        lost = 0
        for v in iter_bits(cand):
            if not (free >> v) & 1:
                continue
            nb = G.blue[v] & free & ~bit(v)
            if nb:
                w = nb & -nb
                free &= ~(bit(v) | w)
                lost += 1
        return cand.bit_count() - lost

    # stack entries: (candidates, chosen_count, chosen_mask)
    stack = [(pool, 0, 0)]
    while stack:
        cand, size, chosen = stack.pop()
        # vertices with no blue edge inside cand are free to take
        while True:
            moved = False
            for v in iter_bits(cand):
                if G.blue[v] & cand == 0:
                    chosen |= bit(v)
                    cand &= ~bit(v)
                    size += 1
                    if size >= m:
                        return lowest_bits(chosen, m) if size > m else chosen
                    moved = True
            if not moved:
                break
        if size + cand.bit_count() < m or size + matching_bound(cand) < m:
            continue
        if not cand:
            continue
        # branch on the most blue-crowded candidate
        v_best, d_best = -1, -1
        for v in iter_bits(cand):
            d = (G.blue[v] & cand).bit_count()
            if d > d_best:
                v_best, d_best = v, d
        drop = cand & ~bit(v_best)
        stack.append((drop, size, chosen))  # explored second
        stack.append((drop & ~G.blue[v_best], size + 1, chosen | bit(v_best)))
    return None


def find_red_clique(G: ColouredGraph, pool: int, m: int) -> Optional[tuple[int, ...]]:
    """A red m-clique within the pool mask, as a sorted vertex tuple."""
    got = _red_clique_decision(G, pool, m)
    if got is None:
        return None
    return tuple(bits_list(got))


def max_disjoint_red_cliques(
    G: ColouredGraph, A: int, m: int
) -> list[tuple[int, ...]]:
    """A maximal family of pairwise-disjoint red m-cliques inside mask A.

    Maximal means the leftover vertices provably contain no further red
    m-clique; the last, failing search is the certificate.  Three cheap
    passes run first: if the residual is all red we can cut cliques off
    the low end directly; in a triangle-free blue graph every blue
    neighbourhood is a red clique, so large blue stars are harvested; and
    a greedy sweep in index order picks up cliques that sparse blue noise
    leaves lying around.  Only then does the exact search start.
    """
    if m <= 0:
        raise ValueError("clique size must be positive")
    cliques: list[tuple[int, ...]] = []
    residual = A
    while residual.bit_count() >= m:
        # all-red fast path
        if all(G.blue[v] & residual == 0 for v in iter_bits(residual)):
            while residual.bit_count() >= m:
                take = lowest_bits(residual, m)
                cliques.append(tuple(bits_list(take)))
                residual &= ~take
            break
        # blue-star harvest: the blue neighbourhood of any vertex is red
        best_v, best_d = -1, m - 1
        for v in range(G.n_vertices):
            d = (G.blue[v] & residual).bit_count()
            if d > best_d:
                best_v, best_d = v, d
        if best_v >= 0:
            take = lowest_bits(G.blue[best_v] & residual, m)
            took = bits_list(take)
            if G.is_red_clique(took):
                cliques.append(tuple(took))
                residual &= ~take
                continue
            # the star was not red after all: the blue graph has a triangle
            # through best_v; fall through to the sweeps below
        # greedy sweep: take vertices in index order, discarding the blue
        # neighbourhood of each pick
        cand, chosen, size = residual, 0, 0
        while cand and size < m:
            v = (cand & -cand).bit_length() - 1
            chosen |= bit(v)
            size += 1
            cand &= ~(bit(v) | G.blue[v])
        if size >= m:
            cliques.append(tuple(bits_list(chosen)))
            residual &= ~chosen
            continue
        got = find_red_clique(G, residual, m)
        if got is None:
            break
        cliques.append(got)
        residual &= ~mask_of(got)
    return cliques


def max_balanced_biclique(
    G: ColouredGraph, M1: Iterable[int], M2: Iterable[int]
) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Largest w with a red complete bipartite K_{w,w} between M1 and M2.

    Returns (w, X, Y) with X from M1 and Y from M2, sorted tuples, every
    cross pair red.  Exact: a prefix heuristic seeds the answer, then a
    (t,t)-core reduction plus depth-first search settles each larger
    target until one fails.
    """
    side1 = sorted(set(M1))
    side2 = sorted(set(M2))
    m1, m2 = mask_of(side1), mask_of(side2)
    if m1 & m2:
        raise ValueError("the two sides must be disjoint")
    if not side1 or not side2:
        return 0, (), ()
    # keep the branching side small
    swapped = len(side1) > len(side2)
    if swapped:
        side1, side2 = side2, side1
        m1, m2 = m2, m1

    adj = {u: G.red_mask(u) & m2 for u in side1}
    adj_back = {v: G.red_mask(v) & m1 for v in side2}

    if all(adj[u] == m2 for u in side1):
        w = min(len(side1), len(side2))
        X = tuple(side1[:w])
        Y = tuple(side2[:w])
        return (w, Y, X) if swapped else (w, X, Y)
    if all(adj[u] == 0 for u in side1):
        return 0, (), ()

    # seed: walk one side in increasing blue-cross order, keeping the
    # other side's vertices red to the entire prefix; every prefix is a
    # certified biclique, and a planted dense block floats to the front
    def prefix_seed(rows, row_adj, col_mask):
        order = sorted(
            rows, key=lambda u: (col_mask & ~row_adj[u]).bit_count()
        )
        common = col_mask
        best_w, best_rows, best_common = 0, [], 0
        for idx, u in enumerate(order):
            common &= row_adj[u]
            if not common:
                break
            w = min(idx + 1, common.bit_count())
            if w > best_w:
                best_w = w
                best_rows = order[: idx + 1]
                best_common = common
        return best_w, best_rows, best_common

    w1, rows1, common1 = prefix_seed(side1, adj, m2)
    w2, rows2, common2 = prefix_seed(side2, adj_back, m1)
    if w1 >= w2:
        best = w1
        best_X = sorted(rows1)[:w1]
        best_Y = bits_list(lowest_bits(common1, w1))
    else:
        best = w2
        best_X = bits_list(lowest_bits(common2, w2))
        best_Y = sorted(rows2)[:w2]

    def core(t: int) -> tuple[int, int]:
        px, py = m1, m2
        changed = True
        while changed:
            changed = False
            nx = 0
            for u in iter_bits(px):
                if (adj[u] & py).bit_count() >= t:
                    nx |= bit(u)
            if nx != px:
                px, changed = nx, True
            ny = 0
            for v in iter_bits(py):
                if (adj_back[v] & px).bit_count() >= t:
                    ny |= bit(v)
            if ny != py:
                py, changed = ny, True
        return px, py

    def decision(t: int):
        px, py = core(t)
        if px.bit_count() < t or py.bit_count() < t:
            return None
        order = bits_list(px)
        rank = {u: i for i, u in enumerate(order)}
        # chosen X vertices in ascending order; common is their joint red view
        stack = [(0, 0, py, 0)]
        while stack:
            idx, size, common, chosen = stack.pop()
            if size == t:
                return chosen, lowest_bits(common, t)
            for i in range(len(order) - 1, idx - 1, -1):
                u = order[i]
                if len(order) - i + size < t:
                    continue
                c2 = common & adj[u]
                if c2.bit_count() < t:
                    continue
                stack.append((i + 1, size + 1, c2, chosen | bit(u)))
        return None

    t = best + 1
    while t <= min(len(side1), len(side2)):
        got = decision(t)
        if got is None:
            break
        bx, by = got
        best = t
        best_X, best_Y = bits_list(bx), bits_list(by)
        t += 1
    X, Y = tuple(best_X), tuple(best_Y)
    return (best, Y, X) if swapped else (best, X, Y)


# -- constructions -------------------------------------------------------


def lower_bound_coloring(n: int) -> ColouredGraph:
    """Two red cliques of size 2**n - 1 with all cross pairs blue.

    The blue graph is complete bipartite, hence triangle free, and every
    red component has fewer than 2**n vertices, so no red n-cube fits.
    The two adjacency masks are shared across their cliques.
    """
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    half = (1 << n) - 1
    total = 2 * half
    mask1 = (1 << half) - 1
    mask2 = ((1 << total) - 1) ^ mask1
    blue = [mask2] * half + [mask1] * half
    return ColouredGraph(total, blue, validate=False)


def random_bipartite_blue(
    n_vertices: int, p: float, rng: random.Random
) -> ColouredGraph:
    """Blue edges only between the low and high half, each with probability p.

    Blue stays triangle free for any p because one side of a triangle
    would have to run inside a part.
    """
    if not 0 <= p <= 1:
        raise ValueError("probability out of range")
    half = n_vertices // 2
    part2 = range(half, n_vertices)
    blue = [0] * n_vertices
    if p == 1.0:
        m2 = ((1 << n_vertices) - 1) ^ ((1 << half) - 1)
        m1 = (1 << half) - 1
        for u in range(half):
            blue[u] = m2
        for v in part2:
            blue[v] = m1
        return ColouredGraph(n_vertices, blue, validate=False)
    for u in range(half):
        for v in part2:
            if rng.random() < p:
                blue[u] |= bit(v)
                blue[v] |= bit(u)
    return ColouredGraph(n_vertices, blue, validate=False)


def random_triangle_free_greedy(
    n_vertices: int,
    target_blue_edges: int,
    rng: random.Random,
    max_attempts: Optional[int] = None,
) -> ColouredGraph:
    """Insert random blue edges, skipping any that would close a triangle.

    Stops after reaching the target count or exhausting the attempt
    budget, whichever comes first.
    """
    if max_attempts is None:
        max_attempts = 60 * max(target_blue_edges, 1)
    blue = [0] * n_vertices
    added = 0
    for _ in range(max_attempts):
        if added >= target_blue_edges:
            break
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices)
        if u == v or (blue[u] >> v) & 1:
            continue
        if blue[u] & blue[v]:
            continue
        blue[u] |= bit(v)
        blue[v] |= bit(u)
        added += 1
    return ColouredGraph(n_vertices, blue, validate=False)


# -- embedding verification ----------------------------------------------


def verify_red_embedding(
    G: ColouredGraph,
    n: int,
    phi: dict[int, int],
    domain: Optional[Iterable[int]] = None,
) -> Verdict:
    """Check that phi maps cube vertices injectively onto red edges.

    ``domain`` restricts which cube vertices must be present; by default
    the whole cube is required.  Cube edges with both ends in the domain
    must land on red pairs of G.  A phi that misses part of the domain is
    a malformed input, not a failed verification, and raises ValueError.
    """
    if domain is None:
        dom = list(range(1 << n))
    else:
        dom = sorted(set(domain))
    missing = [z for z in dom if z not in phi]
    if missing:
        raise ValueError(
            f"phi is only partially defined: {len(missing)} domain vertices "
            f"missing, first {missing[0]}"
        )
    errors = []
    seen: dict[int, int] = {}
    for z in dom:
        v = phi[z]
        if not (0 <= v < G.n_vertices):
            errors.append(f"cube vertex {z} maps to out-of-range vertex {v}")
            continue
        if v in seen:
            errors.append(f"cube vertices {seen[v]} and {z} both map to {v}")
        seen[v] = z
    dom_set = set(dom)
    for z in dom:
        for i in range(n):
            w = z ^ (1 << i)
            if w < z or w not in dom_set:
                continue
            if not G.is_red(phi[z], phi[w]):
                errors.append(
                    f"cube edge {z}-{w} lands on non-red pair {phi[z]}-{phi[w]}"
                )
                if len(errors) >= 20:
                    return Verdict.failure(*errors)
    return Verdict(not errors, errors)
