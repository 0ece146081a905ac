"""Embedding cube pieces into chains of red cliques.

An (m, s)-snake is a family of pairwise-disjoint red m-cliques whose
link graph is connected, where two cliques are linked when a red
complete bipartite K_{s,s} runs between them.  A subset of the cube is
embedded by walking a spanning tree of the link graph: crossing a link
spends a small batch of consecutive cube vertices on the two witness
sides, and the stretches in between are poured into whichever clique the
walk currently occupies.  Bandwidth ordering keeps every cube edge
within one batch length, so each edge lands inside a clique or across a
witnessed pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, comb
from typing import Iterable, Optional

from .bits import bit, lowest_bits, mask_of
from .colored_graph import ColouredGraph, Verdict
from .errors import HypothesisError, StageFailure
from .hypercube import bandwidth_bound, bandwidth_order


@dataclass(frozen=True)
class LinkWitness:
    """A red K_{s,s} between cliques i and j, with i < j.

    ``X`` lies inside clique i and ``Y`` inside clique j; every cross
    pair must be red and both sides have exactly s vertices.
    """

    i: int
    j: int
    X: tuple[int, ...]
    Y: tuple[int, ...]

    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)

    def side_in(self, c: int) -> tuple[int, ...]:
        if c == self.i:
            return self.X
        if c == self.j:
            return self.Y
        raise ValueError(f"clique {c} is not an endpoint of link {self.pair()}")


@dataclass(frozen=True)
class Snake:
    """Disjoint red m-cliques with witnessed links forming a connected chain."""

    cliques: tuple[tuple[int, ...], ...]
    witnesses: tuple[LinkWitness, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(
            self, "cliques", tuple(tuple(c) for c in self.cliques)
        )
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    @property
    def k(self) -> int:
        return len(self.cliques)

    @property
    def m(self) -> int:
        return len(self.cliques[0]) if self.cliques else 0

    def vertex_set(self) -> set[int]:
        out: set[int] = set()
        for c in self.cliques:
            out.update(c)
        return out

    def link_pairs(self) -> set[tuple[int, int]]:
        return {w.pair() for w in self.witnesses}

    def witness_for(self, i: int, j: int) -> LinkWitness:
        key = (min(i, j), max(i, j))
        for w in self.witnesses:
            if w.pair() == key:
                return w
        raise KeyError(f"no witness for clique pair {key}")


def _link_components(k: int, pairs: Iterable[tuple[int, int]]) -> list[set[int]]:
    nbr: dict[int, set[int]] = {i: set() for i in range(k)}
    for i, j in pairs:
        nbr[i].add(j)
        nbr[j].add(i)
    seen: set[int] = set()
    comps = []
    for start in range(k):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in nbr[v]:
                if w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def validate_snake(G: ColouredGraph, snake: Snake) -> Verdict:
    """Check the snake's defining properties inside G.

    Cliques must be same-sized disjoint red cliques, every witness a red
    K_{s,s} between its two cliques, and the link graph connected.
    """
    errors = []
    if not snake.cliques:
        return Verdict.failure("a snake needs at least one clique")
    if snake.s < 1:
        errors.append(f"link strength s must be positive, got {snake.s}")
    m = len(snake.cliques[0])
    masks = []
    for idx, c in enumerate(snake.cliques):
        if len(c) != m:
            errors.append(f"clique {idx} has {len(c)} vertices, expected {m}")
        if len(set(c)) != len(c):
            errors.append(f"clique {idx} repeats a vertex")
        if not all(0 <= v < G.n_vertices for v in c):
            errors.append(f"clique {idx} mentions out-of-range vertices")
        elif not G.is_red_clique(c):
            errors.append(f"clique {idx} is not a red clique")
        masks.append(mask_of(c))
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if masks[i] & masks[j]:
                errors.append(f"cliques {i} and {j} share vertices")
    if errors:
        return Verdict.failure(*errors)

    for w in snake.witnesses:
        if not (0 <= w.i < w.j < snake.k):
            errors.append(f"witness names bad clique pair ({w.i}, {w.j})")
            continue
        if len(w.X) != snake.s or len(w.Y) != snake.s:
            errors.append(
                f"witness ({w.i}, {w.j}) has sides of size "
                f"{len(w.X)}/{len(w.Y)}, expected {snake.s}"
            )
        mx, my = mask_of(w.X), mask_of(w.Y)
        if mx & ~masks[w.i] or len(set(w.X)) != len(w.X):
            errors.append(f"witness ({w.i}, {w.j}) X side not inside clique {w.i}")
        if my & ~masks[w.j] or len(set(w.Y)) != len(w.Y):
            errors.append(f"witness ({w.i}, {w.j}) Y side not inside clique {w.j}")
        if any(G.blue[x] & my for x in w.X):
            errors.append(
                f"witness ({w.i}, {w.j}) has a blue cross pair"
            )
    if len({w.pair() for w in snake.witnesses}) != len(snake.witnesses):
        errors.append("duplicate witness for a clique pair")
    comps = _link_components(snake.k, [w.pair() for w in snake.witnesses])
    if len(comps) != 1:
        errors.append(f"link graph is disconnected: {len(comps)} components")
    return Verdict(not errors, errors)


@dataclass(frozen=True)
class ClosedWalk:
    """A closed spanning-tree walk over clique indices.

    ``positions`` visits every tree edge exactly twice, starting and
    ending at the root; ``last_visits`` is the set of positions after
    which the clique at that position never occurs again.
    """

    positions: tuple[int, ...]
    last_visits: frozenset[int]


def closed_tree_walk(snake: Snake) -> ClosedWalk:
    """Double every edge of a breadth-first spanning tree of the links.

    The tree is rooted at clique 0 and children are visited in ascending
    order, so the walk has 2(k-1)+1 positions and is deterministic.
    """
    k = snake.k
    nbr: dict[int, set[int]] = {i: set() for i in range(k)}
    for i, j in snake.link_pairs():
        nbr[i].add(j)
        nbr[j].add(i)
    children: dict[int, list[int]] = {i: [] for i in range(k)}
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(nbr[v]):
                if w not in seen:
                    seen.add(w)
                    children[v].append(w)
                    nxt.append(w)
        frontier = nxt
    if len(seen) != k:
        raise ValueError("the link graph is disconnected")

    positions: list[int] = []

    def tour(v: int):
        positions.append(v)
        for c in children[v]:
            tour(c)
            positions.append(v)

    tour(0)
    remaining: set[int] = set()
    last = set()
    for p in range(len(positions) - 1, -1, -1):
        if positions[p] not in remaining:
            last.add(p)
            remaining.add(positions[p])
    return ClosedWalk(tuple(positions), frozenset(last))


def snake_embed(
    G: ColouredGraph,
    snake: Snake,
    cube_vertices: Iterable[int],
    n: int,
    forbidden: Optional[dict[int, int]] = None,
    strict: bool = False,
) -> dict[int, int]:
    """Embed the given cube vertices into the snake along a tree walk.

    ``forbidden`` maps a cube vertex to a mask of graph vertices it must
    avoid.  In strict mode the clique and link sizes must dominate the
    walk's worst-case consumption, and any batch cut short is an error;
    relaxed mode attempts the walk regardless and lets the final
    verification decide.  Either way the returned embedding has been
    checked: cube edges between embedded vertices are red, images are
    distinct, stay inside the snake, and avoid their forbidden masks.

    The walk spends, at each position, an arrival batch on the witness
    side of the link just crossed, then a free stretch inside the clique
    (keeping clear of witness sides still owed batches), then a departure
    batch on the witness side of the link about to be crossed.  Batch
    length t is s // 4k, raised in relaxed mode to the bandwidth bound so
    that a full batch always separates the zones of distinct cliques.
    """
    check = validate_snake(G, snake)
    if not check:
        raise ValueError("invalid snake: " + "; ".join(check.errors))
    queue = bandwidth_order(cube_vertices, n)
    if len(set(queue)) != len(queue):
        raise ValueError("cube vertices to embed must be distinct")
    if any(not 0 <= z < (1 << n) for z in queue):
        raise ValueError("cube vertex out of range")
    forb = forbidden or {}
    delta = max((d.bit_count() for d in forb.values()), default=0)

    k, m, s = snake.k, snake.m, snake.s
    t = s // (4 * k)
    if not strict:
        t = max(t, bandwidth_bound(n))
    if t <= 0:
        raise StageFailure(
            "snake-batch-length",
            f"batch length s // 4k = {t} leaves no room to cross links",
            data={"s": s, "k": k},
        )
    if strict:
        need_m = ceil(len(queue) / k) + s + delta
        need_s = 2 * delta + 8 * k * comb(n, n // 2)
        if m < need_m or s < need_s:
            raise HypothesisError(
                "snake-conditions",
                f"strict mode needs m >= ceil(|Q|/k) + s + delta = {need_m} "
                f"and s >= 2*delta + 8k*C(n, n//2) = {need_s}, "
                f"got m = {m}, s = {s}",
            )

    walk = closed_tree_walk(snake)
    positions = walk.positions
    clique_masks = [mask_of(c) for c in snake.cliques]

    # tree edges are exactly the pairs stepped along by the walk; each of
    # their witness sides is owed two batches, one per traversal direction
    tree_pairs = {
        (min(a, b), max(a, b))
        for a, b in zip(positions, positions[1:])
    }
    side_mask: dict[tuple[int, int, int], int] = {}
    owed: dict[tuple[int, int, int], int] = {}
    sides_in: dict[int, list[tuple[int, int, int]]] = {c: [] for c in range(k)}
    for pair in tree_pairs:
        w = snake.witness_for(*pair)
        for c in pair:
            key = (pair[0], pair[1], c)
            side_mask[key] = mask_of(w.side_in(c))
            owed[key] = 2
            sides_in[c].append(key)

    used = 0
    phi: dict[int, int] = {}
    qi = 0

    def place(z: int, pool: int) -> bool:
        nonlocal used, qi
        avail = pool & ~used & ~forb.get(z, 0)
        if not avail:
            return False
        v = (avail & -avail).bit_length() - 1
        phi[z] = v
        used |= bit(v)
        qi += 1
        return True

    def run_batch(key: tuple[int, int, int], p: int, kind: str):
        nonlocal qi
        placed = 0
        while qi < len(queue) and placed < t:
            if not place(queue[qi], side_mask[key]):
                break
            placed += 1
        owed[key] -= 1
        if strict and placed < t and qi < len(queue):
            raise StageFailure(
                "snake-batch",
                f"{kind} batch at walk position {p} placed only "
                f"{placed} of {t} vertices on side {key}",
                data={"position": p, "side": key, "placed": placed},
            )

    for p, c in enumerate(positions):
        if qi >= len(queue):
            break
        if p > 0:
            prev = positions[p - 1]
            run_batch((min(prev, c), max(prev, c), c), p, "arrival")
        # free stretch: keep every side that is still owed batches covered
        # for (t + delta) vertices per remaining batch
        while qi < len(queue):
            reserved = 0
            for key in sides_in[c]:
                if owed[key] > 0:
                    free_side = side_mask[key] & ~used
                    keep = min((t + delta) * owed[key], free_side.bit_count())
                    reserved |= lowest_bits(free_side, keep)
            if not place(queue[qi], clique_masks[c] & ~reserved):
                break
        if qi >= len(queue):
            break
        if p + 1 < len(positions):
            nxt = positions[p + 1]
            run_batch((min(c, nxt), max(c, nxt), c), p, "departure")

    if qi < len(queue):
        raise StageFailure(
            "snake-walk",
            f"walk exhausted with {len(queue) - qi} cube vertices left; "
            f"next is {queue[qi]}",
            data={"remaining": len(queue) - qi, "next": queue[qi]},
        )

    _verify_snake_embedding(G, snake, queue, n, forb, phi)
    return phi


def _verify_snake_embedding(
    G: ColouredGraph,
    snake: Snake,
    queue: list[int],
    n: int,
    forb: dict[int, int],
    phi: dict[int, int],
):
    """Re-check the finished embedding; failures are reported, not returned."""
    errors = []
    snake_vertices = mask_of(snake.vertex_set())
    seen: dict[int, int] = {}
    for z in queue:
        v = phi[z]
        if v in seen:
            errors.append(f"cube vertices {seen[v]} and {z} both map to {v}")
        seen[v] = z
        if not (snake_vertices >> v) & 1:
            errors.append(f"cube vertex {z} maps outside the snake")
        if (forb.get(z, 0) >> v) & 1:
            errors.append(f"cube vertex {z} maps into its forbidden set")
    members = set(queue)
    for z in queue:
        for i in range(n):
            w = z ^ (1 << i)
            if w < z or w not in members:
                continue
            if not G.is_red(phi[z], phi[w]):
                errors.append(
                    f"cube edge {z}-{w} lands on blue pair {phi[z]}-{phi[w]}"
                )
    if errors:
        raise StageFailure(
            "snake-verification",
            f"{len(errors)} defects in the walked embedding; first: {errors[0]}",
            data={"errors": errors[:20]},
        )
