"""Partitioning a triangle-free-blue colouring into a sparse part and snakes.

Round by round, a maximal family of disjoint red m-cliques is pulled out
of the active set, pairwise link weights (largest balanced red
bicliques) are measured, and a threshold s is chosen inside a weight
gap, so that links are unambiguous: every pair is either strongly linked
(weight at least s) or clearly not (weight below s divided by lambda).
The connected component of the first clique becomes a snake and leaves
the active set, together with the vertices blue-attached to it.  What
survives every round is sparse in blue, and that is the point of the
whole exercise.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb, floor, log2
from typing import Optional

from .bits import bit, bits_list, iter_bits, mask_of
from .colored_graph import (
    ColouredGraph,
    Verdict,
    max_balanced_biclique,
    max_disjoint_red_cliques,
)
from .errors import StageFailure
from .rational import as_fraction
from .snake_embedding import LinkWitness, Snake, validate_snake


@dataclass(frozen=True)
class DecompositionParams:
    """Clique size, threshold window, and the two slack ratios.

    ``lam`` widens the gap interval below each candidate threshold and
    ``mu`` caps how blue the surviving active set may look towards a
    freshly removed snake.
    """

    m: int
    s_lo: int
    s_hi: int
    lam: Fraction
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "mu", as_fraction(self.mu))
        if self.m < 1:
            raise ValueError(f"clique size must be positive, got {self.m}")
        if not 1 <= self.s_lo <= self.s_hi:
            raise ValueError(
                f"need 1 <= s_lo <= s_hi, got {self.s_lo}, {self.s_hi}"
            )
        if self.lam <= 1:
            raise ValueError(f"lambda must exceed 1, got {self.lam}")
        if self.mu < 1:
            raise ValueError(f"mu must be at least 1, got {self.mu}")

    @classmethod
    def desk(cls, n: int) -> "DecompositionParams":
        """Hand-tuned constants that behave at small n.

        The clique size 2^(n+1) makes a graph on 2^(n+2) vertices resolve
        into at most two cliques, which keeps the exact searches fast on
        the instance families this package ships.
        """
        if n < 1:
            raise ValueError("dimension must be positive")
        return cls(
            m=1 << (n + 1),
            s_lo=2 * comb(n, n // 2),
            s_hi=1 << (n + 1),
            lam=Fraction(2),
            mu=Fraction(2),
        )

    @classmethod
    def paper_asymptotic(cls, n: int) -> "DecompositionParams":
        """The iterated-logarithm formulas; meaningful only for large n."""
        if n < 5:
            raise ValueError("the asymptotic formulas need n >= 5")
        d = floor(log2(log2(log2(n)))) + 1
        return cls(
            m=1 << (n - d),
            s_lo=ceil((1 << n) / n ** (1 / 3)),
            s_hi=floor((1 << n) / n ** (1 / 4)),
            lam=Fraction(1 << (3 * d + 2)),
            mu=Fraction(1 << (2 * d)),
        )


def select_gap_threshold(weights, params: DecompositionParams) -> int:
    """The smallest geometric grid point whose gap interval is weight-free.

    Grid points are ceil(s_lo * lam^i) for i = 0, 1, ...; a point x
    qualifies when no weight lies in [x/lam, x).  Comparisons are exact:
    the interval test is lam*w >= x and w < x.
    """
    ws = sorted(set(int(w) for w in weights))
    lam = params.lam
    grid = []
    i = 0
    while True:
        x = ceil(params.s_lo * lam**i)
        if x > params.s_hi:
            break
        if not grid or x > grid[-1]:
            grid.append(x)
        i += 1
    for x in grid:
        if not any(w < x and lam * w >= x for w in ws):
            return x
    raise StageFailure(
        "gap-selection",
        f"every grid point in [{params.s_lo}, {params.s_hi}] has a weight "
        f"in its gap interval",
        data={"weights": ws, "grid": grid},
    )


@dataclass(frozen=True)
class RoundRecord:
    """Audit entry for one removal round."""

    index: int
    active_before: int
    cliques: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[int, int, int], ...]
    s: int
    snake_indices: tuple[int, ...]
    sparse_added: tuple[int, ...]
    active_after: int


@dataclass(frozen=True)
class Decomposition:
    """The finished partition: sparse set C plus snakes S_1..S_r."""

    n_vertices: int
    params: DecompositionParams
    sparse: tuple[int, ...]
    snakes: tuple[Snake, ...]
    s_values: tuple[int, ...]
    rounds: tuple[RoundRecord, ...]

    @property
    def r(self) -> int:
        return len(self.snakes)

    def sparse_mask(self) -> int:
        return mask_of(self.sparse)

    def to_json_dict(self) -> dict:
        return {
            "n_vertices": self.n_vertices,
            "params": {
                "m": self.params.m,
                "s_lo": self.params.s_lo,
                "s_hi": self.params.s_hi,
                "lam": [self.params.lam.numerator, self.params.lam.denominator],
                "mu": [self.params.mu.numerator, self.params.mu.denominator],
            },
            "sparse": list(self.sparse),
            "snakes": [
                {
                    "s": sn.s,
                    "cliques": [list(c) for c in sn.cliques],
                    "witnesses": [
                        {"i": w.i, "j": w.j, "X": list(w.X), "Y": list(w.Y)}
                        for w in sn.witnesses
                    ],
                }
                for sn in self.snakes
            ],
            "s_values": list(self.s_values),
            "rounds": [
                {
                    "index": r.index,
                    "active_before": r.active_before,
                    "cliques": [list(c) for c in r.cliques],
                    "weights": [list(w) for w in r.weights],
                    "s": r.s,
                    "snake_indices": list(r.snake_indices),
                    "sparse_added": list(r.sparse_added),
                    "active_after": r.active_after,
                }
                for r in self.rounds
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "Decomposition":
        p = data["params"]
        params = DecompositionParams(
            m=p["m"],
            s_lo=p["s_lo"],
            s_hi=p["s_hi"],
            lam=Fraction(p["lam"][0], p["lam"][1]),
            mu=Fraction(p["mu"][0], p["mu"][1]),
        )
        snakes = tuple(
            Snake(
                cliques=tuple(tuple(c) for c in sn["cliques"]),
                witnesses=tuple(
                    LinkWitness(w["i"], w["j"], tuple(w["X"]), tuple(w["Y"]))
                    for w in sn["witnesses"]
                ),
                s=sn["s"],
            )
            for sn in data["snakes"]
        )
        rounds = tuple(
            RoundRecord(
                index=r["index"],
                active_before=r["active_before"],
                cliques=tuple(tuple(c) for c in r["cliques"]),
                weights=tuple(tuple(w) for w in r["weights"]),
                s=r["s"],
                snake_indices=tuple(r["snake_indices"]),
                sparse_added=tuple(r["sparse_added"]),
                active_after=r["active_after"],
            )
            for r in data["rounds"]
        )
        return cls(
            n_vertices=data["n_vertices"],
            params=params,
            sparse=tuple(data["sparse"]),
            snakes=snakes,
            s_values=tuple(data["s_values"]),
            rounds=rounds,
        )

    @classmethod
    def from_json(cls, text: str) -> "Decomposition":
        return cls.from_json_dict(json.loads(text))


def _pair_weights(
    G: ColouredGraph,
    cliques: list[tuple[int, ...]],
    memo: dict,
    max_workers: Optional[int],
) -> dict[tuple[int, int], tuple[int, tuple[int, ...], tuple[int, ...]]]:
    """Balanced biclique weights for every clique pair, memoised exactly.

    The cache key is the pair of clique tuples themselves, so an entry
    can never go stale: the weight depends on nothing else.
    """
    pairs = [
        (i, j)
        for i in range(len(cliques))
        for j in range(i + 1, len(cliques))
    ]
    missing = [
        (i, j) for i, j in pairs if (cliques[i], cliques[j]) not in memo
    ]

    def compute(p):
        i, j = p
        return max_balanced_biclique(G, cliques[i], cliques[j])

    if max_workers and max_workers > 1 and len(missing) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(compute, missing))
    else:
        results = [compute(p) for p in missing]
    for (i, j), res in zip(missing, results):
        memo[(cliques[i], cliques[j])] = res
    return {(i, j): memo[(cliques[i], cliques[j])] for i, j in pairs}


def _component_of(k: int, edges, start: int) -> list[int]:
    nbr: dict[int, set[int]] = {i: set() for i in range(k)}
    for i, j in edges:
        nbr[i].add(j)
        nbr[j].add(i)
    comp = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in nbr[v]:
            if w not in comp:
                comp.add(w)
                frontier.append(w)
    return sorted(comp)


def decompose(
    G: ColouredGraph,
    params: DecompositionParams,
    max_workers: Optional[int] = None,
) -> Decomposition:
    """Strip snakes off the graph until no red m-clique is left.

    Each round removes the snake through the first extracted clique and
    the vertices blue-attached to any of its cliques beyond s/lambda.
    Two conditions are enforced as the rounds go: surviving active
    vertices have blue degree at most s/mu into the removed snake, and
    each removed attached vertex keeps blue degree at most 2m into what
    survives.  Violations are structured failures, not silent repairs.
    """
    A = G.full_mask
    sparse_acc = 0
    snakes: list[Snake] = []
    s_values: list[int] = []
    rounds: list[RoundRecord] = []
    memo: dict = {}

    for round_index in range(1, G.n_vertices + 2):
        cliques = max_disjoint_red_cliques(G, A, params.m)
        if not cliques:
            break
        weights = _pair_weights(G, cliques, memo, max_workers)
        s = select_gap_threshold([w for w, _, _ in weights.values()], params)
        linked = [(i, j) for (i, j), (w, _, _) in weights.items() if w >= s]
        comp = _component_of(len(cliques), linked, 0)
        pos = {ci: idx for idx, ci in enumerate(comp)}

        witnesses = []
        for i, j in linked:
            if i in pos and j in pos:
                w, X, Y = weights[(i, j)]
                ni, nj = pos[i], pos[j]
                if ni > nj:
                    ni, nj, X, Y = nj, ni, Y, X
                witnesses.append(LinkWitness(ni, nj, X[:s], Y[:s]))
        snake = Snake(
            cliques=tuple(cliques[ci] for ci in comp),
            witnesses=tuple(witnesses),
            s=s,
        )
        check = validate_snake(G, snake)
        if not check:
            raise StageFailure(
                "snake-validity",
                "assembled snake failed validation: " + "; ".join(check.errors),
                data={"round": round_index, "errors": check.errors},
            )

        S_mask = mask_of(snake.vertex_set())
        clique_masks = [mask_of(c) for c in cliques]
        sparse_new = 0
        for v in iter_bits(A & ~S_mask):
            for ci in comp:
                if params.lam * (G.blue[v] & clique_masks[ci]).bit_count() >= s:
                    sparse_new |= bit(v)
                    break
        A_next = A & ~S_mask & ~sparse_new

        for v in iter_bits(A_next):
            d = (G.blue[v] & S_mask).bit_count()
            if params.mu * d > s:
                raise StageFailure(
                    "residual-attachment",
                    f"vertex {v} keeps blue degree {d} into the removed "
                    f"snake, above s/mu = {Fraction(s) / params.mu}",
                    data={"round": round_index, "vertex": v, "degree": d},
                )
        within = A_next | sparse_new
        for v in iter_bits(sparse_new):
            d = (G.blue[v] & within).bit_count()
            if d > 2 * params.m:
                raise StageFailure(
                    "sparse-attachment",
                    f"attached vertex {v} keeps blue degree {d} into the "
                    f"surviving vertices, above 2m = {2 * params.m}",
                    data={"round": round_index, "vertex": v, "degree": d},
                )
        # a vertex attached to the snake cannot also be attached to an
        # outside clique: the two blue stars would witness a red biclique
        # heavy enough to fall inside the chosen gap
        out = [ci for ci in range(len(cliques)) if ci not in pos]
        for v in iter_bits(sparse_new):
            for ci in out:
                d = (G.blue[v] & clique_masks[ci]).bit_count()
                assert params.lam * d < s, (
                    f"vertex {v} attached to out-of-snake clique {ci}"
                )

        rounds.append(
            RoundRecord(
                index=round_index,
                active_before=A.bit_count(),
                cliques=tuple(cliques),
                weights=tuple(
                    (i, j, w) for (i, j), (w, _, _) in sorted(weights.items())
                ),
                s=s,
                snake_indices=tuple(comp),
                sparse_added=tuple(bits_list(sparse_new)),
                active_after=A_next.bit_count(),
            )
        )
        snakes.append(snake)
        s_values.append(s)
        sparse_acc |= sparse_new
        A = A_next
    else:
        raise AssertionError("decomposition failed to terminate")

    # maximality of the last clique search: whatever is left cannot hold
    # a red m-clique, so blue neighbourhoods inside it stay below m
    for v in range(G.n_vertices):
        assert (G.blue[v] & A).bit_count() < params.m

    sparse_acc |= A
    return Decomposition(
        n_vertices=G.n_vertices,
        params=params,
        sparse=tuple(bits_list(sparse_acc)),
        snakes=tuple(snakes),
        s_values=tuple(s_values),
        rounds=tuple(rounds),
    )


def verify_decomposition(G: ColouredGraph, dec: Decomposition) -> Verdict:
    """Re-check a decomposition from scratch against its graph.

    The sparse set and the snake vertex sets must partition the graph,
    blue inside the sparse set must stay under 2m edges per vertex on
    average, each snake must validate, and vertices of later snakes must
    be only weakly blue-attached to every earlier snake.
    """
    errors = []
    masks = [mask_of(sn.vertex_set()) for sn in dec.snakes]
    cm = dec.sparse_mask()
    total = cm
    for i, m in enumerate(masks):
        if total & m:
            errors.append(f"snake {i} overlaps earlier parts")
        total |= m
    if total != G.full_mask:
        errors.append("the parts do not cover the vertex set")
    if len(dec.s_values) != len(dec.snakes):
        errors.append("one s value per snake is required")

    blue_inside = 0
    for v in iter_bits(cm):
        blue_inside += (G.blue[v] & cm).bit_count()
    blue_inside //= 2
    if blue_inside > 2 * dec.params.m * len(dec.sparse):
        errors.append(
            f"sparse set has {blue_inside} blue edges, above "
            f"2m|C| = {2 * dec.params.m * len(dec.sparse)}"
        )

    for i, sn in enumerate(dec.snakes):
        check = validate_snake(G, sn)
        if not check:
            errors.append(f"snake {i} invalid: " + "; ".join(check.errors))
        if sn.s != dec.s_values[i]:
            errors.append(f"snake {i} carries s={sn.s}, recorded {dec.s_values[i]}")

    for i in range(len(dec.snakes)):
        si = dec.s_values[i]
        for j in range(i + 1, len(dec.snakes)):
            for v in sorted(dec.snakes[j].vertex_set()):
                d = (G.blue[v] & masks[i]).bit_count()
                if dec.params.mu * d > si:
                    errors.append(
                        f"vertex {v} of snake {j} has blue degree {d} "
                        f"into snake {i}, above s_i/mu"
                    )
    return Verdict(not errors, errors)
