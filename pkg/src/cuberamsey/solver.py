"""Finding a red n-cube in a large triangle-free-blue colouring.

The graph is first decomposed into a sparse part C and snakes.  When C
holds at least half the vertices the cube is embedded densely into C
with its few high-blue-degree vertices removed; otherwise the snakes
carry most of the graph, the cube is split into initial subcubes, and
each piece is walked into a snake while dodging the blue neighbourhoods
of already-placed neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log
from typing import Optional

from .bits import mask_of
from .colored_graph import (
    ColouredGraph,
    is_blue_triangle_free,
    verify_red_embedding,
)
from .decomposition import Decomposition, DecompositionParams, decompose
from .dense_embedding import ThresholdSchedule, dense_embed
from .errors import HypothesisError, StageFailure
from .hypercube import (
    InitialSubcube,
    SubcubeFamily,
    partition_complement,
    subcube_vertices,
)
from .rational import as_fraction
from .snake_embedding import snake_embed


@dataclass(frozen=True)
class SolverParams:
    """Everything the end-to-end search needs besides the graph.

    ``epsilon`` sets the order requirement (1+epsilon) * 2^(n+1);
    ``gamma`` and ``schedule`` drive the dense route;
    ``high_degree_cutoff`` is the blue degree at which a sparse-part
    vertex is discarded before dense embedding; ``codim_split`` is the
    codimension at which the cube is cut into pieces for the snakes.
    """

    epsilon: Fraction
    gamma: Fraction
    schedule: ThresholdSchedule
    decomp: DecompositionParams
    codim_split: int
    high_degree_cutoff: int
    snake_strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.codim_split < 1:
            raise ValueError("the cube must be split at codimension >= 1")
        if self.high_degree_cutoff < 1:
            raise ValueError("the degree cutoff must be positive")

    @classmethod
    def desk(cls, n: int) -> "SolverParams":
        """Constants tuned for dimensions reachable on one machine."""
        if n < 1:
            raise ValueError("dimension must be positive")
        if n >= 5:
            b = (2, 3, 4)
        else:
            b = {1: (1, 1), 2: (1, 1, 1), 3: (1, 1, 2), 4: (1, 2, 3)}[n]
        schedule = ThresholdSchedule(b)
        return cls(
            epsilon=Fraction(1, 4),
            gamma=Fraction(1, 4),
            schedule=schedule,
            decomp=DecompositionParams.desk(n),
            codim_split=2 if n >= 2 else 1,
            high_degree_cutoff=1 << (n - b[0]),
            snake_strict=False,
        )

    @classmethod
    def paper_asymptotic(cls, n: int) -> "SolverParams":
        """The iterated-logarithm regime; hypotheses only hold for huge n."""
        if n < 12:
            raise ValueError("the asymptotic schedule needs n >= 12")
        b = tuple(ceil(3 * log(n) / log(base)) for base in (4, 3, 2))
        decomp = DecompositionParams.paper_asymptotic(n)
        d = n - (decomp.m.bit_length() - 1)
        return cls(
            epsilon=Fraction(1, 4),
            gamma=Fraction(1, 8),
            schedule=ThresholdSchedule(b),
            decomp=decomp,
            codim_split=2 * d,
            high_degree_cutoff=1 << (n - b[0]),
            snake_strict=True,
        )


def choose_case(dec: Decomposition) -> int:
    """1 when the sparse part holds at least half the graph, else 2."""
    return 1 if 2 * len(dec.sparse) >= dec.n_vertices else 2


def assign_subcubes(
    n: int, codim: int, snake_sizes: list[int]
) -> list[list[InitialSubcube]]:
    """First-fit the codimension-``codim`` subcubes onto the snakes.

    Snake j may take floor(|S_j| / 2^(n - codim)) - 1 pieces; each piece,
    in increasing prefix order, goes to the first snake with room.  If
    the capacities cannot cover all 2^codim pieces the split fails with
    the deficit.
    """
    if not 1 <= codim <= n:
        raise ValueError(f"split codimension {codim} out of range for n={n}")
    cells = partition_complement(SubcubeFamily([], n), codim)
    piece = 1 << (n - codim)
    caps = [size // piece - 1 for size in snake_sizes]
    total = sum(caps)
    if total < len(cells):
        raise StageFailure(
            "subcube-assignment",
            f"snakes can host {total} of the {len(cells)} cube pieces",
            data={"capacities": caps, "pieces": len(cells),
                  "deficit": len(cells) - total},
        )
    out: list[list[InitialSubcube]] = [[] for _ in snake_sizes]
    j = 0
    for cell in cells:
        while len(out[j]) >= max(caps[j], 0):
            j += 1
        out[j].append(cell)
    return out


def _solve_dense(
    G: ColouredGraph, n: int, params: SolverParams, dec: Decomposition
) -> dict[int, int]:
    C_mask = dec.sparse_mask()
    keep = [
        v
        for v in dec.sparse
        if (G.blue[v] & C_mask).bit_count() < params.high_degree_cutoff
    ]
    H, order = G.induced(keep)
    phi_h = dense_embed(H, n, params.gamma, params.schedule)
    return {z: order[w] for z, w in phi_h.items()}


def _solve_snakes(
    G: ColouredGraph, n: int, params: SolverParams, dec: Decomposition
) -> dict[int, int]:
    sizes = [len(sn.vertex_set()) for sn in dec.snakes]
    assignment = assign_subcubes(n, params.codim_split, sizes)
    snake_masks = [mask_of(sn.vertex_set()) for sn in dec.snakes]
    phi: dict[int, int] = {}
    # later snakes first, so each piece only ever dodges neighbours that
    # are already pinned down
    for j in reversed(range(dec.r)):
        if not assignment[j]:
            continue
        Q = [v for cell in assignment[j] for v in subcube_vertices(cell, n)]
        forb: dict[int, int] = {}
        for x in Q:
            D = 0
            for p in range(n):
                img = phi.get(x ^ (1 << p))
                if img is not None:
                    D |= G.blue[img] & snake_masks[j]
            if D:
                forb[x] = D
        psi = snake_embed(
            G,
            dec.snakes[j],
            Q,
            n,
            forbidden=forb,
            strict=params.snake_strict,
        )
        phi.update(psi)
    return phi


def solve(
    G: ColouredGraph,
    n: int,
    params: SolverParams,
    max_workers: Optional[int] = None,
) -> dict[int, int]:
    """Embed a red copy of Q_n, or fail with a stage diagnosis.

    The graph must be blue triangle free with at least
    ceil((1 + epsilon) * 2^(n+1)) vertices.  The returned map sends every
    cube vertex to a graph vertex and has been verified: injective, every
    cube edge red.
    """
    need = ceil((1 + params.epsilon) * (1 << (n + 1)))
    if G.n_vertices < need:
        raise HypothesisError(
            "order",
            f"graph has {G.n_vertices} vertices, needs "
            f"(1 + {params.epsilon}) * 2^{n + 1} = {need}",
        )
    ok, tri = is_blue_triangle_free(G)
    if not ok:
        raise HypothesisError(
            "triangle-free", f"blue triangle {tri}", witness=tri
        )

    dec = decompose(G, params.decomp, max_workers)
    if choose_case(dec) == 1:
        phi = _solve_dense(G, n, params, dec)
    else:
        phi = _solve_snakes(G, n, params, dec)

    verdict = verify_red_embedding(G, n, phi)
    if not verdict:
        raise StageFailure(
            "final-verification",
            "the assembled embedding failed verification: "
            + "; ".join(verdict.errors[:5]),
            data={"errors": verdict.errors},
        )
    return phi
