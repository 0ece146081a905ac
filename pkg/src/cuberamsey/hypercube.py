"""The hypercube, its initial subcubes, and a bandwidth-friendly vertex order.

A vertex of the n-dimensional cube is an integer v with 0 <= v < 2**n;
coordinate i (1-based) of the word is bit i-1 of v.  Two vertices are
adjacent when they differ in exactly one bit.

An *initial subcube* fixes a prefix of coordinates: the subcube with
prefix (x_1, ..., x_d) consists of every vertex whose coordinates
1..d equal the prefix.  Prefixes are ordered lexicographically with
x_1 most significant, so the subcube of prefix (0, 1) precedes the
subcube of prefix (1, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator


@dataclass(frozen=True)
class InitialSubcube:
    """A subcube of Q_n obtained by fixing the first ``codim`` coordinates.

    ``prefix`` is the tuple (x_1, ..., x_d) of fixed coordinate values,
    each 0 or 1.  The empty prefix is the whole cube.
    """

    prefix: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.prefix):
            raise ValueError(f"prefix must be 0/1 valued, got {self.prefix}")

    @property
    def codim(self) -> int:
        return len(self.prefix)

    def size(self, n: int) -> int:
        """Number of vertices of this subcube inside Q_n."""
        if self.codim > n:
            raise ValueError(f"codimension {self.codim} exceeds dimension {n}")
        return 1 << (n - self.codim)

    def base_word(self) -> int:
        """The integer whose bits i-1 hold x_i and whose other bits are 0."""
        w = 0
        for i, b in enumerate(self.prefix):
            w |= b << i
        return w

    def contains(self, v: int) -> bool:
        for i, b in enumerate(self.prefix):
            if (v >> i) & 1 != b:
                return False
        return True

    def sort_key(self) -> tuple:
        # Lexicographic on the prefix itself; shorter prefixes first among
        # equal starts, matching the usual numeral ordering 0 < 00 < 01 < 1.
        return self.prefix


def subcube_distance(x: InitialSubcube, z: InitialSubcube) -> int:
    """Number of positions where the two prefixes disagree, up to the
    shorter length.

    Distance 0 means one subcube contains the other; distance 1 means they
    are disjoint but joined by cube edges; distance >= 2 means no edge of
    the cube runs between them.
    """
    d = min(x.codim, z.codim)
    return sum(1 for i in range(d) if x.prefix[i] != z.prefix[i])


def subcube_vertices(x: InitialSubcube, n: int) -> list[int]:
    """All vertices of Q_n lying in the subcube, in increasing word order."""
    if x.codim > n:
        raise ValueError(f"codimension {x.codim} exceeds dimension {n}")
    base = x.base_word()
    free = n - x.codim
    return [base | (t << x.codim) for t in range(1 << free)]


def cube_neighbours(v: int, n: int) -> list[int]:
    """Neighbours of v in Q_n, in increasing word order.

    Flipping bit i-1 gives the neighbour across coordinate i; smaller
    results come from flipping set bits.
    """
    out = [v ^ (1 << i) for i in range(n)]
    out.sort()
    return out


class SubcubeFamily:
    """A set of pairwise-disjoint initial subcubes of one cube Q_n."""

    def __init__(self, members: Iterable[InitialSubcube], n: int):
        members = list(members)
        for x in members:
            if x.codim > n:
                raise ValueError(f"codimension {x.codim} exceeds dimension {n}")
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if subcube_distance(members[i], members[j]) == 0:
                    raise ValueError(
                        f"subcubes {members[i].prefix} and {members[j].prefix} overlap"
                    )
        self.members = members
        self.n = n

    def covered_size(self) -> int:
        return sum(x.size(self.n) for x in self.members)

    def covers_cube(self) -> bool:
        return self.covered_size() == 1 << self.n

    def __iter__(self) -> Iterator[InitialSubcube]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def partition_complement(family: SubcubeFamily, b: int) -> list[InitialSubcube]:
    """Partition the complement of the family into subcubes of codimension
    exactly b, listed in increasing prefix order.

    Splits the cube recursively: a prefix disjoint from every member is
    refined down to codimension b and emitted; a prefix containing a member
    region splits on its next coordinate, 0-branch before 1-branch.  Members
    of codimension > b must not intersect the complement pieces, which holds
    whenever every member has codimension <= b; we require that.
    """
    n = family.n
    if not 0 <= b <= n:
        raise ValueError(f"target codimension {b} out of range for n={n}")
    for x in family.members:
        if x.codim > b:
            raise ValueError(
                f"member of codimension {x.codim} cannot be refined to {b}"
            )
    out: list[InitialSubcube] = []

    def walk(prefix: tuple[int, ...]):
        cell = InitialSubcube(prefix)
        # Any member at distance 0 either contains the cell or is inside it.
        containing = [x for x in family.members if subcube_distance(cell, x) == 0]
        if any(x.codim <= len(prefix) for x in containing):
            return  # cell lies inside an assigned subcube
        if not containing:
            if len(prefix) < b:
                walk(prefix + (0,))
                walk(prefix + (1,))
            else:
                out.append(cell)
            return
        # Some member strictly refines this cell; keep splitting.
        walk(prefix + (0,))
        walk(prefix + (1,))

    walk(())
    return out


def bandwidth_order(vertices: Iterable[int], n: int) -> list[int]:
    """Order vertices by (number of set bits, word value).

    Along this order every cube edge joins consecutive weight levels, so the
    index gap across an edge is at most the size of two adjacent levels.
    """
    return sorted(vertices, key=lambda v: (v.bit_count(), v))


def bandwidth_bound(n: int) -> int:
    """2 * C(n, floor(n/2)): an upper bound for the index gap across any
    edge of Q_n under ``bandwidth_order``."""
    return 2 * comb(n, n // 2)
