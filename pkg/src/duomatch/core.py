"""Core types for duo-preservation string mapping.

Two equal-length strings A and B over the same multiset of symbols induce a
bipartite graph on "duo" positions: duo i of A is the consecutive symbol pair
(a_i, a_{i+1}), and there is an edge (i, j) whenever duo i of A equals duo j
of B.  A set of edges that is pairwise *compatible* (see :func:`compatible`)
corresponds exactly to a common partition of the two strings in which every
selected duo stays intact, so maximizing preserved duos is a maximum
compatible edge set problem.  The graph form stands on its own: any bipartite
graph on two sets of m positions can be solved without string backing.

All indices are 1-based on both sides.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass


class DuoError(Exception):
    """Base class for errors raised by this package."""


class ParseError(DuoError):
    """Malformed instance, graph, or matching text."""


class LengthMismatchError(ParseError):
    """The two strings of an instance have different lengths."""


class NotPermutationError(ParseError):
    """The second string is not a rearrangement of the first."""


class EmptyInstanceError(ParseError):
    """Instance shorter than two symbols, so it has no duos at all."""


class EdgeNotInGraphError(DuoError):
    """An operation referenced an edge absent from the graph."""


class IncompatibleEdgesError(DuoError):
    """An edge set presented as a matching contains a conflicting pair."""

    def __init__(self, a: "Edge", b: "Edge"):
        super().__init__(f"edges {a} and {b} conflict")
        self.pair = (a, b)


class InconsistentMapError(DuoError):
    """A matching induced a multi-valued or non-injective position map.

    Cannot happen for a validated compatible matching; raised only when the
    map is requested for a raw edge set that violates the invariant.
    """


@dataclass(frozen=True, order=True)
class Edge:
    """Graph edge pairing duo ``i`` of A with duo ``j`` of B (1-based).

    Ordering and equality are lexicographic on ``(i, j)``; this ordering is
    the tie-break used throughout the solvers.
    """

    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.i} {self.j}"


def compatible(e: Edge, f: Edge) -> bool:
    """Return True when the two edges can coexist in one matching.

    Writing di = f.i - e.i and dj = f.j - e.j, the pair conflicts iff

    * exactly one of di, dj is zero (the edges share one endpoint), or
    * |di| == 1 and dj != di, or |dj| == 1 and di != dj (the edges sit on
      consecutive positions on one side without running parallel, so the
      implied string cuts contradict each other).

    An edge is compatible with itself by convention, which lets callers test
    "pairwise compatible" over a whole set without special-casing identity.
    Offsets with min(|di|, |dj|) >= 2, and parallel steps di == dj == +-1,
    are always compatible.
    """
    di = f.i - e.i
    dj = f.j - e.j
    if di == 0 and dj == 0:
        return True
    if di == 0 or dj == 0:
        return False
    if (di == 1 or di == -1) and dj != di:
        return False
    if (dj == 1 or dj == -1) and di != dj:
        return False
    return True


@dataclass(frozen=True)
class StringInstance:
    """An equal-length string pair where B is a rearrangement of A."""

    a: tuple[str, ...]
    b: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise LengthMismatchError(
                f"|A| = {len(self.a)} but |B| = {len(self.b)}"
            )
        if len(self.a) < 2:
            raise EmptyInstanceError("need at least two symbols per string")
        if Counter(self.a) != Counter(self.b):
            raise NotPermutationError("B is not a rearrangement of A")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.a)

    def occurrence_cap(self) -> int:
        """Largest multiplicity of any single symbol."""
        return max(Counter(self.a).values())


def parse_instance(text: str) -> StringInstance:
    """Parse the two-line string-pair format.

    Lines starting with ``#`` and blank lines are ignored.  Each remaining
    line holds one string, symbols separated by whitespace.  A line without
    any whitespace is treated as compact single-character symbols.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) != 2:
        raise ParseError(f"expected exactly 2 string lines, found {len(lines)}")
    rows: list[tuple[str, ...]] = []
    for ln in lines:
        toks = ln.split()
        if len(toks) == 1 and len(toks[0]) > 1:
            toks = list(toks[0])
        rows.append(tuple(toks))
    return StringInstance(rows[0], rows[1])


class DuoGraph:
    """Bipartite conflict-annotated graph on duo positions 1..m per side.

    Immutable after construction.  ``edges`` is lexicographically sorted and
    duplicate-free; per-position indices make :meth:`conflict_set` run in
    time proportional to the local neighborhood rather than |E|.
    """

    __slots__ = ("m", "edges", "edge_set", "_by_i", "_by_j")

    def __init__(self, m: int, edges=()) -> None:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        es = sorted(set(Edge(e.i, e.j) if isinstance(e, Edge) else Edge(*e) for e in edges))
        for e in es:
            if not (1 <= e.i <= m and 1 <= e.j <= m):
                raise ValueError(f"edge {e} outside position range 1..{m}")
        self.m = m
        self.edges: tuple[Edge, ...] = tuple(es)
        self.edge_set: frozenset[Edge] = frozenset(es)
        by_i: dict[int, list[Edge]] = {}
        by_j: dict[int, list[Edge]] = {}
        for e in es:
            by_i.setdefault(e.i, []).append(e)
            by_j.setdefault(e.j, []).append(e)
        self._by_i = by_i
        self._by_j = by_j

    @classmethod
    def from_strings(cls, inst: StringInstance) -> "DuoGraph":
        """Build the duo graph of a string pair: edge (i, j) iff duo i of A
        equals duo j of B as an ordered symbol pair."""
        a, b = inst.a, inst.b
        m = inst.n - 1
        edges = [
            Edge(i, j)
            for i in range(1, m + 1)
            for j in range(1, m + 1)
            if a[i - 1] == b[j - 1] and a[i] == b[j]
        ]
        return cls(m, edges)

    def __contains__(self, e: Edge) -> bool:
        return e in self.edge_set

    def __repr__(self) -> str:
        return f"DuoGraph(m={self.m}, |E|={len(self.edges)})"

    def conflict_set(self, e: Edge) -> tuple[Edge, ...]:
        """All graph edges conflicting with ``e``, in lexicographic order.

        Conflicting edges must touch a position within distance 1 of one of
        e's endpoints, so only those buckets are scanned.
        """
        if e not in self.edge_set:
            raise EdgeNotInGraphError(f"edge {e} not in graph")
        seen: set[Edge] = set()
        for idx in (e.i - 1, e.i, e.i + 1):
            seen.update(self._by_i.get(idx, ()))
        for idx in (e.j - 1, e.j, e.j + 1):
            seen.update(self._by_j.get(idx, ()))
        return tuple(sorted(f for f in seen if not compatible(e, f)))


class Matching:
    """A validated pairwise-compatible edge set, stored in lex order.

    Construction costs O(k^2) compatibility tests and raises
    :class:`IncompatibleEdgesError` naming the first offending pair.
    """

    __slots__ = ("edges",)

    def __init__(self, edges=()) -> None:
        es = sorted(set(Edge(e.i, e.j) if isinstance(e, Edge) else Edge(*e) for e in edges))
        for a, b in itertools.combinations(es, 2):
            if not compatible(a, b):
                raise IncompatibleEdgesError(a, b)
        self.edges: tuple[Edge, ...] = tuple(es)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e: Edge) -> bool:
        return e in self.edges

    def __eq__(self, other) -> bool:
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        inner = ", ".join(f"({e.i},{e.j})" for e in self.edges)
        return f"Matching[{inner}]"


def is_compatible_matching(g: DuoGraph, edges) -> bool:
    """True iff every edge belongs to ``g`` and all pairs are compatible."""
    es = [Edge(e.i, e.j) if isinstance(e, Edge) else Edge(*e) for e in edges]
    if any(e not in g.edge_set for e in es):
        return False
    return all(compatible(a, b) for a, b in itertools.combinations(es, 2))


def singleton_partition(edges) -> tuple[frozenset[Edge], frozenset[Edge]]:
    """Split a matching into (singletons, parallels).

    An edge (i, j) is *parallel* when the matching also uses (i-1, j-1) or
    (i+1, j+1), i.e. it extends a run of consecutive preserved duos; it is a
    *singleton* otherwise.
    """
    es = frozenset(Edge(e.i, e.j) if isinstance(e, Edge) else Edge(*e) for e in edges)
    parallels = frozenset(
        e for e in es
        if Edge(e.i - 1, e.j - 1) in es or Edge(e.i + 1, e.j + 1) in es
    )
    return es - parallels, parallels


def induced_position_map(edges) -> dict[int, int]:
    """Map A-positions to B-positions as forced by the matching.

    Edge (i, j) maps position i -> j and i+1 -> j+1.  For a compatible
    matching the result is single-valued and injective; otherwise
    :class:`InconsistentMapError` is raised.
    """
    mapping: dict[int, int] = {}
    used: dict[int, int] = {}
    for e in sorted(Edge(x.i, x.j) if isinstance(x, Edge) else Edge(*x) for x in edges):
        for src, dst in ((e.i, e.j), (e.i + 1, e.j + 1)):
            if mapping.get(src, dst) != dst:
                raise InconsistentMapError(
                    f"position {src} mapped to both {mapping[src]} and {dst}"
                )
            if used.get(dst, src) != src:
                raise InconsistentMapError(
                    f"positions {used[dst]} and {src} both map to {dst}"
                )
            mapping[src] = dst
            used[dst] = src
    return mapping


def partition_from_matching(inst: StringInstance, matching: Matching) -> list[tuple[str, ...]]:
    """Cut A into blocks at every duo the matching leaves unpreserved.

    The block list is a common partition witness: B can be cut into the same
    multiset of blocks.  Number of blocks == n - len(matching).
    """
    covered = {e.i for e in matching}
    blocks: list[tuple[str, ...]] = []
    start = 0
    for i in range(1, inst.n):
        if i not in covered:
            blocks.append(inst.a[start:i])
            start = i
    blocks.append(inst.a[start:])
    return blocks
