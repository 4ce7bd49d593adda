"""Local search over compatible matchings.

The solver repeats three moves until none applies:

1. greedily extend the matching to a maximal one, scanning edges in a fixed
   order;
2. *replace*: swap up to rho matching edges for rho + 1 pairwise-compatible
   edges (a strict size gain);
3. *reduce*: swap exactly rho edges for rho new ones that strictly lower the
   number of singleton edges at equal size.

Size can never decrease and, at fixed size, the singleton count strictly
drops on every reduce, so termination is guaranteed without any iteration
cap.  With identical configuration and input the whole run is deterministic:
subsets are scanned in lexicographic order over the ordered matching,
replacements take the first improvement found, and the incoming edge set is
the lexicographically first one the backtracking reaches.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import (
    DuoError,
    DuoGraph,
    Edge,
    Matching,
    compatible,
    singleton_partition,
)

PHASE_GREEDY = "greedy"
PHASE_REPLACE = "replace"
PHASE_REDUCE = "reduce"
PHASE_TERMINATE = "terminate"

SCAN_LEX = "lex"
SCAN_REVERSE_LEX = "reverse-lex"

MAX_RHO = 5


class IterationCapError(DuoError):
    """Raised in diagnostic mode when max_iterations passes complete without
    termination; carries the matching and trace reached so far."""

    def __init__(self, matching: Matching, trace: "SearchTrace"):
        super().__init__(f"iteration cap hit at size {len(matching)}")
        self.matching = matching
        self.trace = trace


class NotMaximalError(DuoError):
    """A maximal matching was required but an extension exists."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`local_search`.

    rho bounds the swap width (1..5; the analysis machinery in
    :mod:`duomatch.analysis` is calibrated for 5).  ``use_reduce`` toggles
    the singleton-lowering move; switching it off with rho=1 gives the
    plain hill climber.  ``seed`` randomizes only the greedy extension
    order; subset scans stay ordered so runs remain reproducible.
    """

    rho: int = 5
    use_reduce: bool = True
    scan_order: str = SCAN_LEX
    max_iterations: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.rho <= MAX_RHO:
            raise ValueError(f"rho must be in 1..{MAX_RHO}, got {self.rho}")
        if self.scan_order not in (SCAN_LEX, SCAN_REVERSE_LEX):
            raise ValueError(f"unknown scan order {self.scan_order!r}")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    phase: str
    size_before: int
    size_after: int
    singletons_before: int
    singletons_after: int
    removed: tuple[Edge, ...]
    added: tuple[Edge, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "iter": self.iteration,
                "phase": self.phase,
                "size_before": self.size_before,
                "size_after": self.size_after,
                "singletons_before": self.singletons_before,
                "singletons_after": self.singletons_after,
                "out": [[e.i, e.j] for e in self.removed],
                "in": [[e.i, e.j] for e in self.added],
            }
        )


@dataclass(frozen=True)
class SearchTrace:
    steps: tuple[TraceStep, ...]

    def to_json_lines(self) -> str:
        return "".join(s.to_json() + "\n" for s in self.steps)

    @property
    def iterations(self) -> int:
        return self.steps[-1].iteration + 1 if self.steps else 0


@dataclass(frozen=True)
class LocalOptCertificate:
    """Evidence of a completed neighborhood scan around a matching."""

    rho: int
    use_reduce: bool
    size: int
    singletons: int
    exhaustive: bool
    replace_subsets_scanned: int
    reduce_subsets_scanned: int


def _ordered(edges, scan_order: str) -> list[Edge]:
    return sorted(edges, reverse=(scan_order == SCAN_REVERSE_LEX))


def _singleton_count(edges) -> int:
    return len(singleton_partition(edges)[0])


def greedy_maximal(g: DuoGraph, matching: Matching | None = None,
                   config: SolverConfig = SolverConfig()) -> Matching:
    """Extend ``matching`` to a maximal one, adding edges in scan order.

    With a seeded config the scan order is a reproducible shuffle instead.
    Idempotent once the matching is maximal.
    """
    current: list[Edge] = list(matching.edges) if matching is not None else []
    if config.seed is not None:
        order = list(g.edges)
        random.Random(config.seed).shuffle(order)
    else:
        order = _ordered(g.edges, config.scan_order)
    for e in order:
        if e not in current and all(compatible(e, f) for f in current):
            current.append(e)
    return Matching(current)


def _iter_compatible_subsets(cands: list[Edge], k: int):
    """Yield all pairwise-compatible k-subsets of ``cands`` as tuples, in
    lexicographic order over the candidate sequence, with standard
    feasibility pruning."""
    n = len(cands)
    chosen: list[Edge] = []

    def rec(start: int):
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for idx in range(start, n):
            if n - idx < k - len(chosen):
                break
            e = cands[idx]
            if all(compatible(e, c) for c in chosen):
                chosen.append(e)
                yield from rec(idx + 1)
                chosen.pop()

    if k == 0:
        yield ()
    else:
        yield from rec(0)


def _swap_candidates(g: DuoGraph, removed, kept, scan_order: str) -> list[Edge]:
    """Edges eligible to enter after dropping ``removed`` from the matching:
    conflict with at least one dropped edge, compatible with every kept one.
    For a maximal matching this loses no candidates, because an edge outside
    the matching compatible with all kept edges must conflict with a dropped
    one."""
    removed_set = set(removed)
    kept_set = set(kept)
    out: list[Edge] = []
    for e in _ordered(g.edges, scan_order):
        if e in removed_set or e in kept_set:
            continue
        if any(not compatible(e, x) for x in removed) and \
                all(compatible(e, f) for f in kept):
            out.append(e)
    return out


def replace_step(g: DuoGraph, matching: Matching, rho: int = 5,
                 scan_order: str = SCAN_LEX) -> Matching | None:
    """First-improvement size gain, or None when no rho-swap grows the
    matching.

    When the matching has at most rho edges the whole graph is searched for
    any matching one edge larger.  Otherwise every rho-subset X of the
    matching is scanned in order and the pool X plus its eligible entrants
    is searched for rho + 1 pairwise-compatible edges; keeping some of X in
    the replacement realizes every narrower swap, so widths below rho need
    no separate pass.
    """
    m_edges = _ordered(matching.edges, scan_order)
    if len(m_edges) <= rho:
        found = next(
            _iter_compatible_subsets(_ordered(g.edges, scan_order), len(m_edges) + 1),
            None,
        )
        return Matching(found) if found is not None else None
    for removed in combinations(m_edges, rho):
        removed_set = set(removed)
        kept = [e for e in m_edges if e not in removed_set]
        pool = _ordered(
            list(removed) + _swap_candidates(g, removed, kept, scan_order),
            scan_order,
        )
        incoming = next(_iter_compatible_subsets(pool, rho + 1), None)
        if incoming is not None:
            return Matching(kept + list(incoming))
    return None


def reduce_step(g: DuoGraph, matching: Matching, rho: int = 5,
                scan_order: str = SCAN_LEX) -> Matching | None:
    """Equal-size swap that strictly lowers the singleton count, or None.

    Mirrors :func:`replace_step`: an exhaustive same-size search when the
    matching has at most rho edges, otherwise rho-for-rho swaps drawn from
    each dropped subset's entrant pool.
    """
    base = _singleton_count(matching.edges)
    if base == 0:
        return None
    m_edges = _ordered(matching.edges, scan_order)
    if len(m_edges) <= rho:
        for cand in _iter_compatible_subsets(_ordered(g.edges, scan_order), len(m_edges)):
            if _singleton_count(cand) < base:
                return Matching(cand)
        return None
    for removed in combinations(m_edges, rho):
        removed_set = set(removed)
        kept = [e for e in m_edges if e not in removed_set]
        pool = _ordered(
            list(removed) + _swap_candidates(g, removed, kept, scan_order),
            scan_order,
        )
        for incoming in _iter_compatible_subsets(pool, rho):
            candidate = kept + list(incoming)
            if _singleton_count(candidate) < base:
                return Matching(candidate)
    return None


def local_search(g: DuoGraph, config: SolverConfig = SolverConfig()) -> tuple[Matching, SearchTrace]:
    """Run the full loop from the empty matching; returns the terminal
    matching and a step-by-step trace.

    Each iteration re-extends greedily (recorded only when it adds edges),
    then tries replace, then reduce if enabled, and terminates when neither
    applies.  Raises IterationCapError only when ``config.max_iterations``
    is set and reached.
    """
    steps: list[TraceStep] = []
    current = Matching()
    iteration = 0

    def record(phase: str, before: Matching, after: Matching) -> None:
        before_set, after_set = set(before.edges), set(after.edges)
        steps.append(
            TraceStep(
                iteration=iteration,
                phase=phase,
                size_before=len(before),
                size_after=len(after),
                singletons_before=_singleton_count(before.edges),
                singletons_after=_singleton_count(after.edges),
                removed=tuple(sorted(before_set - after_set)),
                added=tuple(sorted(after_set - before_set)),
            )
        )

    while True:
        if config.max_iterations is not None and iteration >= config.max_iterations:
            raise IterationCapError(current, SearchTrace(tuple(steps)))
        extended = greedy_maximal(g, current, config)
        if len(extended) > len(current):
            record(PHASE_GREEDY, current, extended)
        current = extended
        swapped = replace_step(g, current, config.rho, config.scan_order)
        if swapped is not None:
            record(PHASE_REPLACE, current, swapped)
            current = swapped
            iteration += 1
            continue
        if config.use_reduce:
            swapped = reduce_step(g, current, config.rho, config.scan_order)
            if swapped is not None:
                record(PHASE_REDUCE, current, swapped)
                current = swapped
                iteration += 1
                continue
        record(PHASE_TERMINATE, current, current)
        return current, SearchTrace(tuple(steps))


def is_local_optimum(g: DuoGraph, matching: Matching,
                     config: SolverConfig = SolverConfig()) -> tuple[bool, LocalOptCertificate]:
    """Check that no configured move applies to ``matching``.

    Raises NotMaximalError if some graph edge extends the matching, since
    the moves are only meaningful on maximal matchings.  The certificate
    reports how many subsets each scan covered (0 with the exhaustive
    whole-graph branch, flagged separately).
    """
    m_set = set(matching.edges)
    for e in g.edges:
        if e not in m_set and all(compatible(e, f) for f in matching.edges):
            raise NotMaximalError(f"edge {e} extends the matching")
    exhaustive = len(matching) <= config.rho
    subsets = 0 if exhaustive else comb(len(matching), config.rho)
    if replace_step(g, matching, config.rho, config.scan_order) is not None:
        return False, LocalOptCertificate(
            config.rho, config.use_reduce, len(matching),
            _singleton_count(matching.edges), exhaustive, subsets, 0,
        )
    reduce_scanned = 0
    if config.use_reduce:
        reduce_scanned = subsets
        if reduce_step(g, matching, config.rho, config.scan_order) is not None:
            return False, LocalOptCertificate(
                config.rho, config.use_reduce, len(matching),
                _singleton_count(matching.edges), exhaustive, subsets, reduce_scanned,
            )
    return True, LocalOptCertificate(
        config.rho, config.use_reduce, len(matching),
        _singleton_count(matching.edges), exhaustive, subsets, reduce_scanned,
    )
