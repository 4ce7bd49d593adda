"""Exact optimum by branch and bound.

Serves as the oracle the heuristic is measured against.  Edges are branched
in lexicographic order with include-first depth-first search, so the witness
reported for the optimum value is the lexicographically smallest maximum
matching; the bound at each node is current size plus surviving candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DuoError, DuoGraph, Matching, StringInstance, compatible


@dataclass(frozen=True)
class ExactResult:
    value: int
    witness: Matching
    nodes_explored: int


class BudgetExceededError(DuoError):
    """Node budget ran out; carries the best solution found so far, which is
    a valid lower bound on the optimum."""

    def __init__(self, budget: int, best: ExactResult):
        super().__init__(f"node budget {budget} exhausted; best found {best.value}")
        self.budget = budget
        self.best = best


def exact_max_matching(g: DuoGraph, budget: int | None = None) -> ExactResult:
    """Maximum pairwise-compatible edge set of ``g``.

    ``budget`` caps explored nodes; on exhaustion BudgetExceededError is
    raised with the incumbent attached.  Deterministic for a given graph.
    """
    best: list = []
    nodes = 0

    def rec(chosen: list, cands: list) -> None:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceededError(
                budget, ExactResult(len(best), Matching(best), nodes)
            )
        if len(chosen) > len(best):
            best[:] = chosen
        for idx, e in enumerate(cands):
            # bound: even taking every remaining candidate cannot beat best
            if len(chosen) + len(cands) - idx <= len(best):
                break
            chosen.append(e)
            rec(chosen, [c for c in cands[idx + 1:] if compatible(e, c)])
            chosen.pop()

    rec([], list(g.edges))
    return ExactResult(len(best), Matching(best), nodes)


def exact_min_partition_size(inst: StringInstance, budget: int | None = None) -> int:
    """Smallest number of blocks in a common partition of the string pair.

    Every preserved duo merges two blocks, so the minimum block count is
    n minus the maximum number of preserved duos.
    """
    g = DuoGraph.from_strings(inst)
    return inst.n - exact_max_matching(g, budget=budget).value
