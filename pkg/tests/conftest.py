"""Shared builders for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from duomatch.core import DuoGraph, Edge, StringInstance, parse_instance

# Small worked example used throughout: 5 edges, optimum 3, and a greedy
# run from scratch that stalls at 2 without the swap machinery.
DEMO_TEXT = "a b c d a b c\nb c d c a b a"
DEMO_EDGES = [(1, 5), (2, 1), (3, 2), (5, 5), (6, 1)]
DEMO_OPT = [(2, 1), (3, 2), (5, 5)]

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def demo_instance() -> StringInstance:
    return parse_instance(DEMO_TEXT)


@pytest.fixture
def demo_graph(demo_instance) -> DuoGraph:
    return DuoGraph.from_strings(demo_instance)


def edges(pairs) -> list[Edge]:
    return [Edge(i, j) for i, j in pairs]
