"""Text formats for instances, graphs, and matchings.

Three file kinds, all line-oriented with ``#`` comments and blank lines
ignored:

* ``.duo``    two symbol lines, one per string (see core.parse_instance)
* ``.mcbm``   first line m, then one ``i j`` edge per line
* matching    one ``i j`` edge per line, relative to some graph
"""

from __future__ import annotations

import os

from .core import DuoGraph, Edge, ParseError, StringInstance, parse_instance


def _content_lines(text: str) -> list[str]:
    lines = [ln.strip() for ln in text.splitlines()]
    return [ln for ln in lines if ln and not ln.startswith("#")]


def _parse_edge_line(ln: str) -> Edge:
    parts = ln.split()
    if len(parts) != 2:
        raise ParseError(f"expected 'i j', got {ln!r}")
    try:
        return Edge(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ParseError(f"non-integer edge line {ln!r}") from exc


def parse_graph(text: str) -> DuoGraph:
    """Parse the ``.mcbm`` format: a position count then edge lines."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph file")
    try:
        m = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"first line must be the position count, got {lines[0]!r}") from exc
    edges = [_parse_edge_line(ln) for ln in lines[1:]]
    try:
        return DuoGraph(m, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_matching_edges(text: str) -> list[Edge]:
    """Parse raw matching edges; validation against a graph is the caller's
    job so that verification commands can report on invalid inputs."""
    return [_parse_edge_line(ln) for ln in _content_lines(text)]


def format_graph(g: DuoGraph) -> str:
    lines = [str(g.m)]
    lines.extend(str(e) for e in g.edges)
    return "\n".join(lines) + "\n"


def format_matching(edges) -> str:
    return "".join(f"{e.i} {e.j}\n" for e in sorted(edges))


def format_instance(inst: StringInstance) -> str:
    return " ".join(inst.a) + "\n" + " ".join(inst.b) + "\n"


def load_problem(path: str, fmt: str | None = None) -> tuple[DuoGraph, StringInstance | None]:
    """Load either input kind, returning the graph plus the string pair when
    one exists.  ``fmt`` forces 'duo' or 'mcbm'; default goes by extension,
    falling back to 'duo'."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        fmt = "mcbm" if ext == ".mcbm" else "duo"
    if fmt == "mcbm":
        return parse_graph(text), None
    if fmt == "duo":
        inst = parse_instance(text)
        return DuoGraph.from_strings(inst), inst
    raise ParseError(f"unknown format {fmt!r}")


def load_matching_edges(path: str) -> list[Edge]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matching_edges(fh.read())
