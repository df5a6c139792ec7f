"""graph6 (short form) and edge-list JSON for graphs and collections."""

from __future__ import annotations

import json
from typing import Any

from .graph import GraphCollection, LabeledGraph

GRAPH6_MAX_N = 62
_HEADER = ">>graph6<<"


class GraphFormatError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


def to_graph6(g: LabeledGraph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 short form holds at most {GRAPH6_MAX_N} vertices, got {g.n}")
    bits = [g.has_edge(i, j) for j in range(2, g.n + 1) for i in range(1, j)]
    bits += [False] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for p in range(0, len(bits), 6):
        val = 0
        for b in bits[p:p + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(text: str) -> LabeledGraph:
    s = text.strip()
    offset = 0
    if s.startswith(_HEADER):
        offset = len(_HEADER)
        s = s[offset:]
    if not s:
        raise GraphFormatError("empty graph6 string", offset)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"character {ch!r} outside graph6 range", offset + pos)
    if ord(s[0]) == 126:
        raise GraphFormatError("long-form graph6 (n > 62) is not supported", offset)
    n = ord(s[0]) - 63
    if n < 1:
        raise GraphFormatError("graph6 with zero vertices is not a valid LabeledGraph", offset)
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    body = s[1:]
    if len(body) != need:
        raise GraphFormatError(
            f"expected {need} data characters for n={n}, found {len(body)}",
            offset + 1 + min(len(body), need),
        )
    bits = []
    for ch in body:
        v = ord(ch) - 63
        bits.extend((v >> sh) & 1 for sh in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits", offset + len(s) - 1)
    edges = []
    idx = 0
    for j in range(2, n + 1):
        for i in range(1, j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return LabeledGraph.from_edges(n, edges)


def graph_to_obj(g: LabeledGraph) -> dict[str, Any]:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def graph_from_obj(obj: Any, where: str = "$") -> LabeledGraph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphFormatError(f"{where}: expected an object with 'n' and 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GraphFormatError(f"{where}.n: expected a positive integer")
    edges = obj["edges"]
    if not isinstance(edges, list):
        raise GraphFormatError(f"{where}.edges: expected a list")
    seen = set()
    for i, e in enumerate(edges):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        ):
            raise GraphFormatError(f"{where}.edges[{i}]: expected a pair of integers", i)
        a, b = e
        if not 1 <= a < b <= n:
            raise GraphFormatError(f"{where}.edges[{i}]: need 1 <= a < b <= {n}, got {e}", i)
        if (a, b) in seen:
            raise GraphFormatError(f"{where}.edges[{i}]: repeated edge {e}", i)
        seen.add((a, b))
    return LabeledGraph.from_edges(n, edges)


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.pos) from None


def to_json(g: LabeledGraph) -> str:
    return json.dumps(graph_to_obj(g))


def from_json(text: str) -> LabeledGraph:
    return graph_from_obj(_loads(text))


def parse_graph(text: str, fmt: str = "auto") -> LabeledGraph:
    """Parse a graph; ``fmt`` is ``graph6``, ``edge-list-json`` or ``auto``."""
    if fmt == "auto":
        fmt = "edge-list-json" if text.lstrip().startswith("{") else "graph6"
    if fmt == "graph6":
        return from_graph6(text)
    if fmt in ("edge-list-json", "json"):
        return from_json(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def emit_graph(g: LabeledGraph, fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt in ("edge-list-json", "json"):
        return to_json(g)
    raise ValueError(f"unknown graph format {fmt!r}")


def collection_to_obj(gc: GraphCollection) -> dict[str, Any]:
    return {"k": gc.k, "graphs": [graph_to_obj(g) for g in gc]}


def collection_from_obj(obj: Any) -> GraphCollection:
    if not isinstance(obj, dict) or "k" not in obj or "graphs" not in obj:
        raise GraphFormatError("$: expected an object with 'k' and 'graphs'")
    k = obj["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise GraphFormatError("$.k: expected a positive integer")
    graphs = obj["graphs"]
    if not isinstance(graphs, list) or not graphs:
        raise GraphFormatError("$.graphs: expected a non-empty list")
    members = tuple(graph_from_obj(g, f"$.graphs[{i}]") for i, g in enumerate(graphs))
    if len({g.n for g in members}) != 1:
        raise GraphFormatError("$.graphs: members disagree on n")
    return GraphCollection(k, members)


def collection_to_json(gc: GraphCollection) -> str:
    return json.dumps(collection_to_obj(gc))


def collection_from_json(text: str) -> GraphCollection:
    return collection_from_obj(_loads(text))
