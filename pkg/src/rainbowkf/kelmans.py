"""The Kelmans operation, its fixed-point closure and shift stability."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any

from .graph import Edge, GraphCollection, GraphError, LabeledGraph


@dataclass(frozen=True)
class KelmansTrace:
    """One application of KO_{uv}: edges {v,w} in ``moved`` became {u,w}."""

    source: LabeledGraph
    pair: tuple[int, int]
    moved: frozenset[Edge]
    result: LabeledGraph

    @property
    def changed(self) -> bool:
        return bool(self.moved)

    def to_json(self) -> dict[str, Any]:
        return {
            "pair": list(self.pair),
            "moved": [list(e) for e in sorted(self.moved)],
            "before": [list(e) for e in self.source.edges()],
            "after": [list(e) for e in self.result.edges()],
        }


def _shift_rows(rows: tuple[int, ...], u: int, v: int) -> tuple[tuple[int, ...], int]:
    """KO_{uv} on 0-based bitmask rows; returns new rows and the moved-neighbour mask."""
    bu, bv = 1 << u, 1 << v
    moved = rows[v] & ~rows[u] & ~bu
    if not moved:
        return rows, 0
    new = list(rows)
    new[v] &= ~moved
    new[u] |= moved
    w_mask = moved
    while w_mask:
        low = w_mask & -w_mask
        w = low.bit_length() - 1
        new[w] = (new[w] & ~bv) | bu
        w_mask ^= low
    return tuple(new), moved


def ko_pair(g: LabeledGraph, u: int, v: int) -> KelmansTrace:
    """KO_{uv}(g): move every edge vw with w outside N(u) and w != u onto u."""
    if u == v:
        raise GraphError("Kelmans operation needs two distinct vertices")
    if not (1 <= u <= g.n and 1 <= v <= g.n):
        raise GraphError(f"vertices ({u},{v}) outside 1..{g.n}")
    rows, moved = _shift_rows(g.rows, u - 1, v - 1)
    ws = [w + 1 for w in range(g.n) if (moved >> w) & 1]
    edges = frozenset((min(v, w), max(v, w)) for w in ws)
    result = g if not moved else LabeledGraph(g.n, rows)
    return KelmansTrace(g, (u, v), edges, result)


def ko_full_steps(g: LabeledGraph) -> list[KelmansTrace]:
    """Every non-trivial KO step of the lexicographic sweeps that lead to KO(g)."""
    steps = []
    cur = g
    changed = True
    while changed:
        changed = False
        for u, v in combinations(range(1, g.n + 1), 2):
            t = ko_pair(cur, u, v)
            if t.changed:
                steps.append(t)
                cur = t.result
                changed = True
    return steps


def ko_full(g: LabeledGraph) -> LabeledGraph:
    """Sweep all pairs u < v lexicographically until a full sweep changes nothing.

    Each move swaps an endpoint v for a smaller u, so the sum of endpoint labels
    strictly drops and the sweep terminates.
    """
    rows = g.rows
    changed = True
    while changed:
        changed = False
        for u, v in combinations(range(g.n), 2):
            rows, moved = _shift_rows(rows, u, v)
            changed = changed or bool(moved)
    return g if rows == g.rows else LabeledGraph(g.n, rows)


def is_shift_stable(g: LabeledGraph) -> bool:
    """Every edge {x,y}, x<y, forces all {i,j} with i <= x and i < j <= y."""
    for x, y in g.edges():
        for i in range(1, x + 1):
            need = ((1 << y) - 1) & ~((1 << i) - 1)  # labels i+1..y as 0-based bits i..y-1
            if g.rows[i - 1] & need != need:
                return False
    return True


@dataclass(frozen=True)
class CollectionStep:
    """KO_{uv} applied member-wise, with the collections before and after."""

    pair: tuple[int, int]
    before: GraphCollection
    after: GraphCollection


def ko_collection_steps(gc: GraphCollection) -> list[CollectionStep]:
    """Member-wise KO_{uv} steps in sweep order until every member is a fixed point.

    Applying KO_{uv} to a member already fixed under (u,v) is the identity, so
    the final collection equals the member-wise :func:`ko_full`.
    """
    steps = []
    cur = gc
    n = gc.n
    changed = True
    while changed:
        changed = False
        for u, v in combinations(range(1, n + 1), 2):
            members = tuple(ko_pair(g, u, v).result for g in cur.graphs)
            if members != cur.graphs:
                nxt = GraphCollection(cur.k, members)
                steps.append(CollectionStep((u, v), cur, nxt))
                cur = nxt
                changed = True
    return steps


def ko_collection(gc: GraphCollection) -> GraphCollection:
    return GraphCollection(gc.k, tuple(ko_full(g) for g in gc.graphs))
