"""Exact k-factor and rainbow-structure search, verification and pull-back."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .graph import Edge, GraphCollection, LabeledGraph, norm_edge
from .kelmans import ko_pair
from .matching import max_matching

DEFAULT_NODE_CAP = 10**7


def node_cap_default() -> int:
    raw = os.environ.get("RFL_NODE_CAP")
    return int(raw) if raw else DEFAULT_NODE_CAP


class SearchBudgetExceeded(RuntimeError):
    """The node cap ran out before the search was decided (outcome Unknown)."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search abandoned after {nodes} nodes; outcome unknown")


class FactorError(ValueError):
    pass


@dataclass(frozen=True)
class RainbowFactor:
    """A k-regular edge set with each edge tagged by the member it comes from."""

    k: int
    assignments: tuple[tuple[Edge, int], ...]

    @classmethod
    def build(cls, k: int, pairs: Iterable[tuple[Sequence[int], int]]) -> RainbowFactor:
        items = [(norm_edge(*e), int(c)) for e, c in pairs]
        return cls(k, tuple(sorted(items, key=lambda it: (it[1], it[0]))))

    @property
    def edges(self) -> list[Edge]:
        return [e for e, _ in self.assignments]

    @property
    def colors(self) -> list[int]:
        return [c for _, c in self.assignments]

    def color_map(self) -> dict[int, Edge]:
        return {c: e for e, c in self.assignments}

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "assignments": [{"edge": list(e), "color": c} for e, c in self.assignments],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> RainbowFactor:
        try:
            return cls.build(obj["k"], ((a["edge"], a["color"]) for a in obj["assignments"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FactorError(f"malformed rainbow factor JSON: {exc}") from None


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def verify_rainbow(
    f: RainbowFactor,
    gc: GraphCollection,
    colors: Iterable[int] | None = None,
) -> Verification:
    """Check regularity, the color bijection and membership against ``gc``.

    ``colors`` restricts the expected color set (default: every member), which
    lets a partial layer be checked against its own slice of the collection.
    """
    n = gc.n
    expected = sorted(range(1, len(gc) + 1) if colors is None else colors)
    seen_edges: set[Edge] = set()
    deg = [0] * (n + 1)
    for e, _ in f.assignments:
        a, b = e
        if not (1 <= a < b <= n):
            return Verification(False, f"edge {e} is not a pair of distinct vertices in 1..{n}")
        if e in seen_edges:
            return Verification(False, f"repeated edge {e}")
        seen_edges.add(e)
        deg[a] += 1
        deg[b] += 1
    bad = next((v for v in range(1, n + 1) if deg[v] != f.k), None)
    if bad is not None:
        return Verification(False, f"not {f.k}-regular: vertex {bad} has degree {deg[bad]}")
    used: set[int] = set()
    valid = set(expected)
    for _, c in f.assignments:
        if c in used:
            return Verification(False, f"color reused: {c}")
        if c not in valid:
            return Verification(False, f"color {c} outside the expected color set")
        used.add(c)
    if used != valid:
        return Verification(False, f"colors missing: {sorted(valid - used)[:5]}")
    for e, c in f.assignments:
        if not gc[c].has_edge(*e):
            return Verification(False, f"membership violated: edge {e} not in member {c}")
    return Verification(True)


# -- plain k-factors ----------------------------------------------------------------


def find_k_factor(g: LabeledGraph, k: int) -> list[Edge] | None:
    """A k-factor of ``g`` via the Tutte gadget and a maximum matching, or None.

    Each vertex of degree d becomes d outer vertices (one per incident edge) and
    d - k inner vertices joined to all of its outer ones; edge uv links the two
    outer vertices that stand for it. Perfect matchings of the gadget leave
    exactly k outer vertices per original vertex matched across edges.
    """
    if k < 1:
        raise FactorError("k must be positive")
    if (k * g.n) % 2:
        raise FactorError(f"k*n = {k * g.n} is odd; no k-factor can exist")
    degs = g.degrees()
    if min(degs) < k:
        return None
    edges = g.edges()
    adj: list[list[int]] = []

    def new_vertex() -> int:
        adj.append([])
        return len(adj) - 1

    outer: dict[tuple[int, Edge], int] = {}
    for v in g.vertices:
        mine = [new_vertex() for _ in range(degs[v - 1])]
        inner = [new_vertex() for _ in range(degs[v - 1] - k)]
        for o in mine:
            for i in inner:
                adj[o].append(i)
                adj[i].append(o)
        incident = [e for e in edges if v in e]
        for o, e in zip(mine, incident):
            outer[(v, e)] = o
    link: dict[int, Edge] = {}
    for e in edges:
        a, b = outer[(e[0], e)], outer[(e[1], e)]
        adj[a].append(b)
        adj[b].append(a)
        link[a] = link[b] = e
    mate = max_matching(adj)
    if any(m == -1 for m in mate):
        return None
    chosen = sorted({link[o] for o, m in enumerate(mate) if o in link and link.get(m) == link[o]})
    return chosen


def find_k_factor_backtrack(g: LabeledGraph, k: int) -> list[Edge] | None:
    """Direct backtracking k-factor search (label order); the gadget's cross-check."""
    if (k * g.n) % 2:
        raise FactorError(f"k*n = {k * g.n} is odd; no k-factor can exist")
    n = g.n
    deg = [0] * n
    chosen: list[Edge] = []

    def rec(v: int, start: int) -> bool:
        while v < n and deg[v] == k:
            v, start = v + 1, v + 2
        if v == n:
            return True
        need = k - deg[v]
        cands = [w for w in range(max(start, v + 1), n) if deg[w] < k and (g.rows[v] >> w) & 1]
        if len(cands) < need:
            return False
        for w in cands:
            deg[v] += 1
            deg[w] += 1
            chosen.append((v + 1, w + 1))
            if rec(v, w + 1):
                return True
            chosen.pop()
            deg[v] -= 1
            deg[w] -= 1
        return False

    return sorted(chosen) if rec(0, 1) else None


# -- rainbow search -------------------------------------------------------------------


class _ColorMatcher:
    """Incremental bipartite matching between chosen edges and color classes."""

    def __init__(self, gc: GraphCollection, colors: Sequence[int]):
        self.colors = list(colors)
        self.members = [gc[c] for c in self.colors]
        self.owner: list[Edge | None] = [None] * len(self.colors)
        self.slot: dict[Edge, int] = {}
        self._allowed: dict[Edge, list[int]] = {}

    def allowed(self, e: Edge) -> list[int]:
        got = self._allowed.get(e)
        if got is None:
            got = [i for i, g in enumerate(self.members) if g.has_edge(*e)]
            self._allowed[e] = got
        return got

    def add(self, e: Edge) -> bool:
        seen = [False] * len(self.colors)

        def augment(edge: Edge) -> bool:
            for i in self.allowed(edge):
                if seen[i]:
                    continue
                seen[i] = True
                holder = self.owner[i]
                if holder is None or augment(holder):
                    self.owner[i] = edge
                    self.slot[edge] = i
                    return True
            return False

        return augment(e)

    def remove(self, e: Edge) -> None:
        i = self.slot.pop(e)
        self.owner[i] = None

    def assignment(self) -> list[tuple[Edge, int]]:
        return [(e, self.colors[i]) for e, i in self.slot.items()]


def assign_colors(
    edges: Sequence[Sequence[int]], gc: GraphCollection, k: int, colors: Sequence[int] | None = None
) -> RainbowFactor | None:
    """Give each edge a distinct member containing it, or None if impossible."""
    colors = list(range(1, len(gc) + 1)) if colors is None else sorted(colors)
    if len(edges) != len(colors):
        return None
    matcher = _ColorMatcher(gc, colors)
    for e in edges:
        if not matcher.add(norm_edge(*e)):
            return None
    return RainbowFactor.build(k, matcher.assignment())


def _union_rows(gc: GraphCollection, colors: Sequence[int]) -> list[int]:
    rows = [0] * gc.n
    for c in colors:
        for i, r in enumerate(gc[c].rows):
            rows[i] |= r
    return rows


class _Budget:
    def __init__(self, cap: int | None):
        self.cap = node_cap_default() if cap is None else cap
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cap:
            raise SearchBudgetExceeded(self.nodes)


def find_rainbow_k_factor(
    gc: GraphCollection,
    k: int | None = None,
    *,
    colors: Sequence[int] | None = None,
    node_cap: int | None = None,
    forced: Sequence[Edge] = (),
) -> RainbowFactor | None:
    """Exact rainbow k-factor search; raises SearchBudgetExceeded when undecided.

    Vertices are completed in ascending label order, partners tried in
    ascending order. A partial factor survives only while (a) every vertex can
    still reach degree k and (b) its edges can be matched to distinct members.
    ``colors`` restricts the search to a slice of the collection of size kn/2;
    ``forced`` edges must appear in the factor.
    """
    k = gc.k if k is None else k
    n = gc.n
    cols = list(range(1, len(gc) + 1)) if colors is None else list(colors)
    if (k * n) % 2:
        raise FactorError(f"k*n = {k * n} is odd")
    if len(cols) * 2 != k * n:
        raise FactorError(f"need k*n/2 = {k * n // 2} colors, got {len(cols)}")
    union = _union_rows(gc, cols)
    matcher = _ColorMatcher(gc, cols)
    budget = _Budget(node_cap)
    deg = [0] * n
    frows = [0] * n
    own = [0] * n  # partners chosen while completing each vertex
    forced_set = {norm_edge(*e) for e in forced}

    def add(a: int, b: int) -> bool:
        e = (a + 1, b + 1)
        if not matcher.add(e):
            return False
        deg[a] += 1
        deg[b] += 1
        frows[a] |= 1 << b
        frows[b] |= 1 << a
        return True

    def drop(a: int, b: int) -> None:
        matcher.remove((a + 1, b + 1))
        deg[a] -= 1
        deg[b] -= 1
        frows[a] &= ~(1 << b)
        frows[b] &= ~(1 << a)

    for a, b in sorted(forced_set):
        if not (union[a - 1] >> (b - 1)) & 1 or deg[a - 1] >= k or deg[b - 1] >= k or not add(a - 1, b - 1):
            return None

    open_mask_all = (1 << n) - 1

    def feasible(v: int) -> bool:
        open_mask = 0
        for x in range(n):
            if deg[x] < k:
                open_mask |= 1 << x
        for x in range(n):
            if deg[x] < k:
                cand = union[x] & open_mask & ~frows[x]
                if x == v:
                    # partners of v must exceed its largest own partner
                    cand &= open_mask_all & ~((1 << max(own[v].bit_length(), v + 1)) - 1)
                if cand.bit_count() < k - deg[x]:
                    return False
        return True

    def rec() -> bool:
        budget.tick()
        v = next((x for x in range(n) if deg[x] < k), None)
        if v is None:
            return True
        if not feasible(v):
            return False
        low = max(own[v].bit_length(), v + 1)
        for w in range(low, n):
            if deg[w] >= k or not (union[v] >> w) & 1 or (frows[v] >> w) & 1:
                continue
            if add(v, w):
                own[v] |= 1 << w
                if rec():
                    return True
                own[v] &= ~(1 << w)
                drop(v, w)
        return False

    if not rec():
        return None
    return RainbowFactor.build(k, matcher.assignment())


def find_rainbow_perfect_matching(
    gc: GraphCollection,
    *,
    colors: Sequence[int] | None = None,
    node_cap: int | None = None,
) -> RainbowFactor | None:
    if gc.n % 2:
        raise FactorError(f"n = {gc.n} is odd; no perfect matching")
    return find_rainbow_k_factor(gc, 1, colors=colors, node_cap=node_cap)


def find_rainbow_hamiltonian_cycle(
    gc: GraphCollection,
    *,
    colors: Sequence[int] | None = None,
    node_cap: int | None = None,
) -> RainbowFactor | None:
    """Rainbow Hamiltonian cycle by rotational backtracking from vertex 1."""
    n = gc.n
    cols = list(range(1, len(gc) + 1)) if colors is None else list(colors)
    if n < 3:
        raise FactorError("Hamiltonian cycles need n >= 3")
    if len(cols) != n:
        raise FactorError(f"need n = {n} colors, got {len(cols)}")
    union = _union_rows(gc, cols)
    if any(r.bit_count() < 2 for r in union):
        return None
    matcher = _ColorMatcher(gc, cols)
    budget = _Budget(node_cap)
    pathv = [0]
    visited = 1

    def e_of(a: int, b: int) -> Edge:
        return (a + 1, b + 1) if a < b else (b + 1, a + 1)

    def rec() -> bool:
        nonlocal visited
        budget.tick()
        last = pathv[-1]
        if len(pathv) == n:
            if pathv[1] > last or not (union[last] & 1):
                return False
            e = e_of(last, 0)
            if matcher.add(e):
                return True
            return False
        free = ~visited & ((1 << n) - 1)
        # every unvisited vertex needs two usable neighbours among unvisited + path ends
        ends = (1 << last) | 1
        for x in range(n):
            if (free >> x) & 1 and (union[x] & (free | ends)).bit_count() < 2:
                return False
        for w in range(1, n):
            if not (free >> w) & 1 or not (union[last] >> w) & 1:
                continue
            e = e_of(last, w)
            if not matcher.add(e):
                continue
            pathv.append(w)
            visited |= 1 << w
            if rec():
                return True
            visited &= ~(1 << w)
            pathv.pop()
            matcher.remove(e)
        return False

    if not rec():
        return None
    return RainbowFactor.build(2, matcher.assignment())


# -- pull-back through one Kelmans step -------------------------------------------------


def ko_pair_collection(gc: GraphCollection, u: int, v: int) -> GraphCollection:
    return GraphCollection(gc.k, tuple(ko_pair(g, u, v).result for g in gc.graphs))


def pull_back(f: RainbowFactor, gc: GraphCollection, u: int, v: int) -> RainbowFactor:
    """Turn a rainbow factor of KO_{uv}(gc) into one of ``gc``.

    An offending assignment {u,w} -> r (missing from member r) has {v,w} in
    member r. If {v,w} is in the factor with color s the two colors trade
    edges; otherwise some {v,w'} (color t) with {u,w'} outside the factor
    exists by degree counting, and r, t are rewired to {v,w}, {u,w'}.
    """
    transformed = ko_pair_collection(gc, u, v)
    check = verify_rainbow(f, transformed)
    if not check:
        raise FactorError(f"factor is not valid for KO_{{{u}{v}}} of the collection: {check.reason}")
    by_color = dict((c, e) for e, c in f.assignments)
    color_of = {e: c for c, e in by_color.items()}
    limit = f.k * gc.n
    for _ in range(limit + 1):
        bad = next((c for c in sorted(by_color) if not gc[c].has_edge(*by_color[c])), None)
        if bad is None:
            return RainbowFactor.build(f.k, ((e, c) for c, e in by_color.items()))
        e_r = by_color[bad]
        if u not in e_r:
            raise FactorError(f"offending edge {e_r} does not touch u={u}; collection inconsistent")
        w = e_r[0] if e_r[1] == u else e_r[1]
        vw = norm_edge(v, w)
        if vw in color_of:
            s = color_of[vw]
            by_color[bad], by_color[s] = vw, e_r
            color_of[vw], color_of[e_r] = bad, s
            continue
        nbr_u = {x for e in color_of for x in e if u in e and x != u}
        # the partner's member must also hold {u,w'}; an edge rewired earlier
        # in this pass need not, and picking it would undo that rewiring
        options = [
            (x, color_of[e])
            for e in sorted(color_of)
            if v in e
            for x in e
            if x not in (v, u) and x not in nbr_u and gc[color_of[e]].has_edge(u, x)
        ]
        if not options:
            raise FactorError(f"no partner edge at v={v} for color {bad}")
        w2, t = options[0]
        uw2 = norm_edge(u, w2)
        del color_of[e_r], color_of[norm_edge(v, w2)]
        by_color[bad], by_color[t] = vw, uw2
        color_of[vw], color_of[uw2] = bad, t
    raise FactorError(f"pull-back exceeded {limit} rewiring steps")


def pull_back_chain(f: RainbowFactor, steps: Sequence[Any]) -> RainbowFactor:
    """Pull a factor of the final collection back through collection KO steps."""
    for step in reversed(steps):
        u, v = step.pair
        f = pull_back(f, step.before, u, v)
    return f
