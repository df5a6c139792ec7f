"""Explicit factor schedules, hub-based factors and swap-based disjointification.

The collections handled here consist of labeled copies of H_{n,k}. A copy is
described by its hub (the vertex of degree k-1), the clique part B joined to
everything, and the rest C. Membership of an edge in a copy is then simple: an
edge avoiding the hub is always present, an edge at the hub only if its other
end lies in B.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

from .factors import (
    FactorError,
    RainbowFactor,
    assign_colors,
    find_k_factor,
    find_rainbow_hamiltonian_cycle,
    find_rainbow_k_factor,
    find_rainbow_perfect_matching,
    verify_rainbow,
)
from .graph import (
    Edge,
    GraphCollection,
    GraphError,
    LabeledGraph,
    is_identical,
    norm_edge,
    random_hnk_copy,
)


class ScheduleError(ValueError):
    pass


# -- schedules ---------------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    n: int
    k: int
    parity: str
    entries: tuple[tuple[tuple[int, int], Edge], ...]

    def entry(self, i: int, j: int) -> Edge:
        return dict(self.entries)[(i, j)]

    def color(self, i: int, j: int) -> int:
        """Member index carrying entry (i, j): row-major, the (0, j) row last."""
        if self.parity == "even":
            return (i - 1) * self.n // 2 + j
        if i == 0:
            return self.k * (self.n - 1) // 2 + j
        return (i - 1) * (self.n - 1) // 2 + j

    @property
    def special_index(self) -> tuple[int, int]:
        return (self.k, self.k) if self.parity == "even" else (self.k, self.k - 1)

    @property
    def special_color(self) -> int:
        return self.color(*self.special_index)

    def edges(self) -> list[Edge]:
        return [e for _, e in self.entries]

    def graph(self) -> LabeledGraph:
        return LabeledGraph.from_edges(self.n, self.edges())

    def is_k_regular(self) -> bool:
        edges = self.edges()
        if len(set(edges)) != len(edges) or len(edges) * 2 != self.k * self.n:
            return False
        return self.graph().is_regular(self.k)

    def as_factor(self) -> RainbowFactor:
        return RainbowFactor.build(self.k, ((e, self.color(i, j)) for (i, j), e in self.entries))

    def replace(self, index: tuple[int, int], edge: Sequence[int]) -> Schedule:
        e = norm_edge(*edge)
        return Schedule(
            self.n, self.k, self.parity,
            tuple((ij, e if ij == index else old) for ij, old in self.entries),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "parity": self.parity,
            "entries": [{"i": i, "j": j, "edge": list(e)} for (i, j), e in self.entries],
        }


def even_schedule(n: int, k: int) -> Schedule:
    """Rows i = 1..k of the even-order schedule; row i is a perfect matching."""
    if n % 2:
        raise ScheduleError(f"even schedule needs even n, got {n}")
    if not 1 <= k <= n // 2:
        # rows repeat once i exceeds n/2, so the union stops being simple
        raise ScheduleError(f"even schedule needs 1 <= k <= n/2, got k={k}, n={n}")
    half = n // 2
    entries = []
    for i in range(1, k + 1):
        for j in range(1, half + 1):
            e = (j, half + i - j) if j <= i - 1 else (j, n + i - j)
            entries.append(((i, j), norm_edge(*e)))
    return Schedule(n, k, "even", tuple(entries))


def odd_schedule(n: int, k: int) -> Schedule:
    """The (0, j) row plus rows i = 1..k, branches evaluated in order."""
    if n % 2 == 0:
        raise ScheduleError(f"odd schedule needs odd n, got {n}")
    if k % 2 or not 2 <= k <= (n + 1) // 2:
        # past (n+1)/2 the third branch runs off the vertex set
        raise ScheduleError(f"odd schedule needs even k in 2..(n+1)/2, got {k}")
    half = (n - 1) // 2
    entries: list[tuple[tuple[int, int], Edge]] = [((0, 1), norm_edge(1, (n + 1) // 2))]
    for j in range(2, k // 2 + 1):
        entries.append(((0, j), norm_edge(2 * j - 2, 2 * j - 1)))
    for i in range(1, k + 1):
        for j in range(1, half + 1):
            if i == 1:
                e = (j, n + 1 - j)
            elif i - 1 <= j:
                e = (j + 1, n + i - 1 - j)
            elif i >= 3 and j <= i - 2:
                e = (j, (n + 1) // 2 + i - 1 - j)
            else:  # pragma: no cover - the branches above cover every (i, j)
                raise ScheduleError(f"no branch for ({i},{j})")
            entries.append(((i, j), norm_edge(*e)))
    return Schedule(n, k, "odd", tuple(entries))


def schedule(n: int, k: int) -> Schedule:
    return even_schedule(n, k) if n % 2 == 0 else odd_schedule(n, k)


def _ceil_half(x: int) -> int:
    return -(-x // 2)


def closure_member(edge: Sequence[int], n: int, k: int) -> bool:
    """Is {a,b} forced into every shift-stable graph above the H_{n,k} threshold?

    Forced edges are {i, j} with i <= k-1, and everything dominated
    componentwise by a guaranteed edge {k+i, n-i}, 1 <= i <= ceil((n-k)/2)-1.
    """
    a, b = sorted(edge)
    if a == b:
        raise ScheduleError("loops are never closure members")
    if a <= k - 1:
        return True
    lo = max(1, a - k)
    hi = min(n - b, _ceil_half(n - k) - 1)
    return lo <= hi


def closure_graph(n: int, k: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [e for e in combinations(range(1, n + 1), 2) if closure_member(e, n, k)])


def schedule_certifies(s: Schedule) -> bool:
    special = s.special_index
    for ij, e in s.entries:
        if ij == special:
            if e != (s.k, s.n):
                return False
        elif not closure_member(e, s.n, s.k):
            return False
    return special in dict(s.entries)


# -- H_{n,k} copies ------------------------------------------------------------------


@dataclass(frozen=True)
class HnkParts:
    hub: int
    b: frozenset[int]
    c: frozenset[int]

    def has_edge(self, e: Edge) -> bool:
        x, y = e
        if x == y:
            return False
        if self.hub == x:
            return y in self.b
        if self.hub == y:
            return x in self.b
        return True


def decompose_hnk(g: LabeledGraph, k: int) -> HnkParts:
    """Recover (hub, B, C) of a labeled H_{n,k}; raise if g is no such copy."""
    n = g.n
    if not 1 <= k < n:
        raise GraphError(f"need 1 <= k < n, got n={n}, k={k}")
    if k == n - 1:
        raise GraphError("H_{n,n-1} is complete minus nothing distinguished; decomposition not unique")
    low = [v for v in g.vertices if g.degree(v) == k - 1]
    if len(low) != 1:
        raise GraphError(f"expected exactly one vertex of degree {k - 1}, found {len(low)}")
    hub = low[0]
    b = g.neighbors(hub)
    rest = [v for v in g.vertices if v != hub]
    for x, y in combinations(rest, 2):
        if not g.has_edge(x, y):
            raise GraphError(f"not an H_{{{n},{k}}} copy: {x} and {y} are non-adjacent away from the hub")
    return HnkParts(hub, frozenset(b), frozenset(rest) - b)


@dataclass(frozen=True)
class HubCollection:
    collection: GraphCollection
    parts: tuple[HnkParts, ...]
    member_k: int

    @classmethod
    def from_collection(cls, gc: GraphCollection, member_k: int | None = None) -> HubCollection:
        mk = gc.k if member_k is None else member_k
        return cls(gc, tuple(decompose_hnk(g, mk) for g in gc), mk)

    @property
    def n(self) -> int:
        return self.collection.n

    @property
    def k(self) -> int:
        return self.collection.k

    def hub(self, color: int) -> int:
        return self.parts[color - 1].hub

    def all_identical(self) -> bool:
        first = self.collection.graphs[0]
        return all(is_identical(first, g) for g in self.collection.graphs[1:])

    def groups(self) -> list[tuple[int, list[int]]]:
        """(hub, colors) groups, larger groups first, ties by hub label."""
        by_hub: dict[int, list[int]] = defaultdict(list)
        for c, p in enumerate(self.parts, start=1):
            by_hub[p.hub].append(c)
        return sorted(by_hub.items(), key=lambda it: (-len(it[1]), it[0]))


def _distinct_representatives(
    colors: Sequence[int], sets: dict[int, Sequence[int]], size: int
) -> list[tuple[int, int]] | None:
    """Pick ``size`` (color, vertex) pairs with distinct colors and distinct vertices."""
    owner: dict[int, int] = {}

    def augment(c: int, seen: set[int]) -> bool:
        for v in sorted(sets[c]):
            if v in seen:
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = c
                return True
        return False

    matched = 0
    for c in colors:
        if augment(c, set()):
            matched += 1
            if matched == size:
                break
    if matched < size:
        return None
    pairs = sorted((c, v) for v, c in owner.items())
    return pairs[:size]


def hub_layer(hc: HubCollection, colors: Sequence[int], degree: int) -> RainbowFactor:
    """Rainbow ``degree``-factor of members that all share one hub.

    Picks distinct hub neighbours v_1..v_d from distinct members' B-sets, takes
    a d-factor of K_d(B') v ({hub} u K_{n-d-1}) (which must use every hub edge),
    gives hub edge {hub, v_i} to its member and hands the remaining edges,
    all avoiding the hub, to the remaining members in index order.
    """
    colors = sorted(colors)
    n = hc.n
    if len(colors) * 2 != degree * n:
        raise FactorError(f"a {degree}-factor needs {degree * n // 2} members, got {len(colors)}")
    hubs = {hc.hub(c) for c in colors}
    if len(hubs) != 1:
        raise FactorError("hub layer needs members sharing one hub")
    hub = hubs.pop()
    reps = _distinct_representatives(colors, {c: hc.parts[c - 1].b for c in colors}, degree)
    if reps is None:
        raise FactorError("no system of distinct representatives for the hub neighbours")
    rest = [v for v in range(1, n + 1) if v != hub]
    h = LabeledGraph.from_edges(n, [*combinations(rest, 2), *((hub, v) for _, v in reps)])
    f = find_k_factor(h, degree)
    if f is None:
        raise FactorError(f"no {degree}-factor in the hub construction (n={n})")
    by_vertex = {v: c for c, v in reps}
    pairs = []
    others = []
    for e in f:
        if hub in e:
            v = e[0] if e[1] == hub else e[1]
            pairs.append((e, by_vertex[v]))
        else:
            others.append(e)
    spare = [c for c in colors if c not in set(by_vertex.values())]
    pairs.extend(zip(others, spare))
    return RainbowFactor.build(degree, pairs)


def hub_factor(hc: HubCollection) -> RainbowFactor:
    """Rainbow k-factor when every member has the same hub and not all coincide."""
    if len({p.hub for p in hc.parts}) != 1:
        raise FactorError("hub_factor needs all hubs equal")
    if hc.all_identical():
        raise FactorError("all members identical: no rainbow k-factor exists")
    return hub_layer(hc, range(1, len(hc.collection) + 1), hc.k)


# -- disjointification ------------------------------------------------------------------


@dataclass
class RepairStep:
    tag: str
    collision: Edge
    colors: tuple[int, ...]
    rewired: dict[int, tuple[Edge, Edge]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "tag": self.tag,
            "collision": list(self.collision),
            "colors": list(self.colors),
            "rewired": {str(c): [list(a), list(b)] for c, (a, b) in self.rewired.items()},
        }


class RepairError(ValueError):
    pass


class _Workspace:
    """Colour -> edge map tolerating repeated edges while swaps are in flight."""

    def __init__(self, layers: Sequence[RainbowFactor], hc: HubCollection):
        self.hc = hc
        self.edge_of: dict[int, Edge] = {}
        self.layer_of: dict[int, int] = {}
        for li, layer in enumerate(layers):
            for e, c in layer.assignments:
                if c in self.edge_of:
                    raise RepairError(f"color {c} appears in two layers")
                self.edge_of[c] = e
                self.layer_of[c] = li
        self.count = Counter(self.edge_of.values())

    def member_has(self, c: int, e: Edge) -> bool:
        return e[0] != e[1] and self.hc.parts[c - 1].has_edge(e)

    def present(self, a: int, b: int) -> bool:
        return a != b and self.count[norm_edge(a, b)] > 0

    def collisions(self) -> list[tuple[Edge, list[int]]]:
        """Repeated edges in lexicographic order, holders sorted by (layer, color)."""
        out = []
        for e in sorted(e for e, m in self.count.items() if m > 1):
            holders = [c for c, x in self.edge_of.items() if x == e]
            out.append((e, sorted(holders, key=lambda c: (self.layer_of[c], c))))
        return out

    def colors_in_scan_order(self) -> list[int]:
        return sorted(self.edge_of, key=lambda c: (self.layer_of[c], self.edge_of[c], c))

    def apply(self, new: dict[int, Edge]) -> dict[int, tuple[Edge, Edge]]:
        changes = {}
        for c, e in new.items():
            e = norm_edge(*e)
            old = self.edge_of[c]
            self.count[old] -= 1
            if self.count[old] == 0:
                del self.count[old]
            self.count[e] += 1
            self.edge_of[c] = e
            changes[c] = (old, e)
        return changes

    def valid(self, new: dict[int, Edge]) -> bool:
        return all(a != b and self.member_has(c, norm_edge(a, b)) for c, (a, b) in new.items())


def _partners(ws: _Workspace, v: int, v2: int, avoid: set[int], exclude: set[int]) -> list[int]:
    """Colours whose edge ww' avoids ``avoid`` and has no edge to v or v' in the union."""
    out = []
    for c in ws.colors_in_scan_order():
        if c in exclude:
            continue
        w, w2 = ws.edge_of[c]
        if w in avoid or w2 in avoid:
            continue
        if any(ws.present(a, b) for a in (v, v2) for b in (w, w2)):
            continue
        out.append(c)
    return out


def _case1(ws: _Workspace, e: Edge, r: int, s: int, partners: list[int]) -> dict[int, Edge] | None:
    v, v2 = e
    for t in partners:
        w, w2 = ws.edge_of[t]
        for mover in (s, r):
            for a, b in ((v, v2), (v2, v)):
                for x, y in ((w, w2), (w2, w)):
                    new = {mover: (a, x), t: (b, y)}
                    if ws.valid(new):
                        return new
    return None


def _hub_conflict(ws: _Workspace, e: Edge, s: int, partners: list[int]) -> tuple[str, dict[int, Edge]] | None:
    """Subcase rewirings for a collision at the hub of the later colour's member."""
    hub = ws.hc.hub(s)
    if hub not in e:
        return None
    v2 = e[0] if e[1] == hub else e[1]
    layer = ws.layer_of[s]
    same_layer = [c for c in ws.colors_in_scan_order() if ws.layer_of[c] == layer and c != s]
    b_s = ws.hc.parts[s - 1].b

    def ok(cand: dict[int, Edge]) -> bool:
        # a move that hands the collided edge to another colour resolves nothing
        return ws.valid(cand) and all(norm_edge(*x) != e for x in cand.values())

    for c4 in same_layer:
        h4 = ws.hc.hub(c4)
        if h4 == hub:
            continue
        a, b = ws.edge_of[c4]
        for x, x2 in ((a, b), (b, a)):
            if x2 in (h4, v2) or x == hub:
                continue
            if x2 != hub:
                # subcase 2.1
                if v2 != x:
                    cand = {s: (x, v2), c4: (hub, x2)}
                    if ok(cand):
                        return "subcase2.1", cand
                    continue
                for t in partners:
                    if t == c4:
                        continue
                    w, w2 = ws.edge_of[t]
                    for ww, ww2 in ((w, w2), (w2, w)):
                        cand = {s: (ww, v2), c4: (hub, x2), t: (v2, ww2)}
                        if ok(cand):
                            return "subcase2.1", cand
                continue
            # subcase 2.2: the edge of c4 is x-hub
            if x in b_s:
                for t in partners:
                    if t == c4:
                        continue
                    w, w2 = ws.edge_of[t]
                    for ww, ww2 in ((w, w2), (w2, w)):
                        if ww == h4:
                            continue
                        cand = {s: (hub, x), c4: (ww, hub), t: (v2, ww2)}
                        if ok(cand):
                            return "subcase2.2", cand
                continue
            for y in sorted(b_s):
                if ws.present(hub, y):
                    continue
                for c5 in same_layer:
                    if y not in ws.edge_of[c5]:
                        continue
                    y2 = ws.edge_of[c5][0] if ws.edge_of[c5][1] == y else ws.edge_of[c5][1]
                    if y2 == v2:
                        continue
                    h5 = ws.hc.hub(c5)
                    if h5 != hub and y != h5:
                        cand = {s: (v2, y2), c5: (hub, y)}
                    else:
                        cand = {s: (hub, y), c5: (v2, y2)}
                    if ok(cand):
                        return "subcase2.2", cand
    return None


def _resolve(ws: _Workspace, e: Edge, r: int, s: int) -> tuple[str, dict[int, Edge]] | None:
    v, v2 = e
    partners = _partners(ws, v, v2, {v, v2, ws.hc.hub(s)}, {r, s})
    new = _case1(ws, e, r, s, partners)
    if new is not None:
        return "case1", new
    found = _hub_conflict(ws, e, s, partners)
    if found is not None:
        return found
    # below the counting bounds the hub of s may be the only spare vertex;
    # membership is checked directly, so the exclusion can be dropped
    loose = _partners(ws, v, v2, {v, v2}, {r, s})
    new = _case1(ws, e, r, s, loose)
    return None if new is None else ("case1-relaxed", new)


def disjointify_repair(
    layers: Sequence[RainbowFactor],
    hc: HubCollection,
    *,
    cap: int | None = None,
    trace: list[RepairStep] | None = None,
) -> RainbowFactor | None:
    """Merge individually valid layers into one edge-disjoint rainbow factor.

    Collisions are resolved one at a time, taking the lowest repeated edge that
    some rule can resolve. The default move
    trades the collided edge against a partner edge ww' far from it; when the
    collision sits at the hub of the later member and no such trade is valid,
    a second edge of the same layer is brought in. Returns None when no rule
    applies or after ``cap`` steps (default k^2 n^2), leaving the caller to
    fall back to exact search.
    """
    if not layers:
        raise RepairError("no layers to merge")
    for li, layer in enumerate(layers):
        cols = layer.colors
        check = verify_rainbow(layer, hc.collection, cols)
        if not check:
            raise RepairError(f"layer {li} is not a valid rainbow factor: {check.reason}")
    ws = _Workspace(layers, hc)
    k_total = sum(layer.k for layer in layers)
    n = hc.n
    cap = k_total * k_total * n * n if cap is None else cap
    steps = 0
    while True:
        pending = ws.collisions()
        if not pending:
            break
        if steps >= cap:
            if trace is not None:
                trace.append(RepairStep("cap", pending[0][0], tuple(pending[0][1])))
            return None
        steps += 1
        move = None
        for e, holders in pending:
            move = _resolve(ws, e, holders[0], holders[1])
            if move is not None:
                break
        if move is None:
            if trace is not None:
                trace.append(RepairStep("stuck", pending[0][0], tuple(pending[0][1][:2])))
            return None
        tag, new = move
        changes = ws.apply(new)
        if trace is not None:
            trace.append(RepairStep(tag, e, (holders[0], holders[1]), changes))
    f = RainbowFactor.build(k_total, ((e, c) for c, e in ws.edge_of.items()))
    all_colors = sorted(ws.edge_of)
    if not verify_rainbow(f, hc.collection, all_colors):
        raise RepairError("repair produced an invalid factor")  # pragma: no cover - invariant
    return f


# -- the layered construction for collections of H_{n,k} copies --------------------------


@dataclass
class LayeredResult:
    factor: RainbowFactor | None
    layers: list[RainbowFactor]
    route: str
    trace: list[RepairStep] = field(default_factory=list)

    @property
    def used_fallback(self) -> bool:
        return self.route == "fallback"


def _hub_isolated(hc: HubCollection) -> GraphCollection:
    """Each member with its hub's edges removed (a labeled H_{n,1})."""
    members = []
    for g, p in zip(hc.collection, hc.parts):
        members.append(g.without_edges((p.hub, v) for v in p.b))
    return GraphCollection(1, tuple(members))


def build_layers(hc: HubCollection, node_cap: int | None = None) -> list[RainbowFactor]:
    """Per-hub layers plus matching / Hamiltonian-cycle layers for the remainder."""
    gc = hc.collection
    n = gc.n
    gc.require_theorem_sized()
    if hc.all_identical():
        raise FactorError("all members identical")
    groups = hc.groups()
    if len(groups) == 1:
        return [hub_factor(hc)]
    per = n // 2 if n % 2 == 0 else n
    layers = []
    used: set[int] = set()
    for _hub, cols in groups:
        mult = len(cols) // per
        if mult == 0:
            continue
        take = cols[: mult * per]
        degree = mult if n % 2 == 0 else 2 * mult
        layers.append(hub_layer(hc, take, degree))
        used.update(take)
    rest = [c for c in range(1, len(gc) + 1) if c not in used]
    reduced = _hub_isolated(hc) if n % 2 == 0 else None
    for start in range(0, len(rest), per):
        chunk = rest[start:start + per]
        if n % 2 == 0:
            m = find_rainbow_perfect_matching(reduced, colors=chunk, node_cap=node_cap)
        else:
            m = find_rainbow_hamiltonian_cycle(gc, colors=chunk, node_cap=node_cap)
        if m is None:
            raise FactorError(f"no rainbow {'matching' if n % 2 == 0 else 'Hamiltonian cycle'} on colors {chunk}")
        layers.append(m)
    return layers


def layered_rainbow_factor(hc: HubCollection, node_cap: int | None = None) -> LayeredResult:
    """Rainbow k-factor of H_{n,k} copies that are not all identical.

    Tries the layered construction with swap repair first and falls back to
    exact search when a layer cannot be built or the repair gives up.
    """
    trace: list[RepairStep] = []
    try:
        layers = build_layers(hc, node_cap)
    except FactorError:
        layers = []
    if layers:
        if len(layers) == 1:
            return LayeredResult(layers[0], layers, "direct", trace)
        f = disjointify_repair(layers, hc, trace=trace)
        if f is not None:
            return LayeredResult(f, layers, "repair", trace)
    f = find_rainbow_k_factor(hc.collection, node_cap=node_cap)
    trace.append(RepairStep("fallback", (0, 0), ()))
    return LayeredResult(f, layers, "fallback", trace)


# -- colliding-layer instances ------------------------------------------------------


@dataclass
class CollidingInstance:
    hc: HubCollection
    layers: list[RainbowFactor]
    shared: list[Edge]


def _shared_edges(layers: Sequence[RainbowFactor]) -> list[Edge]:
    seen: Counter[Edge] = Counter()
    for layer in layers:
        seen.update(layer.edges)
    return sorted(e for e, m in seen.items() if m > 1)


def _relabelled(edges: Sequence[Edge], n: int, rng: Any, count: int = 200) -> list[list[Edge]]:
    """Images of an edge set under ``count`` random label permutations."""
    out = []
    for _ in range(count):
        perm = [0, *(int(x) + 1 for x in rng.permutation(n))]
        out.append([norm_edge(perm[a], perm[b]) for a, b in edges])
    return out


def colliding_instance(n: int, rng: Any, max_tries: int = 200, member_k: int = 2) -> CollidingInstance:
    """Two individually valid layers over H_{n,member_k} copies sharing at least one edge.

    Even n: n members, two rainbow perfect matchings (hub edges avoided), the
    second forced through an edge of the first. Odd n: 2n members and two
    rainbow Hamiltonian cycles; the second is whichever colourable cycle
    (a fresh search or a random relabelling of the first) overlaps it least.
    """
    for _ in range(max_tries):
        hubs = [int(h) for h in rng.choice(range(1, n + 1), int(rng.integers(2, 4)), replace=False)]
        if n % 2 == 0:
            members = tuple(random_hnk_copy(n, member_k, rng, hubs) for _ in range(n))
            hc = HubCollection.from_collection(GraphCollection(2, members), member_k=member_k)
            reduced = _hub_isolated(hc)
            half = n // 2
            first = find_rainbow_perfect_matching(reduced, colors=range(1, half + 1))
            if first is None:
                continue
            second = None
            for e in first.edges:
                second = find_rainbow_k_factor(reduced, 1, colors=range(half + 1, n + 1), forced=[e])
                if second is not None:
                    break
            if second is None:
                continue
            layers = [first, second]
        else:
            members = tuple(random_hnk_copy(n, member_k, rng, hubs) for _ in range(2 * n))
            hc = HubCollection.from_collection(GraphCollection(4, members), member_k=member_k)
            gc = hc.collection
            first = find_rainbow_hamiltonian_cycle(gc, colors=range(1, n + 1))
            if first is None:
                continue
            # keep the overlap as small as possible while still colliding
            base = set(first.edges)
            candidates = []
            found = find_rainbow_hamiltonian_cycle(gc, colors=range(n + 1, 2 * n + 1))
            if found is not None:
                candidates.append(found.edges)
            candidates.extend(_relabelled(first.edges, n, rng))
            candidates = [c for c in candidates if set(c) & base]
            candidates.sort(key=lambda c: len(set(c) & base))
            second = None
            for image in candidates:
                second = assign_colors(image, gc, 2, range(n + 1, 2 * n + 1))
                if second is not None:
                    break
            if second is None:
                continue
            layers = [first, second]
        shared = _shared_edges(layers)
        if shared:
            return CollidingInstance(hc, layers, shared)
    raise FactorError(f"no colliding instance found for n={n} in {max_tries} tries")
