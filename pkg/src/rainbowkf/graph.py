"""Labeled simple graphs on the vertex set {1, ..., n}.

Vertex labels carry meaning (the Kelmans machinery pushes edges toward low
labels), so nothing in this module ever permutes them silently. Storage is one
integer bitmask per vertex, 0-based internally; every public method speaks
1-based labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

Edge = tuple[int, int]

ISO_MAX_N = 16


class GraphError(ValueError):
    """Invalid graph construction or parameter."""


def norm_edge(a: int, b: int) -> Edge:
    if a == b:
        raise GraphError(f"loop at vertex {a}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("n must be positive")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match n")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full or (r >> i) & 1:
                raise GraphError(f"bad adjacency row for vertex {i + 1}")
            for j in _bits(r):
                if not (self.rows[j] >> i) & 1:
                    raise GraphError(f"asymmetric adjacency at ({i + 1},{j + 1})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> LabeledGraph:
        rows = [0] * n
        for e in edges:
            a, b = e
            if not (1 <= a <= n and 1 <= b <= n):
                raise GraphError(f"edge {tuple(e)} outside 1..{n}")
            if a == b:
                raise GraphError(f"loop at vertex {a}")
            rows[a - 1] |= 1 << (b - 1)
            rows[b - 1] |= 1 << (a - 1)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> LabeledGraph:
        return cls(n, (0,) * n)

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def has_edge(self, a: int, b: int) -> bool:
        return a != b and bool((self.rows[a - 1] >> (b - 1)) & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(j + 1 for j in _bits(self.rows[v - 1]))

    def degree(self, v: int) -> int:
        return self.rows[v - 1].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edges(self) -> list[Edge]:
        return [(i + 1, j + 1) for i, r in enumerate(self.rows) for j in _bits(r) if j > i]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def adjacency_matrix(self, dtype: type = np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for i, j in self.edges():
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return a

    def int_matrix(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def components(self) -> list[list[int]]:
        """Connected components as sorted label lists, found by label-ordered BFS."""
        seen = 0
        comps = []
        for s in range(self.n):
            if (seen >> s) & 1:
                continue
            comp_mask = 1 << s
            frontier = 1 << s
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.rows[v]
                frontier = nxt & ~comp_mask
                comp_mask |= nxt
            seen |= comp_mask
            comps.append([v + 1 for v in _bits(comp_mask)])
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees())

    # -- derived graphs ----------------------------------------------------

    def with_edges(self, edges: Iterable[Edge]) -> LabeledGraph:
        return LabeledGraph.from_edges(self.n, [*self.edges(), *edges])

    def without_edges(self, edges: Iterable[Edge]) -> LabeledGraph:
        drop = {norm_edge(*e) for e in edges}
        return LabeledGraph.from_edges(self.n, [e for e in self.edges() if e not in drop])

    def induced(self, vertices: Sequence[int]) -> LabeledGraph:
        """Induced subgraph relabeled to 1..len(vertices) in the given order."""
        pos = {v: i + 1 for i, v in enumerate(vertices)}
        return LabeledGraph.from_edges(
            len(vertices),
            [(pos[a], pos[b]) for a, b in self.edges() if a in pos and b in pos],
        )

    def relabel(self, perm: dict[int, int]) -> LabeledGraph:
        """Apply a vertex bijection given as ``old -> new``."""
        return LabeledGraph.from_edges(self.n, [(perm[a], perm[b]) for a, b in self.edges()])

    def is_subgraph_of(self, other: LabeledGraph) -> bool:
        return self.n == other.n and all(r & ~o == 0 for r, o in zip(self.rows, other.rows))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class GraphCollection:
    """Ordered graphs on a shared vertex set; colors are the 1-based positions."""

    k: int
    graphs: tuple[LabeledGraph, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise GraphError("k must be positive")
        if not self.graphs:
            raise GraphError("empty collection")
        n = self.graphs[0].n
        if any(g.n != n for g in self.graphs):
            raise GraphError("collection members must share the vertex count")

    @property
    def n(self) -> int:
        return self.graphs[0].n

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, color: int) -> LabeledGraph:
        """Member by 1-based color index."""
        if not 1 <= color <= len(self.graphs):
            raise IndexError(color)
        return self.graphs[color - 1]

    def __iter__(self) -> Iterator[LabeledGraph]:
        return iter(self.graphs)

    def is_theorem_sized(self) -> bool:
        return (self.k * self.n) % 2 == 0 and len(self.graphs) * 2 == self.k * self.n

    def require_theorem_sized(self) -> None:
        if (self.k * self.n) % 2:
            raise GraphError(f"k*n = {self.k * self.n} is odd")
        if len(self.graphs) * 2 != self.k * self.n:
            raise GraphError(
                f"collection has {len(self.graphs)} members, expected k*n/2 = {self.k * self.n // 2}"
            )


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- constructors -------------------------------------------------------------


def complete(n: int) -> LabeledGraph:
    full = (1 << n) - 1
    return LabeledGraph(n, tuple(full & ~(1 << i) for i in range(n)))


def cycle(n: int) -> LabeledGraph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return LabeledGraph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> LabeledGraph:
    """K_{1,leaves} with center 1."""
    return LabeledGraph.from_edges(leaves + 1, [(1, j) for j in range(2, leaves + 2)])


def embed(g: LabeledGraph, labels: Sequence[int], n: int) -> LabeledGraph:
    """Place ``g`` on ground set 1..n, mapping its vertex i to ``labels[i-1]``."""
    if len(labels) != g.n:
        raise GraphError("label count does not match graph order")
    if len(set(labels)) != len(labels):
        raise GraphError("labels must be distinct")
    return LabeledGraph.from_edges(n, [(labels[a - 1], labels[b - 1]) for a, b in g.edges()])


def clique_on(vertices: Iterable[int], n: int) -> LabeledGraph:
    vs = sorted(vertices)
    return LabeledGraph.from_edges(n, combinations(vs, 2))


def _check_support(g: LabeledGraph, support: frozenset[int]) -> None:
    for a, b in g.edges():
        if a not in support or b not in support:
            raise GraphError(f"edge ({a},{b}) leaves its declared vertex subset")


def union(g: LabeledGraph, s: Iterable[int], h: LabeledGraph, t: Iterable[int]) -> LabeledGraph:
    """Disjoint union of ``g`` (living on S) and ``h`` (on T), same ground set."""
    s, t = frozenset(s), frozenset(t)
    if g.n != h.n:
        raise GraphError("operands must share a ground set")
    if s & t:
        raise GraphError(f"vertex subsets overlap on {sorted(s & t)}")
    _check_support(g, s)
    _check_support(h, t)
    return LabeledGraph(g.n, tuple(a | b for a, b in zip(g.rows, h.rows)))


def join(g: LabeledGraph, s: Iterable[int], h: LabeledGraph, t: Iterable[int]) -> LabeledGraph:
    """Join: both edge sets plus every S-T pair."""
    s, t = frozenset(s), frozenset(t)
    base = union(g, s, h, t)
    return base.with_edges((a, b) for a in s for b in t)


def hnk(n: int, k: int, hub: int | None = None, clique_part: Iterable[int] | None = None) -> LabeledGraph:
    """H_{n,k} = K_{k-1} v (K_1 u K_{n-k}) with explicit labels.

    ``hub`` is the lone vertex of degree k-1 (default n); ``clique_part`` the
    k-1 vertices joined to everything (default 1..k-1).
    """
    if not 1 <= k < n:
        raise GraphError(f"need 1 <= k < n, got n={n}, k={k}")
    hub = n if hub is None else hub
    b = frozenset(range(1, k) if clique_part is None else clique_part)
    if not 1 <= hub <= n or any(not 1 <= v <= n for v in b):
        raise GraphError("labels outside 1..n")
    if hub in b:
        raise GraphError("hub lies inside the clique part")
    if len(b) != k - 1:
        raise GraphError(f"clique part must have {k - 1} vertices, got {len(b)}")
    c = frozenset(range(1, n + 1)) - b - {hub}
    rest = union(LabeledGraph.empty(n), {hub}, clique_on(c, n), c)
    return join(clique_on(b, n), b, rest, c | {hub})


def hnk_parts(n: int, k: int, hub: int | None = None, clique_part: Iterable[int] | None = None) -> list[list[int]]:
    """(A, B, C) parts of an H_{n,k} built with the same arguments as :func:`hnk`."""
    hub = n if hub is None else hub
    b = sorted(range(1, k) if clique_part is None else clique_part)
    c = [v for v in range(1, n + 1) if v != hub and v not in b]
    return [[hub], b, c]


def lemma_family_parts(n: int, k: int, p: int) -> list[list[int]]:
    """(B, I, C): join part {1..k+p-1}, independent top labels {n-p..n}, clique rest."""
    _check_lemma_params(n, k, p)
    b = list(range(1, k + p))
    ind = list(range(n - p, n + 1))
    c = list(range(k + p, n - p))
    return [b, ind, c]


def _check_lemma_params(n: int, k: int, p: int) -> None:
    if k < 2 or n < 4 * k - 1:
        raise GraphError(f"need k >= 2 and n >= 4k-1, got n={n}, k={k}")
    top = -(-(n - k) // 2) - 1
    if not 1 <= p <= top:
        raise GraphError(f"p={p} outside 1..{top}")


def lemma_family(n: int, k: int, p: int) -> LabeledGraph:
    """K_{k+p-1} v ((p+1)K_1 u K_{n-k-2p})."""
    b, ind, c = lemma_family_parts(n, k, p)
    rest = union(LabeledGraph.empty(n), ind, clique_on(c, n), c)
    return join(clique_on(b, n), b, rest, [*ind, *c])


# -- comparisons --------------------------------------------------------------


def is_identical(g: LabeledGraph, h: LabeledGraph) -> bool:
    return g.n == h.n and g.rows == h.rows


def _refine(graphs: Sequence[LabeledGraph], colors: list[list[int]]) -> list[list[int]]:
    """Joint colour refinement; colours stay comparable across the graphs."""
    ncolors = len({c for cs in colors for c in cs})
    while True:
        sigs = [
            [
                (cs[v], tuple(sorted(cs[u] for u in _bits(g.rows[v]))))
                for v in range(g.n)
            ]
            for g, cs in zip(graphs, colors)
        ]
        index = {s: i for i, s in enumerate(sorted({s for ss in sigs for s in ss}))}
        colors = [[index[s] for s in ss] for ss in sigs]
        if len(index) == ncolors:
            return colors
        ncolors = len(index)


def _histogram(cs: list[int]) -> list[int]:
    return sorted(cs)


def is_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    """Exact isomorphism test by refinement-guided individualisation.

    Both graphs are refined jointly so colours mean the same thing on each side;
    branching individualises one vertex of g against every candidate of h in the
    same cell. Refinement is isomorphism invariant, so the search is exact.
    """
    if g.n != h.n:
        return False
    if g.n > ISO_MAX_N:
        raise GraphError(f"isomorphism backend is exact only for n <= {ISO_MAX_N}, got {g.n}")
    if g.edge_count != h.edge_count or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    cg, ch = _refine((g, h), [[0] * g.n, [0] * h.n])
    return _iso_search(g, h, cg, ch)


def _iso_search(g: LabeledGraph, h: LabeledGraph, cg: list[int], ch: list[int]) -> bool:
    if _histogram(cg) != _histogram(ch):
        return False
    counts: dict[int, int] = {}
    for c in cg:
        counts[c] = counts.get(c, 0) + 1
    cell = min((c for c, m in counts.items() if m > 1), default=None)
    if cell is None:
        inv = {c: v for v, c in enumerate(ch)}
        phi = [inv[c] for c in cg]
        return all(
            ((g.rows[v] >> u) & 1) == ((h.rows[phi[v]] >> phi[u]) & 1)
            for v in range(g.n)
            for u in range(v + 1, g.n)
        )
    x = cg.index(cell)
    fresh = max(cg) + 1
    for y in (i for i, c in enumerate(ch) if c == cell):
        ng, nh = list(cg), list(ch)
        ng[x] = fresh
        nh[y] = fresh
        rg, rh = _refine((g, h), [ng, nh])
        if _iso_search(g, h, rg, rh):
            return True
    return False


def random_graph(n: int, p: float, rng: np.random.Generator) -> LabeledGraph:
    return LabeledGraph.from_edges(
        n, [e for e in combinations(range(1, n + 1), 2) if rng.random() < p]
    )


def random_hnk_copy(
    n: int, k: int, rng: np.random.Generator, hubs: Sequence[int] | None = None
) -> LabeledGraph:
    """Labeled H_{n,k} with hub drawn from ``hubs`` (default all) and a uniform clique part."""
    pool = list(range(1, n + 1)) if hubs is None else list(hubs)
    hub = int(rng.choice(pool))
    others = [v for v in range(1, n + 1) if v != hub]
    b = sorted(int(x) for x in rng.choice(others, k - 1, replace=False))
    return hnk(n, k, hub=hub, clique_part=b)
