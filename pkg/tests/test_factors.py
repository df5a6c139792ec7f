from __future__ import annotations

from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rainbowkf.factors import (
    FactorError,
    RainbowFactor,
    SearchBudgetExceeded,
    assign_colors,
    find_k_factor,
    find_k_factor_backtrack,
    find_rainbow_hamiltonian_cycle,
    find_rainbow_k_factor,
    find_rainbow_perfect_matching,
    ko_pair_collection,
    pull_back,
    pull_back_chain,
    verify_rainbow,
)
from rainbowkf.graph import GraphCollection, LabeledGraph, complete, cycle, hnk, random_graph, random_hnk_copy
from rainbowkf.kelmans import ko_collection_steps

from .conftest import graphs


def brute_k_factor_exists(g: LabeledGraph, k: int) -> bool:
    for sub in combinations(g.edges(), k * g.n // 2):
        if LabeledGraph.from_edges(g.n, sub).is_regular(k):
            return True
    return False


def brute_rainbow_exists(gc: GraphCollection, k: int) -> bool:
    """Every k-regular edge set of the union, every colour bijection; no pruning."""
    n, m = gc.n, len(gc)
    union = sorted({e for g in gc for e in g.edges()})
    for sub in combinations(union, m):
        if not LabeledGraph.from_edges(n, sub).is_regular(k):
            continue
        for perm in permutations(range(1, m + 1)):
            if all(gc[c].has_edge(*e) for e, c in zip(sub, perm)):
                return True
    return False


def random_collection(rng, n: int, k: int, p: float) -> GraphCollection:
    return GraphCollection(k, tuple(random_graph(n, p, rng) for _ in range(k * n // 2)))


# -- plain k-factors -------------------------------------------------------------------


def test_k_factor_examples():
    pm = find_k_factor(complete(4), 1)
    assert pm is not None and LabeledGraph.from_edges(4, pm).is_regular(1)
    assert find_k_factor(hnk(7, 2), 2) is None
    assert find_k_factor(cycle(6), 2) == cycle(6).edges()
    with pytest.raises(FactorError):
        find_k_factor(complete(5), 1)


@given(graphs(min_n=2, max_n=8), st.integers(1, 3))
def test_gadget_agrees_with_backtracking(g, k):
    if (k * g.n) % 2:
        return
    a = find_k_factor(g, k)
    b = find_k_factor_backtrack(g, k)
    assert (a is None) == (b is None)
    for f in (a, b):
        if f is not None:
            h = LabeledGraph.from_edges(g.n, f)
            assert h.is_regular(k) and h.is_subgraph_of(g)


@given(graphs(min_n=2, max_n=7), st.integers(1, 2))
def test_k_factor_matches_brute_force(g, k):
    if (k * g.n) % 2:
        return
    assert (find_k_factor(g, k) is not None) == brute_k_factor_exists(g, k)


# -- rainbow search --------------------------------------------------------------------


def test_rainbow_k2():
    f = find_rainbow_k_factor(GraphCollection(1, (complete(2),)))
    assert f == RainbowFactor(1, (((1, 2), 1),))


def test_identical_h72_has_none():
    gc = GraphCollection(2, tuple(hnk(7, 2) for _ in range(7)))
    assert find_rainbow_k_factor(gc) is None


def test_two_hubs_h72_has_factor():
    members = [hnk(7, 2) for _ in range(6)] + [hnk(7, 2, hub=3, clique_part=[5])]
    gc = GraphCollection(2, tuple(members))
    f = find_rainbow_k_factor(gc)
    assert f is not None and verify_rainbow(f, gc)


def test_rainbow_matching_examples():
    assert find_rainbow_perfect_matching(GraphCollection(1, (complete(4), complete(4)))) is not None
    h41 = hnk(4, 1, hub=1, clique_part=[])
    assert find_rainbow_perfect_matching(GraphCollection(1, (h41, h41))) is None
    mixed = GraphCollection(
        1, (hnk(6, 1, hub=1, clique_part=[]), hnk(6, 1, hub=2, clique_part=[]), complete(6))
    )
    f = find_rainbow_perfect_matching(mixed)
    assert f is not None and verify_rainbow(f, mixed)


def test_rainbow_cycle_examples():
    assert find_rainbow_hamiltonian_cycle(GraphCollection(2, tuple(complete(5) for _ in range(5)))) is not None
    assert find_rainbow_hamiltonian_cycle(GraphCollection(2, tuple(hnk(5, 2) for _ in range(5)))) is None
    c4 = cycle(4)
    gc = GraphCollection(2, (complete(4), complete(4), c4, c4))
    f = find_rainbow_hamiltonian_cycle(gc)
    assert f is not None and verify_rainbow(f, gc)
    cm = f.color_map()
    assert c4.has_edge(*cm[3]) and c4.has_edge(*cm[4])


def test_hamiltonian_cycle_is_connected(rng):
    for _ in range(30):
        gc = random_collection(rng, 7, 2, 0.6)
        f = find_rainbow_hamiltonian_cycle(gc)
        if f is None:
            continue
        assert verify_rainbow(f, gc)
        assert LabeledGraph.from_edges(7, f.edges).is_connected()


def test_search_agrees_with_exhaustive(rng):
    disagreements = 0
    for _ in range(200):
        n = int(rng.choice([2, 3, 4, 5, 6]))
        k = int(rng.choice([1, 2]))
        if (k * n) % 2 or k >= n:
            k = 1 if n % 2 == 0 else 2
        gc = random_collection(rng, n, k, float(rng.uniform(0.3, 0.9)))
        f = find_rainbow_k_factor(gc)
        if f is not None:
            assert verify_rainbow(f, gc)
        disagreements += (f is not None) != brute_rainbow_exists(gc, k)
    assert disagreements == 0


def test_forced_edges_are_respected():
    gc = GraphCollection(1, tuple(complete(6) for _ in range(3)))
    f = find_rainbow_k_factor(gc, forced=[(2, 5)])
    assert f is not None and (2, 5) in f.edges
    f = find_rainbow_k_factor(gc, forced=[(5, 6)])
    assert f is not None and (5, 6) in f.edges
    assert find_rainbow_k_factor(gc, forced=[(1, 2), (1, 3)]) is None


def test_color_slice():
    gc = GraphCollection(1, (complete(4), LabeledGraph.empty(4), complete(4), complete(4)))
    f = find_rainbow_k_factor(gc, colors=[3, 4])
    assert f is not None and sorted(f.colors) == [3, 4]
    assert verify_rainbow(f, gc, [3, 4])
    assert find_rainbow_k_factor(gc, colors=[1, 2]) is None


def test_node_cap_reports_unknown(monkeypatch):
    gc = GraphCollection(2, tuple(hnk(9, 2, hub=h, clique_part=[1 if h != 1 else 2]) for h in range(1, 10)))
    with pytest.raises(SearchBudgetExceeded):
        find_rainbow_k_factor(gc, node_cap=2)
    monkeypatch.setenv("RFL_NODE_CAP", "1")
    with pytest.raises(SearchBudgetExceeded):
        find_rainbow_k_factor(gc)


def test_assign_colors():
    gc = GraphCollection(1, (LabeledGraph.from_edges(4, [(1, 2)]), complete(4)))
    f = assign_colors([(3, 4), (1, 2)], gc, 1)
    assert f is not None and f.color_map() == {1: (1, 2), 2: (3, 4)}
    assert assign_colors([(3, 4), (1, 3)], gc, 1) is None


# -- verification ------------------------------------------------------------------------


def test_verify_diagnostics():
    gc = GraphCollection(1, (complete(4), LabeledGraph.from_edges(4, [(1, 2)])))
    good = RainbowFactor.build(1, [((1, 2), 2), ((3, 4), 1)])
    assert verify_rainbow(good, gc)
    reused = RainbowFactor.build(1, [((1, 2), 1), ((3, 4), 1)])
    assert "color reused" in verify_rainbow(reused, gc).reason
    absent = RainbowFactor.build(1, [((1, 2), 1), ((3, 4), 2)])
    assert "membership violated" in verify_rainbow(absent, gc).reason
    repeated = RainbowFactor.build(1, [((1, 2), 1), ((1, 2), 2)])
    assert "repeated edge" in verify_rainbow(repeated, gc).reason
    irregular = RainbowFactor.build(1, [((1, 2), 1), ((1, 3), 2)])
    assert "regular" in verify_rainbow(irregular, gc).reason


def test_factor_json_round_trip():
    f = RainbowFactor.build(1, [((3, 4), 1), ((1, 2), 2)])
    assert RainbowFactor.from_json(f.to_json()) == f
    with pytest.raises(FactorError):
        RainbowFactor.from_json({"k": 1})


# -- pull-back -------------------------------------------------------------------------------


def test_pull_back_example():
    gc = GraphCollection(1, (LabeledGraph.from_edges(4, [(2, 3)]), complete(4)))
    f = RainbowFactor.build(1, [((1, 3), 1), ((2, 4), 2)])
    assert verify_rainbow(f, ko_pair_collection(gc, 1, 2))
    back = pull_back(f, gc, 1, 2)
    assert back == RainbowFactor.build(1, [((2, 3), 1), ((1, 4), 2)])


def test_pull_back_identity_when_valid():
    gc = GraphCollection(1, (complete(4), complete(4)))
    f = find_rainbow_k_factor(gc)
    assert pull_back(f, gc, 1, 3) == f


def test_pull_back_rejects_foreign_factor():
    gc = GraphCollection(1, (LabeledGraph.from_edges(4, [(2, 3)]), LabeledGraph.from_edges(4, [(1, 4)])))
    f = RainbowFactor.build(1, [((1, 2), 1), ((3, 4), 2)])
    with pytest.raises(FactorError):
        pull_back(f, gc, 1, 2)


def test_pull_back_random(rng):
    done = 0
    while done < 200:
        n = int(rng.choice([4, 5, 6, 7, 8]))
        k = 2 if n % 2 else int(rng.choice([1, 2]))
        gc = random_collection(rng, n, k, 0.55)
        u, v = (int(x) for x in rng.choice(np.arange(1, n + 1), 2, replace=False))
        shifted = ko_pair_collection(gc, u, v)
        f = find_rainbow_k_factor(shifted)
        if f is None:
            continue
        back = pull_back(f, gc, u, v)
        assert verify_rainbow(back, gc)
        assert sorted(back.colors) == sorted(f.colors)
        done += 1


def test_pull_back_chain_on_supergraphs(rng):
    for _ in range(25):
        members = []
        for _ in range(7):
            g = random_hnk_copy(7, 2, rng)
            extra = [(a, b) for a in range(1, 8) for b in range(a + 1, 8) if not g.has_edge(a, b) and rng.random() < 0.3]
            members.append(g.with_edges(extra))
        gc = GraphCollection(2, tuple(members))
        steps = ko_collection_steps(gc)
        final = steps[-1].after if steps else gc
        f = find_rainbow_k_factor(final)
        if f is not None:
            assert verify_rainbow(pull_back_chain(f, steps), gc)
