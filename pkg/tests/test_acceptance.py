"""Acceptance criteria, one test each; every test records a PASS/FAIL verdict line."""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np

from rainbowkf.experiments import check_lemma36, check_repair, check_theorem
from rainbowkf.factors import find_k_factor, find_k_factor_backtrack, find_rainbow_k_factor
from rainbowkf.graph import GraphCollection, hnk, is_isomorphic, random_graph
from rainbowkf.kelmans import is_shift_stable, ko_full, ko_pair
from rainbowkf.poly import isolate_largest_root
from rainbowkf.schedules import even_schedule, schedule, schedule_certifies
from rainbowkf.spectral import Comparison, compare_radius, compare_radius_detailed, hnk_radius

from .test_factors import brute_rainbow_exists, random_collection

SEED = 20240611


def test_c1_hnk_sandwich(verdict):
    t0 = time.perf_counter()
    bad = []
    for k in range(2, 5):
        for n in range(4 * k - 1, 31):
            iv = hnk_radius(n, k, Fraction(1, 10**10))
            if not (n - 2 <= iv.lo and iv.hi < n - 1 and iv.width <= Fraction(1, 10**10)):
                bad.append((n, k))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    assert verdict("1 H_{n,k} radius sandwich", ok, f"violations={bad} time={dt:.2f}s")


def test_c2_lemma_family_below_hnk(verdict):
    rep = check_lemma36([2, 3, 4], range(7, 21))
    ok = rep.counts == {"Pass": len(rep.instances), "Fail": 0, "Unknown": 0} and rep.wall_clock < 60
    assert verdict("2 comparison family strictly below H_{n,k}", ok, f"{rep.counts} time={rep.wall_clock:.2f}s")


def test_c3_spot_roots(verdict):
    a = isolate_largest_root((4, -6, -4, 1), Fraction(1, 10**6))
    b = isolate_largest_root((8, -8, -3, 1), Fraction(1, 10**6))
    ok = (
        Fraction("5.03") < a.lo and a.hi < Fraction("5.04") and a.width <= Fraction(1, 10**6)
        and Fraction("4.40") < b.lo and b.hi < Fraction("4.41") and b.width <= Fraction(1, 10**6)
    )
    assert verdict("3 spot roots", ok, f"({float(a.lo):.7f}, {float(a.hi):.7f}) ({float(b.lo):.7f}, {float(b.hi):.7f})")


def test_c4_kelmans_properties(verdict):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    problems: list[str] = []
    strict = 0
    for i in range(500):
        n = int(rng.integers(2, 13))
        g = random_graph(n, float(rng.uniform(0.15, 0.8)), rng)
        u, v = (int(x) for x in rng.choice(range(1, n + 1), 2, replace=False))
        h = ko_pair(g, u, v).result
        if h.edge_count != g.edge_count:
            problems.append(f"{i}: edge count")
        if compare_radius(g, h) not in (Comparison.LESS, Comparison.EQUAL):
            problems.append(f"{i}: radius decreased")
        if g.is_connected() and not is_isomorphic(g, h):
            strict += 1
            cmp, path = compare_radius_detailed(g, h, force_exact=True)
            if cmp is not Comparison.LESS or path != "exact":
                problems.append(f"{i}: not strictly less")
        if ko_pair(h, u, v).result != h:
            problems.append(f"{i}: pair not idempotent")
        f = ko_full(g)
        if not is_shift_stable(f) or ko_full(f) != f:
            problems.append(f"{i}: full shift")
    dt = time.perf_counter() - t0
    ok = not problems and dt < 120
    assert verdict("4 Kelmans properties", ok, f"strict subsample={strict} problems={problems[:5]} time={dt:.1f}s")


def test_c5_search_oracles(verdict):
    rng = np.random.default_rng(SEED)
    rainbow_bad = 0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        k = int(rng.choice([1, 2]))
        if (k * n) % 2 or k >= n:
            k = 1 if n % 2 == 0 else 2
        gc = random_collection(rng, n, k, float(rng.uniform(0.3, 0.9)))
        rainbow_bad += (find_rainbow_k_factor(gc) is not None) != brute_rainbow_exists(gc, k)
    gadget_bad = 0
    for _ in range(200):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n))
        if (k * n) % 2:
            k -= 1
        if k == 0:
            k = 1 if n % 2 == 0 else 2
        if k >= n:
            continue
        g = random_graph(n, float(rng.uniform(0.3, 0.95)), rng)
        gadget_bad += (find_k_factor(g, k) is None) != (find_k_factor_backtrack(g, k) is None)
    ok = rainbow_bad == 0 and gadget_bad == 0
    assert verdict("5 search oracle equivalence", ok, f"rainbow disagreements={rainbow_bad} gadget disagreements={gadget_bad}")


def test_c6_theorem_desk_scale(verdict):
    cap = 10**7
    t0 = time.perf_counter()
    extremal = []
    for n, k in [(7, 2), (8, 2), (9, 2), (10, 2), (12, 3)]:
        gc = GraphCollection(k, tuple(hnk(n, k) for _ in range(k * n // 2)))
        extremal.append(find_rainbow_k_factor(gc, node_cap=cap) is None)
    found = total = ko_ok = 0
    routes: dict[str, int] = {}
    for n in (7, 8):
        rep = check_theorem(n, 2, 50, seed=SEED, cases=["a", "b"], node_cap=cap)
        for r in rep.instances:
            total += 1
            found += r.outcome.value == "Pass"
            route = r.diagnostics.get("ko_route", "unknown")
            routes[f"{r.params['case']}:{route}"] = routes.get(f"{r.params['case']}:{route}", 0) + 1
            ko_ok += route == "verified"
    dt = time.perf_counter() - t0
    ok = all(extremal) and found == total and ko_ok == total and dt < 600
    detail = f"extremal none={sum(extremal)}/5 found={found}/{total} ko route verified={ko_ok}/{total} {routes}"
    assert verdict("6 theorem desk scale", ok, detail)


def test_c7_schedule_certification(verdict):
    t0 = time.perf_counter()
    bad = []
    checked = 0
    for n in range(7, 17):
        for k in range(2, (n + 1) // 4 + 1):
            if n % 2 and k % 2:
                continue
            s = schedule(n, k)
            checked += 1
            if not (s.is_k_regular() and schedule_certifies(s)):
                bad.append((n, k))
            if n % 2 == 0 and even_schedule(n, k).entry(k, k) != (k, n):
                bad.append((n, k, "special"))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1
    assert verdict("7 schedule certification", ok, f"checked={checked} bad={bad} time={dt:.2f}s")


def test_c8_repair_pipeline(verdict):
    rep = check_repair([7, 8, 9, 10], 100, seed=SEED)
    direct = sum(r.diagnostics.get("route") == "repair" for r in rep.instances)
    ok = rep.counts["Pass"] == 100 and direct >= 80
    assert verdict("8 repair pipeline", ok, f"{rep.counts} repaired without fallback={direct}/100")
