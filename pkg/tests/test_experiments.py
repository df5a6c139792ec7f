from __future__ import annotations

import json
from fractions import Fraction

import pytest

from rainbowkf import experiments as ex
from rainbowkf.experiments import (
    ExperimentReport,
    Outcome,
    check_lemma36,
    check_repair,
    check_theorem,
    hnk_rows,
    hnk_table,
    instance_rng,
    lemma36_params,
    sample_collection,
)
from rainbowkf.factors import find_rainbow_k_factor
from rainbowkf.graph import GraphCollection, GraphError, complete, hnk, is_identical, path
from rainbowkf.graphio import collection_from_obj, from_graph6
from rainbowkf.spectral import Comparison, compare_radius


def canonical(report: ExperimentReport) -> str:
    obj = report.to_json()
    obj.pop("wall_clock")
    return json.dumps(obj, sort_keys=True)


def test_instance_rng_is_keyed():
    a = instance_rng(7, 1, 2).integers(0, 2**32, 4)
    b = instance_rng(7, 1, 2).integers(0, 2**32, 4)
    c = instance_rng(7, 2, 1).integers(0, 2**32, 4)
    assert (a == b).all() and not (a == c).all()


def test_hnk_rows():
    rows = {(r["n"], r["k"]): r for r in hnk_rows(12, 3)}
    assert rows[(7, 1)]["lo"] == rows[(7, 1)]["hi"] == "5/1"
    r = rows[(7, 2)]
    assert 5.03 < r["lo_float"] < r["hi_float"] < 5.04
    assert all(r["sandwich"] for (n, k), r in rows.items() if k >= 2)
    assert (10, 3) not in rows and (11, 3) in rows


def test_hnk_table_report():
    rep = hnk_table(14, 3)
    assert rep.ok and rep.counts["Fail"] == 0


def test_comparison_scan_params():
    assert lemma36_params([2], [7]) == [(7, 2, 1), (7, 2, 2)]
    assert all(n >= 4 * k - 1 for n, k, _ in lemma36_params([2, 3, 4], range(5, 21)))


def test_comparison_scan_example():
    rep = check_lemma36([2], [7], p_values=[1])
    (r,) = rep.instances
    assert r.outcome is Outcome.PASS and r.diagnostics["comparison"] == "Less"
    assert r.params == {"n": 7, "k": 2, "p": 1}


def test_comparison_scan_rejects_p_zero():
    with pytest.raises(GraphError):
        check_lemma36([2], [7], p_values=[0])


def test_comparison_scan_fail_witness_is_checkable(monkeypatch):
    monkeypatch.setattr(ex, "hnk", lambda n, k: path(n))
    rep = check_lemma36([2], [9], p_values=[2])
    (r,) = rep.instances
    assert r.outcome is Outcome.FAIL and not rep.ok
    g, h = from_graph6(r.witness["g"]), from_graph6(r.witness["h"])
    assert compare_radius(g, h) is not Comparison.LESS
    lo = Fraction(r.witness["g_certificate"]["lo"])
    hi = Fraction(r.witness["h_certificate"]["hi"])
    assert lo > hi


def test_sample_collection_cases(rng):
    a = sample_collection("a", 7, 2, rng)
    assert len(a) == 7 and not all(is_identical(a[1], g) for g in a)
    b = sample_collection("b", 8, 2, rng)
    assert all(g.edge_count >= hnk(8, 2).edge_count for g in b)
    c = sample_collection("c", 7, 2, rng)
    assert all(g == hnk(7, 2) for g in c)


def test_theorem_small_run():
    rep = check_theorem(7, 2, 4, seed=3)
    assert rep.ok and rep.counts == {"Pass": 9, "Fail": 0, "Unknown": 0}
    by_case = {}
    for r in rep.instances:
        by_case.setdefault(r.params["case"], []).append(r)
    assert [r.diagnostics["found"] for r in by_case["c"]] == [False]
    assert all(r.diagnostics["found"] for r in by_case["a"] + by_case["b"])
    assert {r.diagnostics["ko_route"] for r in by_case["b"]} <= {"verified", "no-factor-after-ko"}


def test_theorem_parameter_errors():
    with pytest.raises(GraphError):
        check_theorem(7, 3, 1)
    with pytest.raises(GraphError):
        check_theorem(6, 2, 1)
    with pytest.raises(GraphError):
        check_theorem(7, 2, 1, cases=["d"])


def test_theorem_fail_witness(monkeypatch):
    def fake(case, n, k, rng, extra=0.3):
        return GraphCollection(k, tuple(complete(n) for _ in range(k * n // 2)))

    monkeypatch.setattr(ex, "sample_collection", fake)
    rep = check_theorem(7, 2, 1, cases=["c"], ko=False)
    (r,) = rep.instances
    assert r.outcome is Outcome.FAIL
    gc = collection_from_obj(r.witness["collection"])
    assert find_rainbow_k_factor(gc) is not None


def test_theorem_unknown_on_tiny_cap():
    rep = check_theorem(8, 2, 2, seed=1, cases=["a"], ko=False, node_cap=1)
    assert rep.counts["Unknown"] >= 1


def test_reports_are_deterministic():
    a = check_theorem(7, 2, 3, seed=11)
    b = check_theorem(7, 2, 3, seed=11)
    assert canonical(a) == canonical(b)
    assert canonical(check_repair([7, 8], 6, seed=2)) == canonical(check_repair([7, 8], 6, seed=2))


def test_parallel_matches_serial():
    a = check_repair([7, 8, 9, 10], 8, seed=4)
    b = check_repair([7, 8, 9, 10], 8, seed=4, jobs=2)
    assert canonical(a) == canonical(b)


def test_report_sorted_and_counted():
    rep = check_repair([8], 5, seed=9)
    ids = [r.instance_id for r in rep.instances]
    assert ids == sorted(ids)
    assert rep.counts["Pass"] == 5
    assert all(r.diagnostics["route"] in ("repair", "fallback") for r in rep.instances)
