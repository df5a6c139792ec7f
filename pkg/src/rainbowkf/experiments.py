"""Seeded batch experiments behind the ``rfl`` command line."""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .factors import (
    RainbowFactor,
    SearchBudgetExceeded,
    find_rainbow_k_factor,
    pull_back_chain,
    verify_rainbow,
)
from .graph import (
    GraphCollection,
    GraphError,
    LabeledGraph,
    hnk,
    is_identical,
    lemma_family,
    random_hnk_copy,
)
from .graphio import collection_to_obj, to_graph6
from .kelmans import ko_collection_steps
from .schedules import colliding_instance, disjointify_repair
from .spectral import Comparison, compare_radius_detailed, hnk_radius, spectral_radius


class Outcome(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    UNKNOWN = "Unknown"


@dataclass
class InstanceResult:
    instance_id: str
    outcome: Outcome
    params: dict[str, Any]
    diagnostics: dict[str, Any] = field(default_factory=dict)
    witness: dict[str, Any] | None = None

    def to_json(self) -> dict[str, Any]:
        out = {
            "id": self.instance_id,
            "outcome": self.outcome.value,
            "params": self.params,
            "diagnostics": self.diagnostics,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict[str, Any]
    instances: list[InstanceResult]
    wall_clock: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        c = {o.value: 0 for o in Outcome}
        for r in self.instances:
            c[r.outcome.value] += 1
        return c

    @property
    def ok(self) -> bool:
        return all(r.outcome is not Outcome.FAIL for r in self.instances)

    def summary(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "counts": self.counts,
            "wall_clock": round(self.wall_clock, 3),
        }

    def to_json(self) -> dict[str, Any]:
        return {**self.summary(), "instances": [r.to_json() for r in self.instances]}


def _run(tasks: Sequence[tuple], worker: Callable[..., InstanceResult], jobs: int) -> list[InstanceResult]:
    if jobs <= 1 or len(tasks) <= 1:
        results = [worker(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, *zip(*tasks)))
    return sorted(results, key=lambda r: r.instance_id)


def _report(name: str, params: dict[str, Any], tasks: Sequence[tuple], worker: Callable, jobs: int) -> ExperimentReport:
    t0 = time.perf_counter()
    results = _run(tasks, worker, jobs)
    return ExperimentReport(name, params, results, time.perf_counter() - t0)


def instance_rng(seed: int, *key: int) -> np.random.Generator:
    """Per-instance generator: the run seed plus a spawn key naming the instance."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


# -- H_{n,k} table ------------------------------------------------------------------


def hnk_rows(n_max: int, k_max: int, precision: float = 1e-10) -> list[dict[str, Any]]:
    rows = []
    for k in range(1, k_max + 1):
        for n in range(max(3, k + 1, 4 * k - 1), n_max + 1):
            iv = hnk_radius(n, k, precision)
            sandwich = n - 2 <= iv.lo and iv.hi < n - 1
            rows.append({
                "n": n,
                "k": k,
                "lo": f"{iv.lo.numerator}/{iv.lo.denominator}",
                "hi": f"{iv.hi.numerator}/{iv.hi.denominator}",
                "lo_float": float(iv.lo),
                "hi_float": float(iv.hi),
                "width": float(iv.width),
                "sandwich": bool(sandwich),
            })
    return rows


def hnk_table(n_max: int, k_max: int, precision: float = 1e-10) -> ExperimentReport:
    t0 = time.perf_counter()
    results = []
    for row in hnk_rows(n_max, k_max, precision):
        ok = row["k"] == 1 or row["sandwich"]
        results.append(InstanceResult(
            f"n{row['n']:03d}-k{row['k']}",
            Outcome.PASS if ok else Outcome.FAIL,
            {"n": row["n"], "k": row["k"]},
            row,
            None if ok else {"graph6": to_graph6(hnk(row["n"], row["k"]))},
        ))
    return ExperimentReport(
        "hnk-table", {"n_max": n_max, "k_max": k_max, "precision": precision}, results, time.perf_counter() - t0
    )


# -- lemma family scan ----------------------------------------------------------------


def lemma36_params(k_values: Iterable[int], n_values: Iterable[int]) -> list[tuple[int, int, int]]:
    out = []
    for k in k_values:
        for n in n_values:
            if k < 2 or n < 4 * k - 1:
                continue
            for p in range(1, -(-(n - k) // 2)):
                out.append((n, k, p))
    return out


def _lemma36_instance(n: int, k: int, p: int, tol: float) -> InstanceResult:
    g = lemma_family(n, k, p)
    h = hnk(n, k)
    cmp, route = compare_radius_detailed(g, h, tol=tol)
    diag = {"comparison": cmp.value, "path": route}
    if cmp is Comparison.LESS:
        return InstanceResult(f"n{n:03d}-k{k}-p{p:02d}", Outcome.PASS, {"n": n, "k": k, "p": p}, diag)
    witness = {
        "g": to_graph6(g),
        "h": to_graph6(h),
        "g_certificate": spectral_radius(g, tol).to_json(),
        "h_certificate": spectral_radius(h, tol).to_json(),
    }
    return InstanceResult(f"n{n:03d}-k{k}-p{p:02d}", Outcome.FAIL, {"n": n, "k": k, "p": p}, diag, witness)


def check_lemma36(
    k_values: Iterable[int],
    n_values: Iterable[int],
    *,
    p_values: Iterable[int] | None = None,
    tol: float = 1e-10,
    jobs: int = 1,
) -> ExperimentReport:
    k_values, n_values = list(k_values), list(n_values)
    params = lemma36_params(k_values, n_values)
    if p_values is not None:
        wanted = set(p_values)
        for n, k in {(n, k) for n, k, _ in params}:
            for p in wanted:
                if not 1 <= p <= -(-(n - k) // 2) - 1:
                    raise GraphError(f"p={p} outside 1..ceil((n-k)/2)-1 for n={n}, k={k}")
        params = [t for t in params if t[2] in wanted]
    tasks = [(n, k, p, tol) for n, k, p in params]
    return _report(
        "check-lemma36",
        {"k": k_values, "n": n_values, "p": None if p_values is None else sorted(set(p_values)), "tol": tol},
        tasks,
        _lemma36_instance,
        jobs,
    )


# -- theorem sampling ---------------------------------------------------------------------

CASES = ("a", "b", "c")


def sample_collection(case: str, n: int, k: int, rng: np.random.Generator, extra: float = 0.3) -> GraphCollection:
    """(a) labeled H_{n,k} copies, not all identical; (b) random supergraphs of
    such copies, not all equal to one H_{n,k}; (c) the all-identical extremal case."""
    m = k * n // 2
    if case == "c":
        return GraphCollection(k, tuple(hnk(n, k) for _ in range(m)))
    while True:
        members = [random_hnk_copy(n, k, rng) for _ in range(m)]
        if case == "b":
            grown = []
            for g in members:
                missing = [e for e in _non_edges(g) if rng.random() < extra]
                grown.append(g.with_edges(missing))
            members = grown
        if not all(is_identical(members[0], g) for g in members[1:]):
            return GraphCollection(k, tuple(members))
        if case == "b" and members[0].edge_count > hnk(n, k).edge_count:
            return GraphCollection(k, tuple(members))


def _non_edges(g: LabeledGraph) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, g.n + 1) for b in range(a + 1, g.n + 1) if not g.has_edge(a, b)]


def ko_route(gc: GraphCollection, node_cap: int | None = None) -> tuple[str, RainbowFactor | None]:
    """Search on the Kelmans-shifted collection, then pull the factor back step by step."""
    steps = ko_collection_steps(gc)
    shifted = steps[-1].after if steps else gc
    f = find_rainbow_k_factor(shifted, node_cap=node_cap)
    if f is None:
        return "no-factor-after-ko", None
    back = pull_back_chain(f, steps)
    if not verify_rainbow(back, gc):
        return "pull-back-invalid", back
    return "verified", back


def _theorem_instance(case: str, n: int, k: int, idx: int, seed: int, ko: bool, node_cap: int | None) -> InstanceResult:
    rng = instance_rng(seed, CASES.index(case), idx)
    gc = sample_collection(case, n, k, rng)
    iid = f"{case}-{idx:04d}"
    params = {"case": case, "n": n, "k": k, "sample": idx, "seed": seed, "spawn_key": [CASES.index(case), idx]}
    diag: dict[str, Any] = {}
    try:
        f = find_rainbow_k_factor(gc, node_cap=node_cap)
    except SearchBudgetExceeded as exc:
        diag["nodes"] = exc.nodes
        return InstanceResult(iid, Outcome.UNKNOWN, params, diag)
    diag["found"] = f is not None
    expect = case != "c"
    valid = f is None or bool(verify_rainbow(f, gc))
    if f is not None:
        diag["factor"] = f.to_json()
    if ko and expect:
        try:
            status, _ = ko_route(gc, node_cap)
        except SearchBudgetExceeded:
            status = "unknown"
        diag["ko_route"] = status
    if (f is not None) == expect and valid:
        return InstanceResult(iid, Outcome.PASS, params, diag)
    return InstanceResult(iid, Outcome.FAIL, params, diag, {"collection": collection_to_obj(gc)})


def check_theorem(
    n: int,
    k: int,
    samples: int,
    seed: int = 0,
    *,
    cases: Sequence[str] = CASES,
    ko: bool = True,
    node_cap: int | None = None,
    jobs: int = 1,
) -> ExperimentReport:
    if (k * n) % 2:
        raise GraphError(f"kn must be even, got n={n}, k={k}")
    if k < 1 or n < 4 * k - 1:
        raise GraphError(f"need n >= 4k-1, got n={n}, k={k}")
    tasks = []
    for case in cases:
        if case not in CASES:
            raise GraphError(f"unknown case {case!r}")
        count = 1 if case == "c" else samples
        tasks.extend((case, n, k, i, seed, ko, node_cap) for i in range(count))
    return _report(
        "check-theorem",
        {"n": n, "k": k, "samples": samples, "seed": seed, "cases": list(cases), "ko": ko},
        tasks,
        _theorem_instance,
        jobs,
    )


# -- repair instances -----------------------------------------------------------------------


def _repair_instance(n: int, idx: int, seed: int, node_cap: int | None) -> InstanceResult:
    rng = instance_rng(seed, n, idx)
    inst = colliding_instance(n, rng)
    trace: list = []
    f = disjointify_repair(inst.layers, inst.hc, trace=trace)
    route = "repair"
    iid = f"n{n:02d}-{idx:04d}"
    params = {"n": n, "sample": idx, "seed": seed, "spawn_key": [n, idx]}
    if f is None:
        route = "fallback"
        try:
            f = find_rainbow_k_factor(inst.hc.collection, node_cap=node_cap)
        except SearchBudgetExceeded as exc:
            return InstanceResult(iid, Outcome.UNKNOWN, params, {"route": route, "nodes": exc.nodes})
    tags: dict[str, int] = {}
    for step in trace:
        tags[step.tag] = tags.get(step.tag, 0) + 1
    diag = {"route": route, "shared": [list(e) for e in inst.shared], "steps": tags}
    if f is not None and verify_rainbow(f, inst.hc.collection):
        return InstanceResult(iid, Outcome.PASS, params, diag)
    witness = {
        "collection": collection_to_obj(inst.hc.collection),
        "layers": [layer.to_json() for layer in inst.layers],
    }
    return InstanceResult(iid, Outcome.FAIL, params, diag, witness)


def check_repair(
    n_values: Sequence[int], count: int, seed: int = 0, *, node_cap: int | None = None, jobs: int = 1
) -> ExperimentReport:
    """``count`` colliding-layer instances spread round-robin over ``n_values``."""
    tasks = [(n_values[i % len(n_values)], i, seed, node_cap) for i in range(count)]
    return _report("repair", {"n": list(n_values), "count": count, "seed": seed}, tasks, _repair_instance, jobs)
