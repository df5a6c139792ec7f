"""``rfl``: command-line driver for the rainbow k-factor workbench."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .experiments import ExperimentReport, check_lemma36, check_repair, check_theorem, hnk_rows
from .factors import (
    FactorError,
    RainbowFactor,
    SearchBudgetExceeded,
    find_rainbow_hamiltonian_cycle,
    find_rainbow_k_factor,
    find_rainbow_perfect_matching,
    verify_rainbow,
)
from .graph import GraphError, LabeledGraph, hnk, is_isomorphic, lemma_family
from .graphio import GraphFormatError, collection_from_json, parse_graph, to_graph6
from .kelmans import is_shift_stable, ko_full_steps, ko_pair
from .poly import char_poly, isolate_largest_root
from .schedules import RepairStep, ScheduleError, colliding_instance, disjointify_repair, schedule, schedule_certifies
from .spectral import SpectralCertificate, compare_radius_detailed, spectral_radius

EXIT_FAIL = 1
EXIT_USAGE = 2

SCENARIOS = {
    "colliding-matchings": 8,
    "colliding-cycles": 7,
}


class CliError(Exception):
    pass


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {source}: {exc.strerror}") from None


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True)


def _span(text: str) -> list[int]:
    """``a:b`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b or a,b,c, got {text!r}") from None


def _csv(rows: Sequence[dict[str, Any]], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _emit_report(report: ExperimentReport, fmt: str, out: io.TextIOBase) -> int:
    if fmt == "csv":
        keys = sorted({k for r in report.instances for k in r.params})
        rows = [
            {"id": r.instance_id, "outcome": r.outcome.value, **r.params, "diagnostics": _dump(r.diagnostics)}
            for r in report.instances
        ]
        out.write(_csv(rows, ["id", "outcome", *keys, "diagnostics"]))
    else:
        for r in report.instances:
            out.write(_dump(r.to_json()) + "\n")
        out.write(_dump({"summary": report.summary()}) + "\n")
    return 0 if report.ok else EXIT_FAIL


# -- subcommands -----------------------------------------------------------------------


def _graph_arg(args: argparse.Namespace) -> LabeledGraph:
    if args.hnk:
        return hnk(*args.hnk)
    if args.lemma:
        return lemma_family(*args.lemma)
    return parse_graph(_read(args.graph), args.input_format)


def cmd_radius(args: argparse.Namespace, out: io.TextIOBase) -> int:
    if args.compare:
        g, h = (parse_graph(_read(p), args.input_format) for p in args.compare)
        cmp, route = compare_radius_detailed(g, h, force_exact=args.exact, tol=args.tol)
        out.write(_dump({"result": cmp.value, "path": route}) + "\n")
        return 0
    g = _graph_arg(args)
    cert = spectral_radius(g, args.tol)
    if args.exact and cert.method != "sturm-isolated":
        p = char_poly(g.int_matrix())
        iv = isolate_largest_root(p, Fraction(args.tol), hint=float(cert.hi))
        cert = SpectralCertificate(iv.lo, iv.hi, "sturm-isolated", p.coeffs)
    out.write(_dump({"graph6": to_graph6(g), **cert.to_json()}) + "\n")
    return 0


def cmd_hnk_table(args: argparse.Namespace, out: io.TextIOBase) -> int:
    rows = hnk_rows(args.n_max, args.k_max, args.precision)
    if (args.format or "csv") == "csv":
        out.write(_csv(rows, ["n", "k", "lo", "hi", "lo_float", "hi_float", "width", "sandwich"]))
    else:
        for r in rows:
            out.write(_dump(r) + "\n")
    return 0 if all(r["sandwich"] or r["k"] == 1 for r in rows) else EXIT_FAIL


def cmd_check_lemma36(args: argparse.Namespace, out: io.TextIOBase) -> int:
    report = check_lemma36(args.k_range, args.n_range, p_values=args.p, tol=args.tol, jobs=args.jobs)
    return _emit_report(report, args.format or "json", out)


def cmd_check_theorem(args: argparse.Namespace, out: io.TextIOBase) -> int:
    report = check_theorem(
        args.n, args.k, args.samples, args.seed,
        cases=list(args.cases), ko=not args.no_ko, node_cap=args.node_cap, jobs=args.jobs,
    )
    return _emit_report(report, args.format or "json", out)


def cmd_check_repair(args: argparse.Namespace, out: io.TextIOBase) -> int:
    report = check_repair(args.n, args.count, args.seed, node_cap=args.node_cap, jobs=args.jobs)
    return _emit_report(report, args.format or "json", out)


def cmd_schedule(args: argparse.Namespace, out: io.TextIOBase) -> int:
    s = schedule(args.n, args.k)
    certified = schedule_certifies(s) if args.k >= 2 else None
    if args.format == "csv":
        rows = [
            {"i": i, "j": j, "color": s.color(i, j), "a": e[0], "b": e[1]}
            for (i, j), e in s.entries
        ]
        out.write(_csv(rows, ["i", "j", "color", "a", "b"]))
    else:
        out.write(_dump({**s.to_json(), "certified": certified, "k_regular": s.is_k_regular()}) + "\n")
    return 0


def cmd_repair_demo(args: argparse.Namespace, out: io.TextIOBase) -> int:
    n = SCENARIOS[args.scenario]
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    inst = colliding_instance(n, rng)
    out.write(_dump({
        "scenario": args.scenario,
        "n": n,
        "shared": [list(e) for e in inst.shared],
        "layers": [layer.to_json() for layer in inst.layers],
    }) + "\n")
    trace: list[RepairStep] = []
    f = disjointify_repair(inst.layers, inst.hc, trace=trace)
    route = "repair"
    if f is None:
        route = "fallback"
        f = find_rainbow_k_factor(inst.hc.collection, node_cap=args.node_cap)
        trace.append(RepairStep("fallback", (0, 0), ()))
    for step in trace:
        out.write(_dump({"step": step.to_json()}) + "\n")
    ok = f is not None and bool(verify_rainbow(f, inst.hc.collection))
    out.write(_dump({"route": route, "verify_rainbow": ok, "factor": None if f is None else f.to_json()}) + "\n")
    return 0 if ok else EXIT_FAIL


def cmd_ko(args: argparse.Namespace, out: io.TextIOBase) -> int:
    g = _graph_arg(args)
    if args.pair:
        traces = [ko_pair(g, *args.pair)]
    else:
        traces = ko_full_steps(g)
    result = traces[-1].result if traces else g
    out.write(_dump({
        "input": to_graph6(g),
        "result": to_graph6(result),
        "edges": [list(e) for e in result.edges()],
        "shift_stable": is_shift_stable(result),
        "isomorphic_to_input": is_isomorphic(g, result) if g.n <= 16 else None,
        "steps": [t.to_json() for t in traces if t.changed],
    }) + "\n")
    return 0


def cmd_find_rainbow(args: argparse.Namespace, out: io.TextIOBase) -> int:
    gc = collection_from_json(_read(args.collection))
    try:
        if args.kind == "matching":
            f: RainbowFactor | None = find_rainbow_perfect_matching(gc, node_cap=args.node_cap)
        elif args.kind == "cycle":
            f = find_rainbow_hamiltonian_cycle(gc, node_cap=args.node_cap)
        else:
            f = find_rainbow_k_factor(gc, node_cap=args.node_cap)
    except SearchBudgetExceeded as exc:
        out.write(_dump({"outcome": "Unknown", "nodes": exc.nodes}) + "\n")
        return 0
    if f is None:
        out.write(_dump({"outcome": "None"}) + "\n")
        return 0
    ok = verify_rainbow(f, gc)
    out.write(_dump({"outcome": "Some", "verified": ok.ok, "factor": f.to_json()}) + "\n")
    return 0 if ok else EXIT_FAIL


# -- parser --------------------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d(0), help="64-bit run seed (default 0)")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for batch experiments")
    p.add_argument("--tol", type=float, default=d(1e-10), help="certificate width (default 1e-10)")
    p.add_argument("--format", choices=["json", "csv"], default=d(None), help="output format")
    p.add_argument("--node-cap", type=int, default=d(None), help="search node cap (env RFL_NODE_CAP)")


def _graph_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", default="-", help="graph file (graph6 or edge-list JSON); - for stdin")
    p.add_argument("--input-format", choices=["auto", "graph6", "edge-list-json"], default="auto")
    p.add_argument("--hnk", nargs=2, type=int, metavar=("N", "K"), help="use H_{N,K} instead of an input")
    p.add_argument("--lemma", nargs=3, type=int, metavar=("N", "K", "P"), help="use the comparison family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius", parents=[common], help="certified spectral radius or comparison")
    _graph_inputs(p)
    p.add_argument("--compare", nargs=2, metavar=("G", "H"), help="compare two graphs instead")
    p.add_argument("--exact", action="store_true", help="use exact characteristic-polynomial isolation")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("hnk-table", parents=[common], help="certified radii of H_{n,k}")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--precision", type=float, default=1e-10)
    p.set_defaults(func=cmd_hnk_table)

    p = sub.add_parser("check-lemma36", parents=[common], help="comparison family below H_{n,k}")
    p.add_argument("--k-range", type=_span, default=_span("2:4"))
    p.add_argument("--n-range", type=_span, default=_span("7:20"))
    p.add_argument("--p", type=_span, default=None, help="restrict to these p values")
    p.set_defaults(func=cmd_check_lemma36)

    p = sub.add_parser("check-theorem", parents=[common], help="sampled rainbow factor existence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--cases", default="abc", help="subset of a, b, c")
    p.add_argument("--no-ko", action="store_true", help="skip the Kelmans pull-back route")
    p.set_defaults(func=cmd_check_theorem)

    p = sub.add_parser("check-repair", parents=[common], help="colliding-layer repair batch")
    p.add_argument("--n", type=_span, default=_span("7,8,9,10"))
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_check_repair)

    p = sub.add_parser("schedule", parents=[common], help="explicit factor schedule")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("repair-demo", parents=[common], help="trace the swap repair on one instance")
    p.add_argument("--scenario", choices=sorted(SCENARIOS), default="colliding-matchings")
    p.set_defaults(func=cmd_repair_demo)

    p = sub.add_parser("ko", parents=[common], help="Kelmans operation on a graph")
    _graph_inputs(p)
    p.add_argument("--pair", nargs=2, type=int, metavar=("U", "V"), help="a single KO_{UV} step")
    p.set_defaults(func=cmd_ko)

    p = sub.add_parser("find-rainbow", parents=[common], help="exact rainbow search on a collection")
    p.add_argument("collection", nargs="?", default="-", help='collection JSON {"k":..,"graphs":[..]}; - for stdin')
    p.add_argument("--kind", choices=["factor", "matching", "cycle"], default="factor")
    p.set_defaults(func=cmd_find_rainbow)
    return parser


def main(argv: Sequence[str] | None = None, out: io.TextIOBase | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout if out is None else out
    try:
        return args.func(args, out)
    except (CliError, GraphFormatError, GraphError, ScheduleError, FactorError, ValueError) as exc:
        print(f"rfl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
