"""Command-line front end: ``svest <verb> ...``.

Structured output is JSON (sorted keys) unless ``--format table``.  Exit
codes: 0 success, 1 domain failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import twotank as tt
from .corpus import random_consistent_suite
from .decentralized import DecentralizedEstimator, compare_exhaustive
from .decomposition import (
    AggregationSuite,
    NotChainDecomposable,
    build_distributed,
    chain_partition,
    check_consistency,
    synthesize_suite,
)
from .estimator import brute_force_estimate, estimate
from .lcomplete import (
    COUNTING_CONVENTIONS,
    FiniteSource,
    LCompleteAutomaton,
    build_lcomplete,
    complexity_report,
)
from .machine import BudgetExceeded, FiniteStateMachine, MachineError, validate


class CommandError(Exception):
    """Domain failure reported with exit code 1."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


def _string(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _write(obj, path: str | None) -> None:
    if path:
        Path(path).write_text(_dumps(obj) + "\n")


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _flat_table(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out.extend(_flat_table(obj[k], f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flat_table(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, json.dumps(obj) if not isinstance(obj, str) else obj)]


def _emit(obj, fmt: str, table: str | None = None) -> None:
    if fmt == "table":
        if table is None:
            rows = _flat_table(obj)
            table = _table(rows, ("key", "value")) if rows else ""
        print(table)
    else:
        print(_dumps(obj))


def _load_machine(path: str) -> FiniteStateMachine:
    try:
        return FiniteStateMachine.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandError(f"cannot read machine {path}: {exc}") from None


def _load_suite(path: str) -> AggregationSuite:
    try:
        return AggregationSuite.load(path)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise CommandError(f"cannot read suite {path}: {exc}") from None


# -- verbs ---------------------------------------------------------------------


def cmd_validate(args) -> int:
    report = validate(_load_machine(args.machine))
    _emit(report.to_json(), args.format)
    return 0 if report.ok else 1


def cmd_estimate(args) -> int:
    machine = _load_machine(args.machine)
    w = _string(args.string)
    if args.oracle:
        pair = brute_force_estimate(machine, w, tau=args.tau, horizon=args.tau)
    else:
        pair = estimate(machine, w)
    _emit(pair.to_json(), args.format)
    return 0


def cmd_oracle(args) -> int:
    machine = _load_machine(args.machine)
    horizon = args.tau if args.horizon is None else args.horizon
    pair = brute_force_estimate(machine, _string(args.string), tau=args.tau, horizon=horizon)
    _emit(pair.to_json(), args.format)
    return 0


def cmd_decompose(args) -> int:
    machine = _load_machine(args.machine)
    if args.random:
        suite = random_consistent_suite(random.Random(args.seed), machine.alphabet, args.p)
    else:
        suite = synthesize_suite(chain_partition(machine), args.p)
    data = suite.to_json()
    _write(data, args.output)
    if not args.output:
        _emit(data, args.format)
    return 0


def cmd_chains(args) -> int:
    machine = _load_machine(args.machine)
    try:
        partition = chain_partition(machine)
    except NotChainDecomposable as exc:
        raise CommandError(
            str(exc),
            {"error": "NotChainDecomposable", "symbol": exc.symbol, "witness": [list(t) for t in exc.witness]},
        ) from None
    data = partition.to_json()
    rows = [(j, ",".join(b)) for j, b in enumerate(data["blocks"], 1)]
    _emit(data, args.format, _table(rows, ("block", "symbols")))
    return 0


def cmd_distribute(args) -> int:
    machine = _load_machine(args.machine)
    suite = _load_suite(args.suite)
    check = check_consistency(suite)
    if not check:
        print(f"warning: suite is not consistent ({check.witness[0]} and {check.witness[1]} collide)", file=sys.stderr)
    if args.k is not None:
        if not 1 <= args.k <= suite.p:
            raise CommandError(f"--k must lie in 1..{suite.p}")
        data = build_distributed(machine, suite.functions[args.k - 1]).machine.to_json()
    else:
        data = {"machines": [build_distributed(machine, agg).machine.to_json() for agg in suite]}
    _write(data, args.output)
    if not args.output:
        _emit(data, args.format)
    return 0


def cmd_decentralized(args) -> int:
    machine = _load_machine(args.machine)
    suite = _load_suite(args.suite)
    if args.verify is not None:
        report = compare_exhaustive(machine, suite, args.verify)
        _emit(report.to_json(), args.format)
        return 0 if report.ok else 1
    if args.string is None:
        raise CommandError("--string or --verify is required")
    executor = ThreadPoolExecutor(max_workers=args.jobs) if args.jobs > 1 else None
    try:
        est = DecentralizedEstimator(machine, suite, executor)
        results = est.run_trace(_string(args.string), compare=args.compare)
    finally:
        if executor is not None:
            executor.shutdown()
    data = [dict(r.to_json(), t=t) for t, r in enumerate(results)]
    rows = [
        (d["t"], d["symbol"], ",".join(d["fused"]["chi"]), ",".join(d["fused"]["rho"]), d.get("exact", ""))
        for d in data
    ]
    _emit(data, args.format, _table(rows, ("t", "symbol", "fused chi", "fused rho", "exact")))
    return 0


def _report_table(reports: dict) -> str:
    rows = [
        (c, r.state_count, r.annotation_size, r.distinct_count, r.distinct_annotation_size)
        for c, r in reports.items()
    ]
    return _table(rows, ("count", "|Z|", "n_chi", "distinct sets", "distinct n_chi"))


def _conventions(args) -> tuple[str, ...]:
    return (args.count,) if args.count else COUNTING_CONVENTIONS


def cmd_lcomplete(args) -> int:
    if args.twotank:
        if args.machine:
            raise CommandError("give either a machine file or --twotank")
        source = tt.TwoTankSource(args.view)
    elif args.machine:
        source = FiniteSource(_load_machine(args.machine))
    else:
        raise CommandError("a machine file or --twotank is required")
    auto = build_lcomplete(source, args.ell)
    if args.output:
        _write(auto.to_json(source.to_json), args.output)
    if args.report or args.output:
        reports = {c: complexity_report(auto, c) for c in _conventions(args)}
        _emit({"ell": args.ell, "reports": {c: r.to_json() for c, r in reports.items()}}, args.format,
              _report_table(reports))
    else:
        _emit(auto.to_json(source.to_json), args.format)
    return 0


def cmd_report(args) -> int:
    try:
        data = json.loads(Path(args.automaton).read_text())
        auto = LCompleteAutomaton.from_json(data)
    except (OSError, json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
        raise CommandError(f"cannot read automaton {args.automaton}: {exc}") from None
    reports = {c: complexity_report(auto, c) for c in _conventions(args)}
    _emit({"ell": auto.ell, "reports": {c: r.to_json() for c, r in reports.items()}}, args.format,
          _report_table(reports))
    return 0


def _load_trace(path: str | None, steps: int):
    if path is None:
        inputs, x0 = tt.DEFAULT_INPUTS, (0, 0)
    else:
        try:
            data = json.loads(Path(path).read_text())
            inputs = [tuple(int(v) for v in mu) for mu in data["inputs"]]
            x0 = tuple(data.get("x0", (0, 0)))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CommandError(f"cannot read trace {path}: {exc}") from None
        for mu in inputs:
            if len(mu) != 2 or not all(v in tt.LEVELS for v in mu):
                raise CommandError(f"input {list(mu)} must be a pair of levels in 1..3")
    if steps > len(inputs):
        raise CommandError(f"--steps {steps} exceeds the {len(inputs)} inputs of the trace")
    return list(inputs[:steps]), x0


def cmd_twotank(args) -> int:
    inputs, x0 = _load_trace(args.trace, args.steps)
    try:
        steps = tt.run_trace(args.ell, inputs, x0)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    trace = [s.to_json() for s in steps]
    if args.emit_sets:
        _write({"ell": args.ell, "steps": trace}, args.emit_sets)
    out: dict = {
        "ell": args.ell,
        "inputs": [list(mu) for mu in inputs],
        "steps": [
            {
                "t": s.t,
                "symbol": s.symbol,
                "contained": s.contained,
                "exact": s.exact,
                "vertices": len(s.monolithic),
            }
            for s in steps
        ],
    }
    table = _table(
        [(s.t, s.symbol, float(s.state[0]), float(s.state[1]), len(s.monolithic), s.contained, s.exact) for s in steps],
        ("t", "symbol", "x1", "x2", "vertices", "contained", "exact"),
    )
    if args.report:
        ells = sorted({2, 3, args.ell}) if args.all_ell else [args.ell]
        conventions = _conventions(args)
        report = {}
        blocks = []
        for ell in ells:
            tables = tt.complexity_table(ell, conventions, args.jobs)
            for c in conventions:
                report.setdefault(c, []).append(tt.complexity_row(ell, tables[c]))
        for c in conventions:
            rows = [
                (r["ell"], r["states"], r["n_chi"], r["states_1"], r["n_chi_1"], r["states_dec"], r["n_chi_dec"])
                for r in report[c]
            ]
            blocks.append(f"[{c}]\n" + _table(rows, ("l", "P |Z|", "P n_chi", "P1 |Z|", "P1 n_chi", "sum |Z|", "sum n_chi")))
        rows = [
            (r["ell"], r["distinct_sets"], r["n_chi_distinct"], r["distinct_sets_1"], r["n_chi_distinct_1"],
             r["distinct_sets_dec"], r["n_chi_distinct_dec"])
            for r in report[conventions[0]]
        ]
        blocks.append(f"[distinct sets, {conventions[0]}]\n"
                      + _table(rows, ("l", "P |Z|", "P n_chi", "P1 |Z|", "P1 n_chi", "sum |Z|", "sum n_chi")))
        out["report"] = report
        table = "\n\n".join(blocks)
    _emit(out, args.format, table)
    return 0 if all(s.contained and s.exact for s in steps) else 1


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker cap for parallel steps")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized fixtures")

    parser = argparse.ArgumentParser(prog="svest", description="Set-valued state estimation toolkit.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    p = sub.add_parser("validate", parents=[common], help="structural checks of a machine")
    p.add_argument("machine")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("estimate", parents=[common], help="compatible and predicted sets of a string")
    p.add_argument("machine")
    p.add_argument("--string", required=True, help="comma-separated symbols")
    p.add_argument("--tau", type=int, default=0, help="start time of the string (oracle only)")
    p.add_argument("--oracle", action="store_true", help="use run enumeration rooted at time 0")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", parents=[common], help="brute-force estimate by run enumeration")
    p.add_argument("machine")
    p.add_argument("--string", required=True)
    p.add_argument("--tau", type=int, default=0)
    p.add_argument("--horizon", type=int, default=None, help="backward steps enumerated before tau")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("decompose", parents=[common], help="aggregation suite from the chain partition")
    p.add_argument("machine")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("-o", "--output")
    p.add_argument("--random", action="store_true", help="random consistent suite instead")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("chains", parents=[common], help="partition the alphabet into chain blocks")
    p.add_argument("machine")
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("distribute", parents=[common], help="distributed machines of a suite")
    p.add_argument("machine")
    p.add_argument("suite")
    p.add_argument("--k", type=int, default=None, help="emit only the k-th machine (1-based)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("decentralized", parents=[common], help="fused estimates along a string")
    p.add_argument("machine")
    p.add_argument("suite")
    p.add_argument("--string")
    p.add_argument("--compare", action="store_true", help="also run the monolithic estimator")
    p.add_argument("--verify", type=int, metavar="N", help="compare on every string up to length N")
    p.set_defaults(func=cmd_decentralized)

    p = sub.add_parser("lcomplete", parents=[common], help="build an l-complete automaton")
    p.add_argument("machine", nargs="?")
    p.add_argument("--twotank", action="store_true")
    p.add_argument("--view", type=int, choices=(0, 1, 2), default=0, help="two-tank view: 0 monolithic, 1 or 2")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("-o", "--output")
    p.add_argument("--report", action="store_true")
    p.add_argument("--count", choices=COUNTING_CONVENTIONS)
    p.set_defaults(func=cmd_lcomplete)

    p = sub.add_parser("twotank", parents=[common], help="two-tank experiment")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--steps", type=int, default=len(tt.DEFAULT_INPUTS))
    p.add_argument("--trace", help='JSON {"x0": [0, 0], "inputs": [[2, 2], ...]} with input levels 1..3')
    p.add_argument("--report", action="store_true", help="complexity table of the three automata")
    p.add_argument("--all-ell", action="store_true", help="report for l = 2 and 3 as well")
    p.add_argument("--count", choices=COUNTING_CONVENTIONS)
    p.add_argument("--emit-sets", help="write exact window estimates as vertex lists")
    p.set_defaults(func=cmd_twotank)

    p = sub.add_parser("report", parents=[common], help="complexity report of an emitted automaton")
    p.add_argument("automaton")
    p.add_argument("--count", choices=COUNTING_CONVENTIONS)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except CommandError as exc:
        if exc.payload is not None:
            print(_dumps(exc.payload))
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MachineError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
