"""Decentralized estimation: p distributed estimators fused by intersection."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .decomposition import AggregationSuite, DistributedMachine, build_distributed
from .estimator import EstimatorState, estimate_incremental
from .machine import BudgetExceeded, FiniteStateMachine, enumeration_budget


def _meet(sets: Sequence[frozenset[str]]) -> frozenset[str]:
    return frozenset.intersection(*sets)


@dataclass(frozen=True)
class FusionResult:
    symbol: str
    per_machine_chi: tuple[frozenset[str], ...]
    per_machine_rho: tuple[frozenset[str], ...]
    fused_chi: frozenset[str]
    fused_rho: frozenset[str]
    monolithic_chi: frozenset[str] | None = None
    monolithic_rho: frozenset[str] | None = None

    @property
    def exact(self) -> bool | None:
        if self.monolithic_chi is None:
            return None
        return self.fused_chi == self.monolithic_chi and self.fused_rho == self.monolithic_rho

    def to_json(self) -> dict:
        out = {
            "symbol": self.symbol,
            "per_machine": [
                {"chi": sorted(c), "rho": sorted(r)} for c, r in zip(self.per_machine_chi, self.per_machine_rho)
            ],
            "fused": {"chi": sorted(self.fused_chi), "rho": sorted(self.fused_rho)},
        }
        if self.monolithic_chi is not None:
            out["monolithic"] = {"chi": sorted(self.monolithic_chi), "rho": sorted(self.monolithic_rho)}
            out["exact"] = self.exact
        return out


class DecentralizedEstimator:
    """Runs one online estimator per distributed machine and intersects them.

    All p estimators see the aggregate of the same symbol before fusion.  The
    monolithic estimator used for comparison is only built when asked for,
    so the decentralized path never touches full-resolution symbols beyond
    aggregating them.
    """

    def __init__(self, parent: FiniteStateMachine, suite: AggregationSuite, executor=None):
        parent.require_valid()
        self.parent = parent
        self.suite = suite
        self.machines: list[DistributedMachine] = [build_distributed(parent, agg) for agg in suite]
        self.executor = executor
        self.reset()

    def reset(self) -> None:
        self.states = [EstimatorState.initial(d.machine) for d in self.machines]
        self._mono: EstimatorState | None = None

    def _advance(self, k: int, symbol: str) -> EstimatorState:
        return estimate_incremental(self.states[k], self.machines[k].aggregation(symbol))

    def step(self, symbol: str, compare: bool = False) -> FusionResult:
        self.parent.check_symbol(symbol)
        ks = range(len(self.machines))
        if self.executor is not None:
            new = list(self.executor.map(lambda k: self._advance(k, symbol), ks))
        else:
            new = [self._advance(k, symbol) for k in ks]
        self.states = new
        chis = tuple(s.compatible for s in new)
        rhos = tuple(s.carried for s in new)
        mono_chi = mono_rho = None
        if compare:
            if self._mono is None:
                self._mono = EstimatorState.initial(self.parent)
            self._mono = estimate_incremental(self._mono, symbol)
            mono_chi, mono_rho = self._mono.compatible, self._mono.carried
        return FusionResult(symbol, chis, rhos, _meet(chis), _meet(rhos), mono_chi, mono_rho)

    def run_trace(self, w: Sequence[str], compare: bool = False) -> list[FusionResult]:
        self.reset()
        for sym in w:
            self.parent.check_symbol(sym)
        return [self.step(sym, compare) for sym in w]


@dataclass
class ComparisonReport:
    """Outcome of comparing fused and monolithic estimates over all strings."""

    checked: int = 0
    violation_count: int = 0
    strict_count: int = 0
    violations: list[tuple[str, ...]] = field(default_factory=list)
    strict: list[tuple[str, ...]] = field(default_factory=list)
    counterexample: tuple[str, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "overapproximation_violations": self.violation_count,
            "strict_inclusions": self.strict_count,
        }


def compare_exhaustive(
    machine: FiniteStateMachine,
    suite: AggregationSuite,
    max_len: int,
    budget: int | None = None,
    stop_at_first: bool = False,
    keep: int = 10,
) -> ComparisonReport:
    """Depth-first sweep over every string up to ``max_len``.

    A string is checked if it is feasible or its longest proper prefix is;
    extensions of infeasible strings are not visited since all their sets
    stay empty.  ``counterexample`` is the first string whose fused sets
    differ from the monolithic ones; ``violations`` lists strings where the
    fused sets fail to contain the monolithic ones, and ``strict`` strings
    where containment is strict.
    """
    machine.require_valid()
    limit = enumeration_budget(budget)
    dist = [build_distributed(machine, agg) for agg in suite]
    report = ComparisonReport()
    mono0 = EstimatorState.initial(machine)
    dist0 = [EstimatorState.initial(d.machine) for d in dist]

    # preorder in lexicographic order: each entry is a string and its parent's states
    stack = [((sym,), mono0, dist0) for sym in reversed(machine.alphabet)]
    while stack:
        w, mono, states = stack.pop()
        sym = w[-1]
        m = estimate_incremental(mono, sym)
        ds = [estimate_incremental(s, d.aggregation(sym)) for s, d in zip(states, dist)]
        report.checked += 1
        if report.checked > limit:
            raise BudgetExceeded(report.checked, limit)
        fchi = _meet([s.compatible for s in ds])
        frho = _meet([s.carried for s in ds])
        covers = fchi >= m.compatible and frho >= m.carried
        if not covers:
            report.violation_count += 1
            if len(report.violations) < keep:
                report.violations.append(w)
        if (fchi, frho) != (m.compatible, m.carried):
            if report.counterexample is None:
                report.counterexample = w
                if stop_at_first:
                    return report
            if covers:
                report.strict_count += 1
                if len(report.strict) < keep:
                    report.strict.append(w)
        if m.compatible and len(w) < max_len:
            stack.extend((w + (nxt,), m, ds) for nxt in reversed(machine.alphabet))
    return report


def verify_exactness(
    machine: FiniteStateMachine, suite: AggregationSuite, max_len: int, budget: int | None = None
) -> ComparisonReport:
    """Check fused == monolithic for every feasible string up to ``max_len``."""
    return compare_exhaustive(machine, suite, max_len, budget, stop_at_first=True)
