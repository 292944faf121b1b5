"""Finite state machines ``P = (X, W, Delta, X0)`` over opaque string tokens.

States and symbols carry no structure of their own; input/output pairing,
chain membership and the like are layered on top by other modules.
"""
from __future__ import annotations

import json
import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6

Transition = tuple[str, str, str]
Run = tuple[tuple[str, ...], tuple[str, ...]]


class MachineError(ValueError):
    pass


class UnknownSymbol(MachineError):
    def __init__(self, symbol, alphabet=()):
        self.symbol = symbol
        super().__init__(f"unknown symbol {symbol!r}" + (f" (alphabet: {', '.join(alphabet)})" if alphabet else ""))


class InvalidMachine(MachineError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("invalid machine: " + "; ".join(report.errors))


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured budget."""

    def __init__(self, bound: int, budget: int):
        self.bound = bound
        self.budget = budget
        super().__init__(f"enumeration needs {bound} items, budget is {budget} (set SVEST_BUDGET to raise it)")


def enumeration_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("SVEST_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _unique(tokens: Iterable[str], what: str) -> tuple[str, ...]:
    out = tuple(tokens)
    for tok in out:
        if not isinstance(tok, str) or not tok:
            raise MachineError(f"{what} must be nonempty strings, got {tok!r}")
    if len(set(out)) != len(out):
        dup = sorted({t for t in out if out.count(t) > 1})
        raise MachineError(f"duplicate {what}: {', '.join(dup)}")
    return out


@dataclass(frozen=True)
class FiniteStateMachine:
    """Immutable state machine with a transition relation.

    ``initial`` defaults to all states, which is the standing assumption
    under which the window-based estimators are exact.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: frozenset[Transition]
    initial: frozenset[str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "states", _unique(self.states, "states"))
        object.__setattr__(self, "alphabet", _unique(self.alphabet, "symbols"))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        init = self.states if self.initial is None else self.initial
        object.__setattr__(self, "initial", frozenset(init))

    @cached_property
    def state_set(self) -> frozenset[str]:
        return frozenset(self.states)

    @cached_property
    def symbol_set(self) -> frozenset[str]:
        return frozenset(self.alphabet)

    @cached_property
    def _post(self) -> dict[str, dict[str, frozenset[str]]]:
        post: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
        for src, sym, tgt in self.transitions:
            post[sym][src].add(tgt)
        return {sym: {src: frozenset(t) for src, t in by_src.items()} for sym, by_src in post.items()}

    @cached_property
    def _sources(self) -> dict[str, frozenset[str]]:
        return {sym: frozenset(by_src) for sym, by_src in self._post.items()}

    def check_symbol(self, symbol: str) -> None:
        if symbol not in self.symbol_set:
            raise UnknownSymbol(symbol, self.alphabet)

    def sources(self, symbol: str) -> frozenset[str]:
        """States with an outgoing ``symbol`` transition."""
        self.check_symbol(symbol)
        return self._sources.get(symbol, frozenset())

    def successors(self, state: str, symbol: str) -> frozenset[str]:
        return self._post.get(symbol, {}).get(state, frozenset())

    def post(self, symbol: str) -> dict[str, frozenset[str]]:
        self.check_symbol(symbol)
        return self._post.get(symbol, {})

    @cached_property
    def report(self) -> "ValidationReport":
        return validate(self)

    def require_valid(self) -> None:
        if not self.report.ok:
            raise InvalidMachine(self.report)

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "alphabet": list(self.alphabet),
            "transitions": [list(t) for t in sorted(self.transitions)],
            "initial": sorted(self.initial),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteStateMachine":
        try:
            return cls(
                states=data["states"],
                alphabet=data["alphabet"],
                transitions=[tuple(t) for t in data["transitions"]],
                initial=data.get("initial"),
            )
        except KeyError as exc:
            raise MachineError(f"machine JSON lacks key {exc}") from None
        except TypeError as exc:
            raise MachineError(f"malformed machine JSON: {exc}") from None

    @classmethod
    def load(cls, path) -> "FiniteStateMachine":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


@dataclass
class ValidationReport:
    blocking: list[str] = field(default_factory=list)
    sourceless: list[str] = field(default_factory=list)
    dangling: list[str] = field(default_factory=list)
    initial_is_all: bool = True

    @property
    def errors(self) -> list[str]:
        errs = [f"blocking state {s}" for s in self.blocking]
        return errs + self.dangling

    @property
    def warnings(self) -> list[str]:
        out = [f"state {s} has no predecessor" for s in self.sourceless]
        if not self.initial_is_all:
            out.append("initial set differs from the state set; window estimates assume X0 = X")
        return out

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "blocking": self.blocking,
            "sourceless": self.sourceless,
            "dangling": self.dangling,
            "initial_is_all": self.initial_is_all,
            "errors": self.errors,
            "warnings": self.warnings,
        }


def validate(machine: FiniteStateMachine) -> ValidationReport:
    """Structural checks: blocking and predecessor-free states, dangling references."""
    report = ValidationReport()
    states, symbols = machine.state_set, machine.symbol_set
    has_out: set[str] = set()
    has_in: set[str] = set()
    for src, sym, tgt in sorted(machine.transitions):
        bad = False
        if src not in states:
            report.dangling.append(f"transition ({src}, {sym}, {tgt}) references undeclared state {src}")
            bad = True
        if tgt not in states:
            report.dangling.append(f"transition ({src}, {sym}, {tgt}) references undeclared state {tgt}")
            bad = True
        if sym not in symbols:
            report.dangling.append(f"transition ({src}, {sym}, {tgt}) references undeclared symbol {sym}")
            bad = True
        if not bad:
            has_out.add(src)
            has_in.add(tgt)
    for s in sorted(machine.initial - states):
        report.dangling.append(f"initial state {s} is not declared")
    report.blocking = [s for s in machine.states if s not in has_out]
    report.sourceless = [s for s in machine.states if s not in has_in]
    report.initial_is_all = machine.initial == states
    return report


def is_feasible(machine: FiniteStateMachine, w: Sequence[str]) -> bool:
    """True iff some run of the machine carries the symbol string ``w``."""
    machine.require_valid()
    if not w:
        raise ValueError("signal strings have length >= 1")
    for sym in w:
        machine.check_symbol(sym)
    current = machine.state_set
    for sym in w:
        post = machine._post.get(sym, {})
        current = frozenset(t for s in current if s in post for t in post[s])
        if not current:
            return False
    return True


def count_runs(machine: FiniteStateMachine, length: int) -> int:
    """Number of runs of ``length`` transitions starting in the initial set."""
    counts = {s: 1 for s in machine.initial}
    for _ in range(length):
        nxt: dict[str, int] = defaultdict(int)
        for src, _sym, tgt in machine.transitions:
            if src in counts:
                nxt[tgt] += counts[src]
        counts = nxt
    return sum(counts.values())


def iter_runs(machine: FiniteStateMachine, length: int, budget: int | None = None) -> Iterator[Run]:
    machine.require_valid()
    if length < 1:
        raise ValueError("run length must be positive")
    limit = enumeration_budget(budget)
    bound = count_runs(machine, length)
    if bound > limit:
        raise BudgetExceeded(bound, limit)
    out_edges: dict[str, list[tuple[str, str]]] = defaultdict(list)
    for src, sym, tgt in sorted(machine.transitions):
        out_edges[src].append((sym, tgt))

    def extend(xs: tuple[str, ...], ws: tuple[str, ...]) -> Iterator[Run]:
        if len(ws) == length:
            yield xs, ws
            return
        for sym, tgt in out_edges[xs[-1]]:
            yield from extend(xs + (tgt,), ws + (sym,))

    for x0 in sorted(machine.initial):
        yield from extend((x0,), ())


def enumerate_runs(machine: FiniteStateMachine, length: int, budget: int | None = None) -> set[Run]:
    """All (state sequence, symbol sequence) pairs of ``length`` transitions.

    This is the restricted full behavior every brute-force oracle is built on.
    """
    return set(iter_runs(machine, length, budget))
