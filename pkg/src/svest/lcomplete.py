"""Strongest l-complete approximation automata with state-set annotations.

The automaton's states are the feasible strings of length 1..ell.  A string
shorter than ell is extended by the next symbol; a string of length ell
drops its oldest symbol as the new one arrives.  Every state is annotated
with the compatible set of its string, so running the automaton online
yields a sliding-window state estimate.

Automata are built from an *estimation source*: any object with an
``alphabet``, a ``step(carried, symbol) -> (compatible, predicted)`` method
(``carried=None`` meaning "no information yet"), ``is_empty(value)``,
``size(value)`` and ``intersect(a, b)``.  :class:`FiniteSource` wraps a
finite machine; the two-tank module provides polygon-valued sources.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Protocol, Sequence

from .estimator import rho_hat
from .machine import BudgetExceeded, FiniteStateMachine, UnknownSymbol, enumeration_budget

logger = logging.getLogger(__name__)

Window = tuple[str, ...]
COUNTING_CONVENTIONS = ("all", "feasible", "reachable")


class EstimationSource(Protocol):
    alphabet: tuple[str, ...]
    empty: Any

    def step(self, carried: Any, symbol: str) -> tuple[Any, Any]: ...

    def is_empty(self, value: Any) -> bool: ...

    def size(self, value: Any) -> int: ...

    def intersect(self, a: Any, b: Any) -> Any: ...


class FiniteSource:
    """Estimation source backed by a finite state machine."""

    empty: frozenset[str] = frozenset()

    def __init__(self, machine: FiniteStateMachine):
        machine.require_valid()
        self.machine = machine
        self.alphabet = machine.alphabet

    def step(self, carried, symbol):
        m = self.machine
        start = m.state_set if carried is None else carried
        chi = start & m.sources(symbol)
        return chi, rho_hat(m, symbol, chi)

    def is_empty(self, value) -> bool:
        return not value

    def size(self, value) -> int:
        return len(value)

    def intersect(self, a, b):
        return a & b

    def to_json(self, value):
        return sorted(value)


def window_estimate(source: EstimationSource, window: Sequence[str]) -> tuple[Any, Any]:
    """(compatible, predicted) for a string read from scratch."""
    carried = None
    chi = source.empty
    for sym in window:
        chi, carried = source.step(carried, sym)
    return chi, carried


@dataclass
class LCompleteAutomaton:
    ell: int
    alphabet: tuple[str, ...]
    states: list[Window]
    annotations: dict[Window, Any]
    transitions: dict[tuple[Window, str], Window] | None
    # length-ell windows that are the target of some sliding transition
    recurrent: set[Window] = field(default_factory=set)
    empty: Any = frozenset()
    size: Any = len

    @property
    def initial(self) -> list[Window]:
        return [z for z in self.states if len(z) == 1]

    def successor(self, state: Window | None, symbol: str) -> Window | None:
        if state is None:
            cand = (symbol,)
            return cand if cand in self.annotations else None
        if self.transitions is not None:
            return self.transitions.get((state, symbol))
        full = state + (symbol,)
        if len(full) <= self.ell:
            return full if full in self.annotations else None
        raise ValueError("automaton was built without sliding transitions")

    def accepts(self, w: Sequence[str]) -> bool:
        z = None
        for sym in w:
            z = self.successor(z, sym)
            if z is None:
                return False
        return True

    def to_json(self, encode=None) -> dict:
        encode = encode or (lambda v: sorted(v))
        index = {z: i for i, z in enumerate(self.states)}
        out = {
            "ell": self.ell,
            "alphabet": list(self.alphabet),
            "states": [list(z) for z in self.states],
            "initial": [index[z] for z in self.initial],
            "annotations": [encode(self.annotations[z]) for z in self.states],
            "recurrent": sorted(index[z] for z in self.recurrent),
        }
        if self.transitions is not None:
            out["transitions"] = sorted([index[s], sym, index[t]] for (s, sym), t in self.transitions.items())
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LCompleteAutomaton":
        """Rebuild an emitted automaton; annotations stay in their JSON encoding.

        Both encodings (sorted state names, polygon vertex lists) have one
        list entry per element or vertex, so sizes are preserved.
        """
        states = [tuple(z) for z in data["states"]]
        annotations = {z: _freeze(a) for z, a in zip(states, data["annotations"])}
        transitions = None
        if "transitions" in data:
            transitions = {(states[s], sym): states[t] for s, sym, t in data["transitions"]}
        return cls(
            ell=data["ell"],
            alphabet=tuple(data["alphabet"]),
            states=states,
            annotations=annotations,
            transitions=transitions,
            recurrent={states[i] for i in data.get("recurrent", [])},
            empty=(),
            size=len,
        )


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def build_lcomplete(
    source: EstimationSource,
    ell: int,
    transitions: bool = True,
    budget: int | None = None,
) -> LCompleteAutomaton:
    """Breadth-first construction over feasible strings of length <= ell.

    With ``transitions=False`` the sliding transitions (which need feasibility
    of strings of length ell + 1) are skipped; the ``recurrent`` flags are
    still computed, stopping at the first feasible one-symbol back-extension.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    limit = enumeration_budget(budget)
    annotations: dict[Window, Any] = {}
    carried: dict[Window, Any] = {}
    states: list[Window] = []
    delta: dict[tuple[Window, str], Window] = {}
    level: list[Window] = [()]
    carried[()] = None
    for r in range(1, ell + 1):
        nxt: list[Window] = []
        for z in level:
            for sym in source.alphabet:
                chi, rho = source.step(carried[z], sym)
                if source.is_empty(chi):
                    continue
                w = z + (sym,)
                annotations[w] = chi
                carried[w] = rho
                nxt.append(w)
                if z:
                    delta[(z, sym)] = w
                if len(annotations) > limit:
                    raise BudgetExceeded(len(annotations), limit)
        states.extend(nxt)
        logger.debug("level %d: %d feasible strings", r, len(nxt))
        level = nxt

    recurrent: set[Window] = set()
    if transitions:
        for z in level:
            for sym in source.alphabet:
                chi, _ = source.step(carried[z], sym)
                if not source.is_empty(chi):
                    tgt = (z + (sym,))[1:]
                    delta[(z, sym)] = tgt
                    recurrent.add(tgt)
    else:
        by_prefix: dict[Window, list[Window]] = {}
        for z in level:
            by_prefix.setdefault(z[1:], []).append(z)
        for w in level:
            for z in by_prefix.get(w[:-1], ()):
                chi, _ = source.step(carried[z], w[-1])
                if not source.is_empty(chi):
                    recurrent.add(w)
                    break
    return LCompleteAutomaton(
        ell=ell,
        alphabet=tuple(source.alphabet),
        states=states,
        annotations=annotations,
        transitions=delta if transitions else None,
        recurrent=recurrent,
        empty=source.empty,
        size=source.size,
    )


def online_estimate(automaton: LCompleteAutomaton, stream: Iterable[str]) -> Iterator[Any]:
    """Follow the automaton along ``stream`` and emit each state's annotation.

    An observation with no matching transition sends the estimator into an
    empty sink for the rest of the stream.
    """
    z: Window | None = None
    sunk = False
    for t, sym in enumerate(stream):
        if sym not in automaton.alphabet:
            raise UnknownSymbol(sym, automaton.alphabet)
        if not sunk:
            z = automaton.successor(z, sym)
            if z is None:
                sunk = True
                logger.warning("observation %r at t=%d is infeasible; estimator enters the empty sink", sym, t)
        yield automaton.empty if sunk else automaton.annotations[z]


def window_estimates(source: EstimationSource, stream: Sequence[str], ell: int) -> list[Any]:
    """Batch counterpart of :func:`online_estimate`, computed window by window."""
    out = []
    for t in range(len(stream)):
        window = stream[max(0, t - ell + 1): t + 1]
        out.append(window_estimate(source, window)[0])
    return out


def fused_window_estimates(
    sources: Sequence[EstimationSource], aggregations: Sequence, stream: Sequence[str], ell: int
) -> tuple[list[Any], list[list[Any]]]:
    """Per-source window estimates on the aggregated stream, and their intersection."""
    per = []
    for src, agg in zip(sources, aggregations):
        per.append(window_estimates(src, [agg(s) for s in stream], ell))
    fused = []
    for t in range(len(stream)):
        acc = per[0][t]
        for k in range(1, len(per)):
            acc = sources[k].intersect(acc, per[k][t])
        fused.append(acc)
    return fused, per


@dataclass
class ComplexityReport:
    convention: str
    state_count: int
    annotation_size: int
    distinct_count: int
    distinct_annotation_size: int
    per_length: dict[int, tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "convention": self.convention,
            "states": self.state_count,
            "n_chi": self.annotation_size,
            "distinct_sets": self.distinct_count,
            "n_chi_distinct": self.distinct_annotation_size,
            "per_length": {str(r): {"states": s, "n_chi": n} for r, (s, n) in sorted(self.per_length.items())},
        }


def complexity_report(automaton: LCompleteAutomaton, convention: str = "feasible") -> ComplexityReport:
    """State count and total annotation size under a counting convention.

    ``all`` counts every string of length 1..ell (infeasible ones carry an
    empty annotation of size 0); ``feasible`` counts the constructed states;
    ``reachable`` keeps the transient states (length < ell) and only those
    length-ell windows that can be entered by a sliding transition.
    ``distinct_count`` and ``distinct_annotation_size`` count each distinct
    annotation of the selected states once.
    """
    if convention not in COUNTING_CONVENTIONS:
        raise ValueError(f"unknown counting convention {convention!r}")
    ell = automaton.ell
    if convention == "reachable":
        states = [z for z in automaton.states if len(z) < ell or z in automaton.recurrent]
    else:
        states = automaton.states
    per: dict[int, list[int]] = {r: [0, 0] for r in range(1, ell + 1)}
    distinct: dict[Hashable, int] = {}
    for z in states:
        n = automaton.size(automaton.annotations[z])
        per[len(z)][0] += 1
        per[len(z)][1] += n
        distinct.setdefault(automaton.annotations[z], n)
    if convention == "all":
        m = len(automaton.alphabet)
        for r in per:
            per[r][0] = m**r
    return ComplexityReport(
        convention=convention,
        state_count=sum(s for s, _ in per.values()),
        annotation_size=sum(n for _, n in per.values()),
        distinct_count=len(distinct),
        distinct_annotation_size=sum(distinct.values()),
        per_length={r: (s, n) for r, (s, n) in per.items()},
    )
