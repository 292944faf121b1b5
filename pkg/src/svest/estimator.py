"""Set-valued state estimation and one-step prediction on finite machines.

``estimate`` runs the window recursion: starting from every state, each
observed symbol first restricts the carried set to the states that can emit
it (the compatible set) and then pushes that set through the symbol's
transitions (the predicted set).  ``brute_force_estimate`` computes the same
quantities by enumerating runs, and is what the recursion is tested against.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .machine import FiniteStateMachine, iter_runs


@dataclass(frozen=True)
class EstimatePair:
    compatible: frozenset[str]
    predicted: frozenset[str]

    @property
    def chi(self) -> frozenset[str]:
        return self.compatible

    @property
    def rho(self) -> frozenset[str]:
        return self.predicted

    def to_json(self) -> dict:
        return {"chi": sorted(self.compatible), "rho": sorted(self.predicted)}


def chi_symbol(machine: FiniteStateMachine, symbol: str) -> frozenset[str]:
    """States that can emit ``symbol``."""
    return machine.sources(symbol)


def rho_hat(machine: FiniteStateMachine, symbol: str, states: Iterable[str]) -> frozenset[str]:
    """Union of ``symbol``-successors over ``states``."""
    post = machine.post(symbol)
    return frozenset(t for s in states if s in post for t in post[s])


def _check(machine: FiniteStateMachine, w: Sequence[str]) -> None:
    machine.require_valid()
    if not w:
        raise ValueError("signal strings have length >= 1")
    for sym in w:
        machine.check_symbol(sym)


def estimate_prefixes(machine: FiniteStateMachine, w: Sequence[str]) -> list[EstimatePair]:
    """Estimates for every prefix ``w[:1], w[:2], ...`` of ``w``."""
    _check(machine, w)
    out = []
    carried = machine.state_set
    for sym in w:
        chi = carried & machine.sources(sym)
        carried = rho_hat(machine, sym, chi)
        out.append(EstimatePair(chi, carried))
    return out


def estimate(machine: FiniteStateMachine, w: Sequence[str]) -> EstimatePair:
    return estimate_prefixes(machine, w)[-1]


@dataclass(frozen=True)
class EstimatorState:
    """Online estimator value: the prediction carried into the next step.

    ``compatible`` is the compatible set reported at the last step, or
    ``None`` before any symbol has been observed.
    """

    machine: FiniteStateMachine
    carried: frozenset[str]
    compatible: frozenset[str] | None = None

    @classmethod
    def initial(cls, machine: FiniteStateMachine) -> "EstimatorState":
        machine.require_valid()
        return cls(machine, machine.state_set)

    @property
    def predicted(self) -> frozenset[str]:
        return self.carried

    def pair(self) -> EstimatePair:
        if self.compatible is None:
            raise ValueError("no symbol observed yet")
        return EstimatePair(self.compatible, self.carried)


def estimate_incremental(state: EstimatorState, symbol: str) -> EstimatorState:
    machine = state.machine
    chi = state.carried & machine.sources(symbol)
    return EstimatorState(machine, rho_hat(machine, symbol, chi), chi)


def _collect(runs, w: tuple[str, ...], offset: int) -> EstimatePair:
    chi, rho = set(), set()
    n = len(w)
    for xs, ws in runs:
        if ws[offset:offset + n] == w:
            chi.add(xs[offset + n - 1])
            rho.add(xs[offset + n])
    return EstimatePair(frozenset(chi), frozenset(rho))


def brute_force_estimate(
    machine: FiniteStateMachine,
    w: Sequence[str],
    tau: int = 0,
    horizon: int = 0,
    budget: int | None = None,
) -> EstimatePair:
    """Estimate by enumerating runs.

    With ``tau > 0`` the string is read as ``w|[tau, t]``; runs are then
    enumerated from time ``tau - min(horizon, tau)``, so ``horizon >= tau``
    gives the time-anchored semantics (runs rooted at time 0) and
    ``horizon = 0`` the time-invariant window semantics.
    """
    _check(machine, w)
    w = tuple(w)
    offset = min(horizon, tau) if tau > 0 else 0
    return _collect(iter_runs(machine, offset + len(w), budget), w, offset)


def brute_force_table(
    machine: FiniteStateMachine, length: int, budget: int | None = None
) -> dict[tuple[str, ...], EstimatePair]:
    """Oracle estimates for every feasible string of exactly ``length`` symbols.

    Strings missing from the table are infeasible (both sets empty).
    """
    chi: dict[tuple[str, ...], set[str]] = defaultdict(set)
    rho: dict[tuple[str, ...], set[str]] = defaultdict(set)
    for xs, ws in iter_runs(machine, length, budget):
        chi[ws].add(xs[-2])
        rho[ws].add(xs[-1])
    return {ws: EstimatePair(frozenset(chi[ws]), frozenset(rho[ws])) for ws in chi}

