"""Quantized two-tank system as a polygon-valued estimation source.

Water levels evolve as ``x(t+1) = A x(t) + u(t)`` with
``A = [[1 - a1 - b, b], [b, 1 - a2 - b]]``, ``a1 = a2 = 7/20`` and
``b = 1/4``.  Each inflow takes one of three levels (1, 7, 14) and each
level reading ``y = x`` is quantized into [0,10), [10,20), [20,30].  A
symbol therefore fixes both inputs and both output cells, which gives an
alphabet of 81 symbols.

Set computations use closed cells.  The state space is the box [0,30]^2:
a predicted region is clipped to it, because a state outside the box
cannot emit any output symbol.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .decomposition import AggregationFunction, AggregationSuite
from .geometry import EMPTY, RationalPolygon, affine_image, apply_affine, as_matrix, intersect
from .lcomplete import (
    COUNTING_CONVENTIONS,
    build_lcomplete,
    complexity_report,
    fused_window_estimates,
    window_estimates,
)
from .machine import UnknownSymbol

A1 = A2 = Fraction(7, 20)
B = Fraction(1, 4)
MATRIX = as_matrix(((1 - A1 - B, B), (B, 1 - A2 - B)))
INPUT_LEVELS = (1, 7, 14)
CELL_BOUNDS = ((0, 10), (10, 20), (20, 30))
LEVELS = (1, 2, 3)
DOMAIN = RationalPolygon.box(0, 30, 0, 30)

# Plausible 8-step input schedule (indices into INPUT_LEVELS per tank).  The
# first three steps apply 7/7, matching the windows printed for t = 2; the
# rest exercise every input level while keeping both tanks inside [0, 30].
DEFAULT_INPUTS: tuple[tuple[int, int], ...] = (
    (2, 2), (2, 2), (2, 2), (3, 1), (3, 2), (1, 3), (2, 3), (1, 1),
)


def symbol(mu1: int, mu2: int, nu1: int, nu2: int) -> str:
    """Monolithic symbol name, e.g. ``u22|y11`` for inputs 7/7 and both levels below 10."""
    return f"u{mu1}{mu2}|y{nu1}{nu2}"


def parse_symbol(sym: str) -> tuple[int, int, int, int]:
    try:
        u, y = sym.split("|")
        if len(u) != 3 or len(y) != 3 or u[0] != "u" or y[0] != "y":
            raise ValueError
        out = int(u[1]), int(u[2]), int(y[1]), int(y[2])
    except ValueError:
        raise UnknownSymbol(sym) from None
    if not all(v in LEVELS for v in out):
        raise UnknownSymbol(sym)
    return out


def aggregate_symbol(k: int, mu1: int, mu2: int, level: int) -> str:
    """Symbol of the k-th coarse sensor: inputs plus the level cell of tank k."""
    return f"u{mu1}{mu2}|y{k}:{level}"


ALPHABET = tuple(symbol(*s) for s in itertools.product(LEVELS, repeat=4))


def interval(level: int) -> tuple[int, int]:
    return CELL_BOUNDS[level - 1]


def output_cell(nu1: int, nu2: int) -> RationalPolygon:
    (x0, x1), (y0, y1) = interval(nu1), interval(nu2)
    return RationalPolygon.box(x0, x1, y0, y1)


def input_vector(mu1: int, mu2: int) -> tuple[Fraction, Fraction]:
    return Fraction(INPUT_LEVELS[mu1 - 1]), Fraction(INPUT_LEVELS[mu2 - 1])


def quantize(y) -> int:
    """Half-open quantization of one reading; raises outside [0, 30]."""
    y = Fraction(y)
    for level, (lo, hi) in zip(LEVELS, CELL_BOUNDS):
        if lo <= y < hi or (level == 3 and y == hi):
            return level
    raise ValueError(f"reading {y} is outside [0, 30]")


def step_state(x, mu1: int, mu2: int) -> tuple[Fraction, Fraction]:
    return apply_affine(MATRIX, input_vector(mu1, mu2), (Fraction(x[0]), Fraction(x[1])))


def simulate(x0, inputs: Sequence[tuple[int, int]]) -> list[tuple[Fraction, Fraction]]:
    """Exact trajectory; ``states[t]`` is the state at which ``inputs[t]`` is applied."""
    states = [(Fraction(x0[0]), Fraction(x0[1]))]
    for mu in inputs[:-1]:
        states.append(step_state(states[-1], *mu))
    return states


def observe(x, mu1: int, mu2: int) -> str:
    return symbol(mu1, mu2, quantize(x[0]), quantize(x[1]))


def symbolic_step(region: RationalPolygon, sym: str) -> tuple[RationalPolygon, RationalPolygon]:
    """(compatible, predicted) regions after observing ``sym`` from ``region``."""
    mu1, mu2, nu1, nu2 = parse_symbol(sym)
    compatible = intersect(region, output_cell(nu1, nu2))
    if compatible.is_empty:
        return EMPTY, EMPTY
    return compatible, intersect(affine_image(compatible, MATRIX, input_vector(mu1, mu2)), DOMAIN)


@dataclass(frozen=True)
class _Reading:
    inputs: tuple[Fraction, Fraction]
    region: RationalPolygon


class TwoTankSource:
    """Polygon-valued estimation source for one view of the two-tank system.

    ``view`` is ``0`` for the monolithic machine, or ``1``/``2`` for the
    coarse sensor that only reports the level cell of tank 1 or tank 2.
    """

    empty = EMPTY

    def __init__(self, view: int = 0):
        if view not in (0, 1, 2):
            raise ValueError("view must be 0 (monolithic), 1 or 2")
        self.view = view
        self._readings: dict[str, _Reading] = {}
        if view == 0:
            for mu1, mu2, nu1, nu2 in itertools.product(LEVELS, repeat=4):
                self._readings[symbol(mu1, mu2, nu1, nu2)] = _Reading(
                    input_vector(mu1, mu2), output_cell(nu1, nu2)
                )
        else:
            for mu1, mu2, level in itertools.product(LEVELS, repeat=3):
                lo, hi = interval(level)
                box = RationalPolygon.box(lo, hi, 0, 30) if view == 1 else RationalPolygon.box(0, 30, lo, hi)
                self._readings[aggregate_symbol(view, mu1, mu2, level)] = _Reading(input_vector(mu1, mu2), box)
        self.alphabet = tuple(self._readings)
        # predicted regions, keyed by (compatible region, inputs)
        self._image_cache: dict = {}

    def step(self, carried, sym):
        try:
            reading = self._readings[sym]
        except KeyError:
            raise UnknownSymbol(sym, ()) from None
        region = DOMAIN if carried is None else carried
        chi = intersect(region, reading.region)
        if chi.is_empty:
            return EMPTY, EMPTY
        key = (chi, reading.inputs)
        rho = self._image_cache.get(key)
        if rho is None:
            rho = intersect(affine_image(chi, MATRIX, reading.inputs), DOMAIN)
            self._image_cache[key] = rho
        return chi, rho

    def is_empty(self, value) -> bool:
        return value.is_empty

    def size(self, value) -> int:
        return len(value)

    def intersect(self, a, b):
        return intersect(a, b)

    def to_json(self, value):
        return value.to_json()


def twotank_suite() -> AggregationSuite:
    """The two output-only aggregations: each keeps the inputs and one tank's cell."""
    maps: list[dict[str, str]] = [{}, {}]
    for mu1, mu2, nu1, nu2 in itertools.product(LEVELS, repeat=4):
        w = symbol(mu1, mu2, nu1, nu2)
        maps[0][w] = aggregate_symbol(1, mu1, mu2, nu1)
        maps[1][w] = aggregate_symbol(2, mu1, mu2, nu2)
    return AggregationSuite(tuple(AggregationFunction(m, index=k) for k, m in enumerate(maps, 1)))


def twotank_sources() -> tuple[TwoTankSource, TwoTankSource, TwoTankSource]:
    """Monolithic source and the two distributed ones, in that order."""
    return TwoTankSource(0), TwoTankSource(1), TwoTankSource(2)


def observation_trace(inputs: Sequence[tuple[int, int]] = DEFAULT_INPUTS, x0=(0, 0)):
    """Exact states and the monolithic symbols they emit under ``inputs``."""
    states = simulate(x0, inputs)
    return states, [observe(x, *mu) for x, mu in zip(states, inputs)]


VIEW_NAMES = ("P", "P1", "P2")


def _view_reports(view: int, ell: int, conventions: Sequence[str]) -> dict:
    auto = build_lcomplete(TwoTankSource(view), ell, transitions=False)
    return {c: complexity_report(auto, c) for c in conventions}


def complexity_table(ell: int, conventions: Sequence[str] = COUNTING_CONVENTIONS, jobs: int = 1) -> dict:
    """State counts and annotation sizes of the three two-tank automata.

    Returns ``{convention: {"P": report, "P1": report, "P2": report}}``.
    With ``jobs > 1`` the three automata are built in separate processes.
    """
    views = range(3)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, 3)) as pool:
            results = list(pool.map(_view_reports, views, [ell] * 3, [tuple(conventions)] * 3))
    else:
        results = [_view_reports(v, ell, conventions) for v in views]
    return {c: {VIEW_NAMES[v]: results[v][c] for v in views} for c in conventions}


def complexity_row(ell: int, reports: dict) -> dict:
    """One table row: monolithic, first distributed, and decentralized totals."""
    mono, first = reports["P"], reports["P1"]
    dist = [reports["P1"], reports["P2"]]
    return {
        "ell": ell,
        "states": mono.state_count,
        "n_chi": mono.annotation_size,
        "states_1": first.state_count,
        "n_chi_1": first.annotation_size,
        "states_dec": sum(r.state_count for r in dist),
        "n_chi_dec": sum(r.annotation_size for r in dist),
        "distinct_sets": mono.distinct_count,
        "distinct_sets_1": first.distinct_count,
        "distinct_sets_dec": sum(r.distinct_count for r in dist),
        "n_chi_distinct": mono.distinct_annotation_size,
        "n_chi_distinct_1": first.distinct_annotation_size,
        "n_chi_distinct_dec": sum(r.distinct_annotation_size for r in dist),
    }


@dataclass(frozen=True)
class TraceStep:
    t: int
    state: tuple[Fraction, Fraction]
    symbol: str
    monolithic: RationalPolygon
    per_machine: tuple[RationalPolygon, ...]
    fused: RationalPolygon

    @property
    def contained(self) -> bool:
        return self.monolithic.contains(self.state) and self.fused.contains(self.state)

    @property
    def exact(self) -> bool:
        return self.fused == self.monolithic

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "state": [[v.numerator, v.denominator] for v in self.state],
            "symbol": self.symbol,
            "monolithic": self.monolithic.to_json(),
            "per_machine": [p.to_json() for p in self.per_machine],
            "fused": self.fused.to_json(),
            "contained": self.contained,
            "exact": self.exact,
        }


def run_trace(ell: int, inputs: Sequence[tuple[int, int]] = DEFAULT_INPUTS, x0=(0, 0)) -> list[TraceStep]:
    """Simulate, then compare monolithic and fused window estimates at every step."""
    states, stream = observation_trace(inputs, x0)
    mono, d1, d2 = twotank_sources()
    suite = twotank_suite()
    mono_est = window_estimates(mono, stream, ell)
    fused, per = fused_window_estimates((d1, d2), tuple(suite), stream, ell)
    return [
        TraceStep(t, states[t], stream[t], mono_est[t], (per[0][t], per[1][t]), fused[t])
        for t in range(len(stream))
    ]
