"""Signal-space decomposition: aggregation functions, chains, distributed machines.

An aggregation function coarsens the alphabet ``W`` onto a smaller set
``V_k``; a suite of them is consistent when the tuple of aggregate symbols
identifies the original symbol.  Relabeling a machine's transitions through
one aggregation yields a distributed machine.

When the transition relation splits into non-deterministic chains (blocks
of symbols in which no state emits two different block symbols and no state
has two different block predecessors), a suite that never mixes blocks in
one aggregate symbol makes the intersection of the distributed estimates
exact.  ``chain_partition`` finds such blocks and ``synthesize_suite``
builds the suite.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .machine import FiniteStateMachine, MachineError, UnknownSymbol


class DecompositionError(MachineError):
    pass


class NotChainDecomposable(DecompositionError):
    """Some symbol on its own already merges two sources into one target."""

    def __init__(self, symbol: str, witness: tuple):
        self.symbol = symbol
        self.witness = witness
        super().__init__(
            f"NotChainDecomposable({symbol}): transitions {witness[0]} and {witness[1]} share a target"
        )


@dataclass(frozen=True)
class AggregationFunction:
    """Total map from the alphabet onto an ordered aggregate alphabet."""

    mapping: Mapping[str, str]
    index: int = 1
    codomain: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        seen = dict.fromkeys(self.mapping.values())
        codomain = tuple(self.codomain) or tuple(seen)
        missing = set(seen) - set(codomain)
        if missing:
            raise DecompositionError(f"aggregate symbols {sorted(missing)} missing from codomain")
        object.__setattr__(self, "codomain", codomain)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(self.mapping)

    def __call__(self, symbol: str) -> str:
        try:
            return self.mapping[symbol]
        except KeyError:
            raise UnknownSymbol(symbol, self.domain) from None

    def preimage(self, theta: str) -> tuple[str, ...]:
        if theta not in self.codomain:
            raise UnknownSymbol(theta, self.codomain)
        return tuple(w for w, v in self.mapping.items() if v == theta)

    def to_json(self) -> dict:
        return {"map": dict(self.mapping)}


@dataclass(frozen=True)
class AggregationSuite:
    functions: tuple[AggregationFunction, ...]

    def __post_init__(self):
        fns = tuple(self.functions)
        if not fns:
            raise DecompositionError("a suite needs at least one aggregation function")
        object.__setattr__(self, "functions", fns)

    @property
    def p(self) -> int:
        return len(self.functions)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.functions[0].domain

    def __iter__(self) -> Iterator[AggregationFunction]:
        return iter(self.functions)

    def __len__(self) -> int:
        return len(self.functions)

    def tuple_of(self, symbol: str) -> tuple[str, ...]:
        return tuple(f(symbol) for f in self.functions)

    def to_json(self) -> dict:
        return {"p": self.p, "functions": [f.to_json() for f in self.functions]}

    @classmethod
    def from_json(cls, data: dict) -> "AggregationSuite":
        fns = tuple(AggregationFunction(f["map"], index=k) for k, f in enumerate(data["functions"], 1))
        if "p" in data and data["p"] != len(fns):
            raise DecompositionError(f"suite declares p={data['p']} but lists {len(fns)} functions")
        return cls(fns)

    @classmethod
    def load(cls, path) -> "AggregationSuite":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


def identity_suite(alphabet: Sequence[str]) -> AggregationSuite:
    return AggregationSuite((AggregationFunction({w: w for w in alphabet}),))


@dataclass(frozen=True)
class ConsistencyCheck:
    ok: bool
    witness: tuple[str, str] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_consistency(suite: AggregationSuite) -> ConsistencyCheck:
    """Whether every symbol is resolved by its tuple of aggregate symbols."""
    alphabet = suite.alphabet
    for f in suite.functions[1:]:
        if set(f.domain) != set(alphabet):
            raise DecompositionError(f"aggregation {f.index} is defined on a different alphabet")
    seen: dict[tuple[str, ...], str] = {}
    for w in alphabet:
        key = suite.tuple_of(w)
        if key in seen:
            return ConsistencyCheck(False, (seen[key], w))
        seen[key] = w
    return ConsistencyCheck(True)


def aggregate_string(agg: AggregationFunction, w: Sequence[str]) -> tuple[str, ...]:
    return tuple(agg(sym) for sym in w)


def invert_string(agg: AggregationFunction, v: Sequence[str]) -> Iterator[tuple[str, ...]]:
    """Lazily enumerate every string over ``W`` that aggregates to ``v``."""
    return itertools.product(*(agg.preimage(theta) for theta in v))


def preimage_count(agg: AggregationFunction, v: Sequence[str]) -> int:
    n = 1
    for theta in v:
        n *= len(agg.preimage(theta))
    return n


@dataclass(frozen=True)
class DistributedMachine:
    machine: FiniteStateMachine
    aggregation: AggregationFunction
    parent: FiniteStateMachine = field(repr=False, compare=False)


def build_distributed(machine: FiniteStateMachine, agg: AggregationFunction) -> DistributedMachine:
    """Relabel every transition through ``agg``; duplicates collapse."""
    missing = set(machine.alphabet) - set(agg.domain)
    if missing:
        raise DecompositionError(f"aggregation is not total: no image for {sorted(missing)}")
    transitions = frozenset((src, agg(sym), tgt) for src, sym, tgt in machine.transitions)
    relabeled = FiniteStateMachine(machine.states, agg.codomain, transitions, machine.initial)
    return DistributedMachine(relabeled, agg, machine)


# -- non-deterministic chains -------------------------------------------------


@dataclass(frozen=True)
class ChainViolation:
    """Two transitions of the block that break the chain conditions.

    ``kind`` is ``"emission"`` when one state emits two block symbols, or
    ``"merge"`` when one state is entered from two different sources.
    """

    kind: str
    first: tuple[str, str, str]
    second: tuple[str, str, str]


def _block_transitions(machine: FiniteStateMachine, omega: Iterable[str]) -> list[tuple[str, str, str]]:
    block = set(omega)
    for sym in block:
        machine.check_symbol(sym)
    return sorted(t for t in machine.transitions if t[1] in block)


def chain_violation(machine: FiniteStateMachine, omega: Iterable[str]) -> ChainViolation | None:
    emitted: dict[str, tuple] = {}
    entered: dict[str, tuple] = {}
    for t in _block_transitions(machine, omega):
        src, sym, tgt = t
        prev = emitted.setdefault(src, t)
        if prev[1] != sym:
            return ChainViolation("emission", prev, t)
        prev = entered.setdefault(tgt, t)
        if prev[0] != src:
            return ChainViolation("merge", prev, t)
    return None


def is_nondeterministic_chain(machine: FiniteStateMachine, omega: Iterable[str]) -> bool:
    return chain_violation(machine, omega) is None


def is_absolutely_injective(mapping: Mapping[object, Iterable]) -> bool:
    """``f(a) & f(b)`` nonempty only for ``a == b``."""
    owner: dict[object, object] = {}
    for key, values in mapping.items():
        for v in values:
            if owner.setdefault(v, key) != key:
                return False
    return True


def chain_by_injectivity(machine: FiniteStateMachine, omega: Iterable[str]) -> bool:
    """Chain test phrased through the block's emission and transition maps.

    The block is a chain iff symbol -> emitting states and state -> block
    successors are both absolutely injective.
    """
    block = _block_transitions(machine, omega)
    emitters: dict[str, set[str]] = {}
    successors: dict[str, set[str]] = {}
    for src, sym, tgt in block:
        emitters.setdefault(sym, set()).add(src)
        successors.setdefault(src, set()).add(tgt)
    return is_absolutely_injective(emitters) and is_absolutely_injective(successors)


@dataclass(frozen=True)
class ChainBlock:
    symbols: tuple[str, ...]
    transitions: frozenset[tuple[str, str, str]]


@dataclass(frozen=True)
class ChainPartition:
    blocks: tuple[ChainBlock, ...]
    alphabet: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.alphabet:
            object.__setattr__(self, "alphabet", tuple(w for b in self.blocks for w in b.symbols))

    def block_of(self, symbol: str) -> int:
        for j, b in enumerate(self.blocks):
            if symbol in b.symbols:
                return j
        raise UnknownSymbol(symbol)

    def to_json(self) -> dict:
        return {"blocks": [list(b.symbols) for b in self.blocks]}


def conflict_graph(machine: FiniteStateMachine) -> dict[str, set[str]]:
    """Symbols that may not share a chain block."""
    by_source: dict[str, set[str]] = {}
    into: dict[str, dict[str, set[str]]] = {}
    for src, sym, tgt in machine.transitions:
        by_source.setdefault(src, set()).add(sym)
        into.setdefault(tgt, {}).setdefault(sym, set()).add(src)
    graph: dict[str, set[str]] = {w: set() for w in machine.alphabet}
    for syms in by_source.values():
        for a, b in itertools.combinations(syms, 2):
            graph[a].add(b)
            graph[b].add(a)
    for per_symbol in into.values():
        for a, b in itertools.combinations(per_symbol, 2):
            # two different sources entering the same target
            if len(per_symbol[a] | per_symbol[b]) > 1:
                graph[a].add(b)
                graph[b].add(a)
    return graph


def chain_partition(machine: FiniteStateMachine) -> ChainPartition:
    """Partition the alphabet into chain blocks by first-fit coloring.

    Symbols are colored in alphabet order with the smallest color not used
    by a conflicting symbol.  The number of blocks is not minimized.
    """
    machine.require_valid()
    for sym in machine.alphabet:
        v = chain_violation(machine, [sym])
        if v is not None:
            raise NotChainDecomposable(sym, (v.first, v.second))
    graph = conflict_graph(machine)
    color: dict[str, int] = {}
    for sym in machine.alphabet:
        taken = {color[n] for n in graph[sym] if n in color}
        c = 0
        while c in taken:
            c += 1
        color[sym] = c
    blocks = []
    for c in range(max(color.values(), default=-1) + 1):
        syms = tuple(w for w in machine.alphabet if color[w] == c)
        trans = frozenset(t for t in machine.transitions if color[t[1]] == c)
        blocks.append(ChainBlock(syms, trans))
    return ChainPartition(tuple(blocks), machine.alphabet)


def _digit_base(n: int, p: int) -> int:
    b = 1
    while b**p < n:
        b += 1
    return b


def synthesize_suite(partition: ChainPartition, p: int) -> AggregationSuite:
    """Mixed-radix suite over the chain blocks.

    Within block ``j`` the i-th symbol is written with ``p`` digits in base
    ``ceil(n_j ** (1/p))``, most significant first; aggregation ``k`` reports
    digit ``k`` tagged with the block, as ``c<j>.d<k>.<digit>``.
    """
    if p < 1:
        raise ValueError("p must be positive")
    maps: list[dict[str, str]] = [{} for _ in range(p)]
    for j, block in enumerate(partition.blocks, 1):
        base = _digit_base(len(block.symbols), p)
        for i, sym in enumerate(block.symbols):
            for k in range(p):
                digit = (i // base ** (p - 1 - k)) % base
                maps[k][sym] = f"c{j}.d{k + 1}.{digit}"
    return AggregationSuite(
        tuple(
            AggregationFunction({w: m[w] for w in partition.alphabet}, index=k)
            for k, m in enumerate(maps, 1)
        )
    )
