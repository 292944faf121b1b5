"""Fixture machines and random generators for tests and demos."""
from __future__ import annotations

import random
from typing import Sequence

from .decomposition import AggregationFunction, AggregationSuite
from .machine import FiniteStateMachine


def m1() -> FiniteStateMachine:
    """Three states, two symbols; every ``b`` transition enters ``s1``."""
    return FiniteStateMachine(
        states=("s1", "s2", "s3"),
        alphabet=("a", "b"),
        transitions={("s1", "a", "s2"), ("s2", "a", "s3"), ("s2", "b", "s1"), ("s3", "b", "s1")},
    )


def m2() -> FiniteStateMachine:
    """Chain-decomposable machine with blocks such as {a1, b1} and {a2, b2}."""
    return FiniteStateMachine(
        states=("x1", "x2", "x3", "x4"),
        alphabet=("a1", "b1", "a2", "b2"),
        transitions={
            ("x1", "a1", "x2"),
            ("x1", "a1", "x3"),
            ("x4", "b1", "x1"),
            ("x2", "a2", "x4"),
            ("x3", "b2", "x1"),
        },
    )


def letter_pair_suite() -> AggregationSuite:
    """Two aggregations over {a,b,c,d} x {1,2}, grouping by letter pairs.

    ``theta<k>^<i>`` is the i-th aggregate symbol of function k.
    """
    a1 = {"a1": 1, "b1": 1, "c1": 2, "d1": 2, "a2": 3, "b2": 3, "c2": 4, "d2": 4}
    a2 = {"a1": 1, "c1": 1, "b1": 2, "d1": 2, "a2": 3, "c2": 3, "b2": 4, "d2": 4}
    order = ("a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2")
    return AggregationSuite(
        (
            AggregationFunction({w: f"theta1^{a1[w]}" for w in order}, index=1),
            AggregationFunction({w: f"theta2^{a2[w]}" for w in order}, index=2),
        )
    )


def _names(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def random_machine(
    rng: random.Random, max_states: int = 8, max_symbols: int = 6, max_out: int = 3
) -> FiniteStateMachine:
    """Non-blocking machine with 1..max_out outgoing transitions per state."""
    states = _names("x", rng.randint(1, max_states))
    alphabet = _names("w", rng.randint(1, max_symbols))
    transitions = set()
    for s in states:
        for _ in range(rng.randint(1, max_out)):
            transitions.add((s, rng.choice(alphabet), rng.choice(states)))
    return FiniteStateMachine(states, alphabet, transitions)


def random_chain_machine(
    rng: random.Random, max_states: int = 8, max_symbols: int = 6, max_chains: int = 3
) -> FiniteStateMachine:
    """Non-blocking machine whose transitions split into non-deterministic chains by construction.

    Within each block every source emits one block symbol and the block's
    target sets are pairwise disjoint across sources.
    """
    n = rng.randint(2, max_states)
    states = _names("x", n)
    m = rng.randint(1, max_symbols)
    alphabet = _names("w", m)
    r = rng.randint(1, min(max_chains, m))
    shuffled = list(alphabet)
    rng.shuffle(shuffled)
    blocks: list[list[str]] = [[] for _ in range(r)]
    for i, w in enumerate(shuffled):
        blocks[i % r if i < r else rng.randrange(r)].append(w)
    home = {s: rng.randrange(r) for s in states}
    transitions = set()
    for j, block in enumerate(blocks):
        sources = [s for s in states if home[s] == j or rng.random() < 0.3]
        pool = list(states)
        rng.shuffle(pool)
        for s in sources:
            if not pool:
                break
            sym = rng.choice(block)
            k = 1 if rng.random() < 0.6 else 2
            targets, pool = pool[:k], pool[k:]
            for t in targets:
                transitions.add((s, sym, t))
    machine = FiniteStateMachine(states, alphabet, transitions)
    if not machine.report.ok:
        # a home source ran out of targets; retry
        return random_chain_machine(rng, max_states, max_symbols, max_chains)
    return machine


def iso_symbol(mu: str, nu: str) -> str:
    return f"{mu}/{nu}"


def random_iso_machine(
    rng: random.Random, max_states: int = 6, max_inputs: int = 3, max_outputs: int = 4
) -> tuple[FiniteStateMachine, tuple[str, ...], tuple[str, ...]]:
    """Deterministic input/state/output machine with a bijective state map per input.

    Returns the machine with its input and output alphabets; symbols are
    ``"<input>/<output>"``.
    """
    states = _names("x", rng.randint(2, max_states))
    inputs = _names("u", rng.randint(1, max_inputs))
    outputs = _names("y", rng.randint(2, max_outputs))
    transitions = set()
    for mu in inputs:
        image = list(states)
        rng.shuffle(image)
        for s, t in zip(states, image):
            transitions.add((s, iso_symbol(mu, rng.choice(outputs)), t))
    alphabet = tuple(iso_symbol(mu, nu) for mu in inputs for nu in outputs)
    return FiniteStateMachine(states, alphabet, transitions), inputs, outputs


def random_consistent_suite(rng: random.Random, alphabet: Sequence[str], p: int | None = None) -> AggregationSuite:
    """Consistent suite from a random mixed-radix code of a shuffled alphabet."""
    n = len(alphabet)
    if p is None:
        p = rng.randint(1, 3)
    bases = [rng.randint(1, max(1, n)) for _ in range(p)]
    prod = 1
    for b in bases[:-1]:
        prod *= b
    bases[-1] = max(bases[-1], -(-n // prod))
    order = list(alphabet)
    rng.shuffle(order)
    maps: list[dict[str, str]] = [{} for _ in range(p)]
    for i, w in enumerate(order):
        rest = i
        for k, b in enumerate(bases):
            maps[k][w] = f"g{k + 1}.{rest % b}"
            rest //= b
    return AggregationSuite(
        tuple(AggregationFunction({w: m[w] for w in alphabet}, index=k) for k, m in enumerate(maps, 1))
    )


def output_suite(
    inputs: Sequence[str], outputs: Sequence[str], output_suite: AggregationSuite
) -> AggregationSuite:
    """Lift a suite over the outputs to ``(input, output)`` symbols, keeping the input."""
    fns = []
    for k, agg in enumerate(output_suite, 1):
        fns.append(
            AggregationFunction(
                {iso_symbol(mu, nu): iso_symbol(mu, agg(nu)) for mu in inputs for nu in outputs}, index=k
            )
        )
    return AggregationSuite(tuple(fns))
