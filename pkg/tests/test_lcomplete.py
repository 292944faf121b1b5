import random

import pytest
from hypothesis import given, settings, strategies as st

from svest.corpus import random_chain_machine, random_consistent_suite, random_machine
from svest.decomposition import build_distributed, chain_partition, synthesize_suite
from svest.estimator import estimate
from svest.lcomplete import (
    FiniteSource,
    LCompleteAutomaton,
    build_lcomplete,
    complexity_report,
    fused_window_estimates,
    online_estimate,
    window_estimates,
)
from svest.machine import BudgetExceeded, UnknownSymbol, is_feasible

S = frozenset


def test_m1_ell1(M1):
    auto = build_lcomplete(FiniteSource(M1), 1)
    assert auto.states == [("a",), ("b",)]
    assert auto.transitions == {(("a",), "a"): ("a",), (("a",), "b"): ("b",), (("b",), "a"): ("a",)}
    report = complexity_report(auto, "feasible")
    assert (report.state_count, report.annotation_size) == (2, 4)


def test_m1_ell2(M1):
    auto = build_lcomplete(FiniteSource(M1), 2)
    assert len(auto.states) == 5
    assert set(z for z in auto.states if len(z) == 2) == {("a", "a"), ("a", "b"), ("b", "a")}
    assert auto.annotations[("a", "b")] == S({"s2", "s3"})
    out = list(online_estimate(auto, ["a", "a", "b"]))
    assert out == [S({"s1", "s2"}), S({"s2"}), estimate(M1, ["a", "b"]).chi]


def test_counting_conventions(M1):
    auto = build_lcomplete(FiniteSource(M1), 2)
    counts = {c: complexity_report(auto, c).state_count for c in ("all", "feasible", "reachable")}
    # every feasible window of M1 is entered by some slide
    assert counts == {"all": 6, "feasible": 5, "reachable": 5}
    with pytest.raises(ValueError):
        complexity_report(auto, "bogus")


def test_reachable_without_transitions_matches(M1, M2):
    for m in (M1, M2):
        for ell in (1, 2, 3):
            full = build_lcomplete(FiniteSource(m), ell)
            lean = build_lcomplete(FiniteSource(m), ell, transitions=False)
            assert full.recurrent == lean.recurrent
            assert full.states == lean.states


def test_infeasible_stream_sinks(M1, caplog):
    auto = build_lcomplete(FiniteSource(M1), 2)
    out = list(online_estimate(auto, ["b", "b", "a"]))
    assert out[0] == S({"s2", "s3"}) and out[1] == S() and out[2] == S()
    assert "empty sink" in caplog.text
    with pytest.raises(UnknownSymbol):
        list(online_estimate(auto, ["z"]))


def test_budget(M1):
    with pytest.raises(BudgetExceeded):
        build_lcomplete(FiniteSource(M1), 3, budget=4)
    with pytest.raises(ValueError):
        build_lcomplete(FiniteSource(M1), 0)


def test_json_round_trip(M2):
    auto = build_lcomplete(FiniteSource(M2), 2)
    again = LCompleteAutomaton.from_json(auto.to_json())
    assert again.states == auto.states
    assert again.transitions == auto.transitions
    assert again.recurrent == auto.recurrent
    for conv in ("all", "feasible", "reachable"):
        a, b = complexity_report(auto, conv), complexity_report(again, conv)
        assert (a.state_count, a.annotation_size) == (b.state_count, b.annotation_size)


def _machine():
    return st.integers(0, 10**6).map(lambda s: random_machine(random.Random(s), max_states=6, max_symbols=3))


@settings(max_examples=60, deadline=None)
@given(_machine(), st.data())
def test_online_matches_batch(m, data):
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=7))
    for ell in (1, 2, 3):
        auto = build_lcomplete(FiniteSource(m), ell)
        online = list(online_estimate(auto, w))
        if is_feasible(m, w):
            assert online == window_estimates(FiniteSource(m), w, ell)
        for t, chi in enumerate(online):
            if auto.accepts(w[: t + 1]):
                assert chi == estimate(m, w[max(0, t - ell + 1): t + 1]).chi


@settings(max_examples=60, deadline=None)
@given(_machine(), st.data())
def test_longer_windows_refine(m, data):
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=7))
    src = FiniteSource(m)
    est = {ell: window_estimates(src, w, ell) for ell in (1, 2, 3)}
    for t in range(len(w)):
        assert est[3][t] <= est[2][t] <= est[1][t]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_fused_windows(seed, data):
    rng = random.Random(seed)
    m = random_chain_machine(rng, max_states=6, max_symbols=4)
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=6))
    for suite, exact in (
        (random_consistent_suite(rng, m.alphabet), False),
        (synthesize_suite(chain_partition(m), 2), True),
    ):
        sources = [FiniteSource(build_distributed(m, agg).machine) for agg in suite]
        fused, _ = fused_window_estimates(sources, list(suite), w, 2)
        mono = window_estimates(FiniteSource(m), w, 2)
        for f, g in zip(fused, mono):
            assert f >= g
            if exact:
                assert f == g
