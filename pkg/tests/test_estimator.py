import random

import pytest
from hypothesis import given, settings, strategies as st

from svest.corpus import random_machine
from svest.estimator import (
    EstimatorState,
    brute_force_estimate,
    brute_force_table,
    chi_symbol,
    estimate,
    estimate_incremental,
    estimate_prefixes,
    rho_hat,
)
from svest.machine import FiniteStateMachine

from conftest import all_strings

S = frozenset


def test_chi_symbol(M1):
    assert chi_symbol(M1, "a") == S({"s1", "s2"})
    assert chi_symbol(M1, "b") == S({"s2", "s3"})
    m = FiniteStateMachine(M1.states, ("a", "b", "c"), M1.transitions)
    assert chi_symbol(m, "c") == S()


def test_rho_hat(M1):
    assert rho_hat(M1, "a", {"s1"}) == S({"s2"})
    assert rho_hat(M1, "a", {"s1", "s2"}) == S({"s2", "s3"})
    assert rho_hat(M1, "b", set()) == S()


def test_estimate_examples(M1):
    assert estimate(M1, ["a"]).to_json() == {"chi": ["s1", "s2"], "rho": ["s2", "s3"]}
    assert estimate(M1, ["a", "a"]).to_json() == {"chi": ["s2"], "rho": ["s3"]}
    assert estimate(M1, ["b", "b"]).to_json() == {"chi": [], "rho": []}


def test_incremental_examples(M1):
    st0 = EstimatorState.initial(M1)
    st1 = estimate_incremental(st0, "a")
    assert st1.compatible == S({"s1", "s2"}) and st1.carried == S({"s2", "s3"})
    st2 = estimate_incremental(st1, "a")
    assert st2.carried == S({"s3"})
    st3 = estimate_incremental(st2, "b")
    assert st3.compatible == S({"s3"}) and st3.carried == S({"s1"})
    with pytest.raises(ValueError):
        st0.pair()


def test_brute_force_examples(M1):
    assert brute_force_estimate(M1, ["a", "a"]).to_json() == {"chi": ["s2"], "rho": ["s3"]}
    for w in M1.alphabet:
        pair = brute_force_estimate(M1, [w])
        assert pair.chi == chi_symbol(M1, w)
        assert pair.rho == rho_hat(M1, w, chi_symbol(M1, w))
    anchored = brute_force_estimate(M1, ["a"], tau=1, horizon=1)
    assert anchored.chi == S({"s1", "s2"})


def test_anchored_semantics_differ_with_sourceless_state():
    # s0 has no predecessor, so a run can only sit in s0 at time 0
    m = FiniteStateMachine(("s0", "s1"), ("a",), {("s0", "a", "s1"), ("s1", "a", "s1")})
    assert estimate(m, ["a"]).chi == S({"s0", "s1"})
    assert brute_force_estimate(m, ["a"], tau=1, horizon=1).chi == S({"s1"})
    assert brute_force_estimate(m, ["a"], tau=1, horizon=0).chi == S({"s0", "s1"})


def test_empty_string_rejected(M1):
    with pytest.raises(ValueError):
        estimate(M1, [])


def test_oracle_table_agrees_on_m1(M1):
    for r in range(1, 5):
        table = brute_force_table(M1, r)
        for w in all_strings(M1.alphabet, r):
            if len(w) != r:
                continue
            pair = estimate(M1, w)
            if w in table:
                assert pair == table[w]
            else:
                assert not pair.chi and not pair.rho


def _machines():
    return st.integers(0, 10**6).map(lambda s: random_machine(random.Random(s), max_states=6, max_symbols=4))


@settings(max_examples=80, deadline=None)
@given(_machines(), st.data())
def test_incremental_equals_batch(m, data):
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=6))
    state = EstimatorState.initial(m)
    for k, pair in enumerate(estimate_prefixes(m, w)):
        state = estimate_incremental(state, w[k])
        assert state.pair() == pair
        # predicted set is the image of the compatible set
        assert pair.rho == rho_hat(m, w[k], pair.chi)


@settings(max_examples=80, deadline=None)
@given(_machines(), st.data())
def test_emptiness_propagates(m, data):
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=7))
    seen_empty = False
    for pair in estimate_prefixes(m, w):
        if seen_empty:
            assert not pair.chi and not pair.rho
        seen_empty = seen_empty or not pair.chi


@settings(max_examples=60, deadline=None)
@given(_machines(), st.data())
def test_suffix_monotonicity(m, data):
    w = data.draw(st.lists(st.sampled_from(m.alphabet), min_size=1, max_size=5))
    pairs = [estimate(m, w[i:]) for i in range(len(w))]
    for longer, shorter in zip(pairs, pairs[1:]):
        assert longer.chi <= shorter.chi
        assert longer.rho <= shorter.rho
