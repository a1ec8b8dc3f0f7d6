import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import path_behavior, words
from ratseries.automaton import (WeightedAutomaton, behavior, compile_term, complement, determinize,
                                 hadamard_automaton, push_forward, state_eliminate, support_automaton, trim,
                                 zero_automaton)
from ratseries.errors import DimensionMismatch, ImproperStar, NotPositive
from ratseries.random_gen import random_automaton, random_term
from ratseries.semiring import BOOL, INF, NAT, NAT_INF, RAT, get_semiring
from ratseries.series import SeriesAlgebra, hadamard, series_add, support_series
from ratseries.terms import eval_series, parse_term, to_text

LOOP_A = lambda S: WeightedAutomaton(S, "a", [1], {"a": [[1]]}, [1])
AB_LOOP = WeightedAutomaton(NAT, "ab", [1, 0], {"a": [[0, 1], [0, 0]], "b": [[0, 0], [1, 0]]}, [1, 0])


def test_behavior_examples():
    A = LOOP_A(BOOL)
    assert path_behavior(A, 5) == {"a" * n: 1 for n in range(6)}
    assert behavior(A, 5).coeffs == path_behavior(A, 5)
    B = WeightedAutomaton(NAT, "ab", [2, 3], {}, [5, 1])
    assert behavior(B, 4).coeffs == {"": 13}
    C = WeightedAutomaton(NAT, "a", [1, 0], {"a": [[0, 1], [0, 0]]}, [0, 1])
    assert behavior(C, 5).coeffs == {"a": 1}


@pytest.mark.parametrize("sid", ["bool", "nat", "nat-k:3", "nat-inf", "trop", "int"])
def test_behavior_matches_path_sums(sid):
    S = get_semiring(sid)
    rng = random.Random(sid)
    for _ in range(15):
        A = random_automaton(rng, S, "ab", rng.randint(1, 3))
        assert behavior(A, 4).coeffs == path_behavior(A, 4)


def test_compile_examples():
    assert behavior(compile_term(parse_term("0", BOOL), BOOL, "a"), 6).is_zero()
    a_star = compile_term(parse_term("a*", BOOL), BOOL, "a")
    assert behavior(a_star, 6).coeffs == {"a" * n: 1 for n in range(7)}
    abp = compile_term(parse_term("(a.b)^+", NAT), NAT, "ab")
    assert behavior(abp, 8).coeffs == {"ab" * n: 1 for n in range(1, 5)}


def test_compile_rejects_improper_star_in_partial_semiring():
    with pytest.raises(ImproperStar):
        compile_term(parse_term("(1 + a)*", NAT), NAT, "a")
    A = compile_term(parse_term("([1/2] + a)*", RAT), RAT, "a")
    s = eval_series(parse_term("([1/2] + a)*", RAT), RAT, "a", 4)
    assert behavior(A, 4) == s


def test_compile_total_star_of_non_proper_term():
    t = parse_term("(1 + a)*", NAT_INF)
    assert behavior(compile_term(t, NAT_INF, "a"), 4).coeffs == {"a" * n: INF for n in range(5)}


@pytest.mark.parametrize("sid", ["bool", "nat", "nat-k:3", "nat-inf", "rat", "trop"])
def test_kleene_round_trip(sid):
    S = get_semiring(sid)
    rng = random.Random("kleene" + sid)
    for _ in range(30):
        t = random_term(rng, S, ["a", "b"], depth=5)
        assert behavior(compile_term(t, S, "ab"), 6) == eval_series(t, S, "ab", 6), to_text(t)


def test_state_elimination_examples():
    t = state_eliminate(LOOP_A(BOOL))
    assert eval_series(t, BOOL, "a", 8) == eval_series(parse_term("a*", BOOL), BOOL, "a", 8)
    Z = WeightedAutomaton(NAT, "ab", [2, 1], {}, [3, 4])
    assert to_text(state_eliminate(Z)) == "[10]"
    t = state_eliminate(AB_LOOP)
    assert eval_series(t, NAT, "ab", 8) == eval_series(parse_term("(a.b)*", NAT), NAT, "ab", 8)


@pytest.mark.parametrize("sid", ["bool", "nat", "nat-k:3", "nat-inf", "rat", "int"])
def test_reverse_round_trip(sid):
    S = get_semiring(sid)
    rng = random.Random("rev" + sid)
    for _ in range(20):
        A = random_automaton(rng, S, "ab", rng.randint(1, 4))
        assert eval_series(state_eliminate(A), S, "ab", 6) == behavior(A, 6)


def test_push_forward_examples():
    A = LOOP_A(NAT_INF)
    assert push_forward(A, {"a": 0}, NAT_INF) == 1
    assert push_forward(A, {"a": 1}, NAT_INF) is INF
    alg = SeriesAlgebra(NAT, "ab", 6)
    assert push_forward(AB_LOOP, alg.letter, alg) == behavior(AB_LOOP, 6)


def test_push_forward_agrees_with_behavior_randomly():
    rng = random.Random(3)
    for sid in ("nat", "bool", "nat-inf"):
        S = get_semiring(sid)
        alg = SeriesAlgebra(S, "ab", 5)
        for _ in range(10):
            A = random_automaton(rng, S, "ab", rng.randint(1, 4))
            assert push_forward(A, alg.letter, alg) == behavior(A, 5)


def test_behavior_splits_into_constant_and_proper_part():
    rng = random.Random(9)
    for _ in range(20):
        A = random_automaton(rng, NAT, "ab", 3)
        s = behavior(A, 5)
        assert s.constant_term() == (A.alpha @ A.beta)[0, 0]


def test_behavior_is_linear_in_alpha_and_beta():
    rng = random.Random(10)
    for _ in range(20):
        n = rng.randint(1, 3)
        A = random_automaton(rng, NAT, "ab", n)
        a2 = [rng.randint(0, 2) for _ in range(n)]
        b2 = [rng.randint(0, 2) for _ in range(n)]
        Aa = WeightedAutomaton(NAT, "ab", a2, A.delta, A.beta)
        Asum = WeightedAutomaton(NAT, "ab", [x + y for x, y in zip(A.alpha_list(), a2)], A.delta, A.beta)
        assert behavior(Asum, 4) == series_add(behavior(A, 4), behavior(Aa, 4))
        Ab = WeightedAutomaton(NAT, "ab", A.alpha, A.delta, b2)
        Bsum = WeightedAutomaton(NAT, "ab", A.alpha, A.delta, [x + y for x, y in zip(A.beta_list(), b2)])
        assert behavior(Bsum, 4) == series_add(behavior(A, 4), behavior(Ab, 4))


def test_json_round_trip_and_validation():
    doc = AB_LOOP.to_json()
    assert doc == {"semiring": "nat", "alphabet": ["a", "b"], "n": 2, "alpha": [1, 0],
                   "beta": [1, 0], "delta": {"a": [[0, 1], [0, 0]], "b": [[0, 0], [1, 0]]}}
    assert WeightedAutomaton.from_json(json.loads(AB_LOOP.dumps())) == AB_LOOP
    with pytest.raises(DimensionMismatch):
        WeightedAutomaton(NAT, "a", [1, 0], {"a": [[1]]}, [1, 0])
    with pytest.raises(DimensionMismatch):
        WeightedAutomaton(NAT, "a", [1], {"b": [[1]]}, [1])


def test_hadamard_and_support_automata():
    rng = random.Random(12)
    for _ in range(15):
        A = random_automaton(rng, NAT, "ab", 2)
        B = random_automaton(rng, NAT, "ab", 3)
        assert behavior(hadamard_automaton(A, B), 5) == hadamard(behavior(A, 5), behavior(B, 5))
        assert behavior(support_automaton(A), 5) == support_series(behavior(A, 5))
    with pytest.raises(NotPositive):
        support_automaton(random_automaton(rng, get_semiring("int"), "ab", 2))


def test_determinize_complement_and_trim_over_bool():
    rng = random.Random(13)
    for _ in range(15):
        A = random_automaton(rng, BOOL, "ab", 3)
        s = behavior(A, 5)
        assert behavior(determinize(A), 5) == s
        c = behavior(complement(A), 5)
        for w in words("ab", 5):
            assert c.coefficient(w) == 1 - s.coefficient(w)
        assert behavior(trim(A), 5) == s if trim(A).n else s.is_zero()


def test_trim_removes_useless_states():
    A = WeightedAutomaton(NAT, "a", [1, 0, 0], {"a": [[0, 1, 0], [0, 0, 0], [0, 0, 1]]}, [0, 1, 1])
    T = trim(A)
    assert T.n == 2 and behavior(T, 5) == behavior(A, 5)
    assert behavior(trim(zero_automaton(NAT, "a")), 3).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["bool", "nat", "nat-inf", "nat-k:3"]))
def test_kleene_round_trip_property(seed, sid):
    S = get_semiring(sid)
    rng = random.Random(seed)
    t = random_term(rng, S, ["a", "b"], depth=4)
    A = compile_term(t, S, "ab")
    assert behavior(A, 5) == eval_series(t, S, "ab", 5)
    assert eval_series(state_eliminate(A), S, "ab", 5) == behavior(A, 5)
