import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import oracle_eval
from ratseries.automaton import behavior, hadamard_automaton, support_automaton, trim, zero_automaton
from ratseries.conway import (decide_equiv, fold_constants, infinite_support, normal_form, normalize,
                              refine_disjoint, simple_automaton)
from ratseries.equivalence import exact_equiv
from ratseries.errors import UnsupportedSemiring
from ratseries.random_gen import random_term
from ratseries.semiring import BOOL, INF, NAT_INF, get_semiring
from ratseries.terms import ZERO, Const, constant_term, eval_series, is_simple, parse_term, to_text

S = NAT_INF


def P(text, semiring=S):
    return parse_term(text, semiring)


def ev(t, L=6, alphabet=None):
    return eval_series(t, S, alphabet, L)


def test_eval_examples():
    assert ev(P("0"), alphabet="a").is_zero()
    assert ev(P("x1*")).coeffs == {"a" * n: 1 for n in range(7)}
    assert ev(P("[inf].x1")).coeffs == {"a": INF}


def test_fold_constants_examples():
    assert fold_constants(P("[2].[3]")) == Const(6)
    assert fold_constants(P("[2]*")) == Const(INF)
    assert fold_constants(P("[0]*")) == Const(1)
    assert fold_constants(P("0")) == Const(0)
    assert fold_constants(P("x1.([2] + [3])*")) == P("x1.[inf]")
    assert fold_constants(P("x1 + 1.[4]")) == P("x1 + [4]")


def test_normalize_examples():
    nf = normalize(P("x1*"))
    assert (nf.const, to_text(nf.simple), nf.infinite) == (1, "x1^+", ZERO)
    nf = normalize(P("([1] + x1)*"))
    assert (nf.const, nf.simple, to_text(nf.infinite)) == (INF, ZERO, "x1^+")
    assert normalize(P("0")).components() == (0, ZERO, ZERO)


def test_refine_examples():
    nf = refine_disjoint(normalize(P("x1 + [inf].x1")))
    assert nf.simple == ZERO and to_text(nf.infinite) == "x1"
    nf0 = normalize(P("x1.x2 + [3]"))
    nf = refine_disjoint(nf0)
    assert nf.components() == nf0.components() and nf.disjoint_supports
    nf = refine_disjoint(normalize(P("x1 + x2 + [inf].x1")))
    assert to_text(nf.infinite) == "x1"
    assert ev(nf.simple, alphabet="ab") == ev(P("x2"), alphabet="ab")


def test_infinite_constant_moves_into_infinite_part():
    nf = normal_form(P("([1] + x1)*"))
    assert nf.const == 0 and nf.simple == ZERO
    assert ev(nf.as_term()) == ev(P("([1] + x1)*"))


def test_decide_examples():
    assert decide_equiv(P("x1 + [inf].x1"), P("[inf].x1"))
    assert decide_equiv(P("x1*"), P("[1] + x1.x1*"))
    v = decide_equiv(P("x1"), P("x2"))
    assert not v and v.witness == "a"


def test_decide_witnesses():
    v = decide_equiv(P("x1* + x1"), P("x1*"))
    assert not v and v.witness == "a"
    v = decide_equiv(P("[2]"), P("[3]"))
    assert not v and v.witness == ""
    v = decide_equiv(P("(x1.x1)* + [inf].x1.x1.x1"), P("(x1.x1)*"))
    assert not v and v.witness == "aaa"
    assert decide_equiv(P("(x1 + x2)*"), P("(x1*.x2)*.x1*"))
    assert decide_equiv(P("[inf].(x1 + [2].x1)"), P("[inf].x1"))


def test_decide_requires_an_exact_base():
    with pytest.raises(UnsupportedSemiring):
        decide_equiv(P("x1", BOOL), P("x1", BOOL), BOOL)
    # a finite base has an exact decider, so its extension is decided too
    n3 = get_semiring("nat-k:3-inf")
    assert decide_equiv(P("[2].x1 + x1", n3), P("[2].x1", n3), n3)
    v = decide_equiv(P("x1 + x1", n3), P("x1", n3), n3)
    assert not v and v.witness == "a"


def test_pipeline_matches_recursive_oracle_on_small_terms():
    rng = random.Random(21)
    for _ in range(40):
        t = random_term(rng, S, ["x1", "x2"], depth=3)
        ref = oracle_eval(t, S, "ab", 4)
        assert ev(t, 4, "ab").coeffs == ref
        assert ev(normal_form(t, S, "ab").as_term(), 4, "ab").coeffs == ref


def _check_invariants(t, nf, alphabet):
    assert is_simple(nf.simple)
    assert S.is_zero(nf.const) or constant_term(nf.infinite, S) == 0
    assert nf.disjoint_supports and nf.const is not INF
    a0 = simple_automaton(nf)
    ai = infinite_support(nf)
    overlap = trim(hadamard_automaton(support_automaton(a0), ai))
    assert exact_equiv(overlap, zero_automaton(BOOL, alphabet))
    if not S.is_zero(nf.const):
        assert ai.weight("") == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normal_form_preserves_semantics_and_invariants(seed):
    rng = random.Random(seed)
    t = random_term(rng, S, ["x1", "x2", "x3"], depth=5)
    alphabet = ("a", "b", "c")
    ref = ev(t, 6, alphabet)
    nf = normalize(t)
    assert ev(nf.as_term(), 6, alphabet) == ref
    assert is_simple(nf.simple)
    assert S.is_zero(nf.const) or constant_term(nf.infinite, S) == 0
    rf = refine_disjoint(nf, alphabet)
    assert ev(rf.as_term(), 6, alphabet) == ref
    assert behavior(simple_automaton(rf), 6).coeffs == ev(rf.simple, 6, alphabet).coeffs
    _check_invariants(t, rf, alphabet)
    assert ev(fold_constants(t), 6, alphabet) == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_decide_is_reflexive_and_agrees_with_truncation(seed):
    rng = random.Random(seed)
    s = random_term(rng, S, ["x1", "x2"], depth=4)
    t = random_term(rng, S, ["x1", "x2"], depth=4)
    assert decide_equiv(s, s)
    v = decide_equiv(s, t)
    if v:
        assert ev(s, 6, "ab") == ev(t, 6, "ab")
    else:
        L = len(v.witness)
        assert ev(s, L, "ab").coefficient(v.witness) != ev(t, L, "ab").coefficient(v.witness)
