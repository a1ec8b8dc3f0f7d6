import copy
import itertools
import pickle
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratseries.errors import NotAUnit, NotPositive, ParseError, StarUndefined
from ratseries.semiring import (BOOL, INF, INT, NAT, NAT_INF, RAT, TROP, adjoin_infinity, get_semiring,
                                scalar_inverse, semiring_star)

ALL_IDS = ["bool", "nat", "int", "rat", "trop", "nat-inf", "nat-k:3", "nat-k:5", "chain:3",
           "zmod:2", "zmod:3", "bool-inf", "nat-k:3-inf"]
TOTAL_IDS = ["bool", "nat-k:3", "nat-inf", "trop", "chain:3"]


def triples(S, seed=0, n=150):
    if S.finite:
        return list(itertools.product(S.elements, repeat=3))
    rng = random.Random(seed)
    return [(S.sample(rng), S.sample(rng), S.sample(rng)) for _ in range(n)]


@pytest.mark.parametrize("sid", ALL_IDS)
def test_semiring_axioms(sid):
    S = get_semiring(sid)
    for a, b, c in triples(S):
        assert S.add(S.add(a, b), c) == S.add(a, S.add(b, c))
        assert S.add(a, b) == S.add(b, a)
        assert S.add(a, S.zero) == a
        assert S.mul(S.mul(a, b), c) == S.mul(a, S.mul(b, c))
        assert S.mul(a, S.one) == a == S.mul(S.one, a)
        assert S.mul(a, S.add(b, c)) == S.add(S.mul(a, b), S.mul(a, c))
        assert S.mul(S.add(a, b), c) == S.add(S.mul(a, c), S.mul(b, c))
        assert S.mul(a, S.zero) == S.zero == S.mul(S.zero, a)


@pytest.mark.parametrize("sid", ALL_IDS)
def test_star_fixed_point_wherever_defined(sid):
    S = get_semiring(sid)
    elems = S.elements if S.finite else [S.sample(random.Random(i)) for i in range(100)]
    for a in elems:
        if S.star_domain(a):
            assert S.add(S.mul(a, S.star(a)), S.one) == S.star(a)


@pytest.mark.parametrize("sid", TOTAL_IDS)
def test_conway_identities_on_pairs(sid):
    S = get_semiring(sid)
    pairs = (itertools.product(S.elements, repeat=2) if S.finite
             else [(S.sample(random.Random(2 * i)), S.sample(random.Random(2 * i + 1))) for i in range(200)])
    for a, b in pairs:
        assert S.star(S.add(a, b)) == S.mul(S.star(S.mul(S.star(a), b)), S.star(a))
        assert S.star(S.mul(a, b)) == S.add(S.one, S.mul(S.mul(a, S.star(S.mul(b, a))), b))


@pytest.mark.parametrize("sid", TOTAL_IDS)
def test_total_star_semirings_are_zerosum_free(sid):
    S = get_semiring(sid)
    rng = random.Random(5)
    pairs = (itertools.product(S.elements, repeat=2) if S.finite
             else [(S.sample(rng), S.sample(rng)) for _ in range(200)])
    for a, b in pairs:
        if S.is_zero(S.add(a, b)):
            assert S.is_zero(a) and S.is_zero(b)


def test_positive_flag_is_honest():
    for sid in ALL_IDS:
        S = get_semiring(sid)
        if not S.positive:
            continue
        for a, b, _ in triples(S, 3):
            if S.is_zero(S.add(a, b)):
                assert S.is_zero(a) and S.is_zero(b)
            if S.is_zero(S.mul(a, b)):
                assert S.is_zero(a) or S.is_zero(b)


def test_bool_one_star():
    assert BOOL.star(1) == 1


def test_star_examples():
    assert semiring_star(get_semiring("nat-k:3"), 2) == 2
    assert semiring_star(NAT_INF, 3) is INF
    assert semiring_star(RAT, Fraction(1, 2)) == 2
    for sid in ALL_IDS:
        S = get_semiring(sid)
        assert S.star(S.zero) == S.one


def test_rational_star_satisfies_fixed_point_at_half():
    a = Fraction(1, 2)
    assert a * RAT.star(a) + 1 == RAT.star(a)


def test_star_undefined():
    with pytest.raises(StarUndefined):
        NAT.star(2)
    with pytest.raises(StarUndefined):
        INT.star(-1)
    with pytest.raises(StarUndefined):
        RAT.star(Fraction(1))
    with pytest.raises(StarUndefined):
        get_semiring("zmod:3").star(1)


def test_adjoin_infinity_arithmetic():
    assert NAT_INF.add(INF, 5) is INF
    assert NAT_INF.add(5, INF) is INF
    assert NAT_INF.mul(0, INF) == 0
    assert NAT_INF.mul(INF, 0) == 0
    assert NAT_INF.mul(3, INF) is INF
    assert NAT_INF.star(0) == 1
    assert NAT_INF.total_star
    assert NAT_INF.base is NAT


def test_adjoin_infinity_requires_positive():
    with pytest.raises(NotPositive):
        adjoin_infinity(INT)
    with pytest.raises(NotPositive):
        adjoin_infinity(RAT)
    with pytest.raises(ValueError):
        adjoin_infinity(TROP)


def test_inverses():
    for sid in ALL_IDS:
        S = get_semiring(sid)
        assert scalar_inverse(S, S.one) == S.one
    assert scalar_inverse(RAT, Fraction(2)) == Fraction(1, 2)
    with pytest.raises(NotAUnit):
        scalar_inverse(NAT, 2)
    with pytest.raises(NotAUnit):
        scalar_inverse(RAT, Fraction(0))
    assert scalar_inverse(INT, -1) == -1
    assert scalar_inverse(get_semiring("zmod:3"), 2) == 2


@pytest.mark.parametrize("sid", ALL_IDS)
def test_units_multiply_to_one(sid):
    S = get_semiring(sid)
    for u in S.units():
        v = S.inverse(u)
        assert S.mul(u, v) == S.one == S.mul(v, u)


def test_parse_and_format():
    assert BOOL.parse("T") == 1 and BOOL.parse("F") == 0
    assert RAT.parse("3/6") == Fraction(1, 2)
    assert RAT.format(Fraction(-1, 3)) == "-1/3"
    assert NAT_INF.parse("inf") is INF
    assert TROP.parse("inf") is INF and TROP.parse("4") == 4
    assert get_semiring("nat-k:3").parse("2") == 2
    for bad, S in (("x", NAT), ("-1", NAT), ("2", BOOL), ("3", get_semiring("nat-k:3")), ("1.5", RAT)):
        with pytest.raises(ParseError):
            S.parse(bad)


def test_infinity_tag_is_a_singleton():
    assert pickle.loads(pickle.dumps(INF)) is INF
    assert copy.deepcopy(INF) is INF
    assert repr(INF) == "inf"


def test_unknown_semiring():
    with pytest.raises(ValueError):
        get_semiring("float")


def test_nat_k_table():
    S = get_semiring("nat-k:4")
    assert S.add(2, 2) == 3 and S.mul(2, 3) == 3
    assert [S.star(x) for x in S.elements] == [1, 3, 3, 3]
    assert not S.idempotent and get_semiring("nat-k:2").idempotent


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_rational_star_property(a):
    if a == 1:
        with pytest.raises(StarUndefined):
            RAT.star(a)
    else:
        assert a * RAT.star(a) + 1 == RAT.star(a)
