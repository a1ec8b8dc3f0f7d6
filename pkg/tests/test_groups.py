import itertools
import random

import pytest

from ratseries.errors import ParseError
from ratseries.groups import (FiniteGroup, GroupIdentity, build_identity, check_identity, cyclic, group_matrix,
                              klein_four, parse_group, row_multisets_agree)
from ratseries.matrix import mat_star
from ratseries.semiring import BOOL, NAT, get_semiring
from ratseries.terms import Prod, Star, Sum, evaluate, to_text, var

N3 = get_semiring("nat-k:3")
GROUPS = [cyclic(2), cyclic(3), cyclic(4), klein_four()]


def names(M):
    return [[to_text(t) for t in row] for row in M.entries]


def test_group_matrix_examples():
    assert names(group_matrix(cyclic(1))) == [["x1"]]
    assert names(group_matrix(cyclic(2))) == [["x1", "x2"], ["x2", "x1"]]
    assert names(group_matrix(cyclic(3))) == [["x1", "x2", "x3"], ["x3", "x1", "x2"], ["x2", "x3", "x1"]]


@pytest.mark.parametrize("G", GROUPS + [cyclic(5), cyclic(6)], ids=lambda G: G.name)
def test_rows_and_columns_are_permutations(G):
    M = group_matrix(G)
    first = sorted(names(M)[0])
    assert first == sorted(f"x{i}" for i in range(1, G.n + 1))
    for line in names(M) + [list(c) for c in zip(*names(M))]:
        assert sorted(line) == first


def test_trivial_group_identity():
    ident = build_identity(cyclic(1))
    assert ident.to_text() == "x1* = x1*"


def test_c2_identity_matches_block_formula():
    # M = [[a, b], [c, d]]: first row of M* is ((a + b d* c)*, (a + b d* c)* b d*)
    x1, x2 = var(1), var(2)
    top = Star(Sum(x1, Prod(Prod(x2, Star(x1)), x2)))
    expected = Sum(top, Prod(Prod(top, x2), Star(x1)))
    ident = build_identity(cyclic(2))
    assert ident.lhs == expected
    assert to_text(ident.lhs) == "(x1 + x2.x1*.x2)* + (x1 + x2.x1*.x2)*.x2.x1*"
    assert to_text(ident.rhs) == "(x1 + x2)*"


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
@pytest.mark.parametrize("S", [BOOL, N3], ids=lambda S: S.id)
def test_identities_hold_exhaustively(G, S):
    r = check_identity(build_identity(G), S)
    assert r.holds and r.checked == len(S.elements) ** G.n and r.skipped == 0


def test_c2_case_counts():
    assert check_identity(build_identity(cyclic(2)), BOOL).checked == 4
    assert check_identity(build_identity(cyclic(2)), N3).checked == 9


def test_fake_identity_fails_at_zero():
    fake = GroupIdentity(Star(var(1)), var(1), ["x1"])
    r = check_identity(fake, BOOL)
    assert not r.holds and r.counterexample == {"x1": 0}
    assert (r.lhs_value, r.rhs_value) == (1, 0)
    assert "FAIL" in r.to_text()


@pytest.mark.parametrize("G", [cyclic(2), cyclic(3)], ids=lambda G: G.name)
def test_identities_hold_on_proper_series(G):
    r = check_identity(build_identity(G), NAT, mode="series", samples=15, max_len=5)
    assert r.holds and r.checked == 15


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
@pytest.mark.parametrize("S", [BOOL, N3, get_semiring("chain:3")], ids=lambda S: S.id)
def test_star_rows_are_rearrangements_of_the_first(G, S):
    for values in itertools.islice(itertools.product(S.elements, repeat=G.n), 200):
        assert row_multisets_agree(G, S, values)


def test_first_row_terms_evaluate_like_matrix_star():
    G = cyclic(3)
    ident = build_identity(G)
    rng = random.Random(0)
    for _ in range(20):
        env = {f"x{i}": rng.choice(N3.elements) for i in range(1, 4)}
        M = group_matrix(G).map(lambda t: evaluate(t, N3, env), N3)
        assert [evaluate(t, N3, env) for t in ident.first_row] == list(mat_star(M).entries[0])


def test_group_parsing_and_validation():
    assert parse_group("C4").n == 4 and parse_group("v4").n == 4
    G = parse_group('{"n": 2, "table": [[1, 2], [2, 1]]}')
    assert G.table_1based() == [[1, 2], [2, 1]]
    with pytest.raises(ParseError):
        parse_group("Q8")
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        FiniteGroup.from_table([[1, 2, 3], [2, 3, 1], [3, 2, 1]])
    with pytest.raises(ValueError):
        check_identity(build_identity(cyclic(2)), NAT)
