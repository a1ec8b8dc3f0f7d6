import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_matmul, reflexive_transitive_closure
from ratseries.errors import DimensionMismatch, NotInvertibleDiagonal, NotSquare, StarUndefined
from ratseries.matrix import (Matrix, conjugate_by_diagonal, elimination_star, mat_plus, mat_star,
                              solve_left_linear)
from ratseries.random_gen import random_matrix, random_series
from ratseries.semiring import BOOL, INF, NAT, NAT_INF, RAT, get_semiring
from ratseries.series import SeriesAlgebra

N3 = get_semiring("nat-k:3")
F = Fraction


def test_bool_one_by_one():
    assert mat_star(Matrix(BOOL, [[1]])) == Matrix(BOOL, [[1]])


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_zero_matrix_star_is_identity(n):
    for S in (BOOL, NAT, RAT, NAT_INF):
        assert mat_star(Matrix.zeros(S, n, n)) == Matrix.identity(S, n)
        assert mat_plus(Matrix.zeros(S, n, n)) == Matrix.zeros(S, n, n)


def test_swap_matrix_over_bool_matches_closure():
    rel = [[0, 1], [1, 0]]
    expected = reflexive_transitive_closure(rel)
    assert expected == [[1, 1], [1, 1]]
    assert mat_star(Matrix(BOOL, rel)).tolist() == expected


def test_bool_star_is_reflexive_transitive_closure():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 6)
        rel = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        assert mat_star(Matrix(BOOL, rel)).tolist() == reflexive_transitive_closure(rel)


def test_plus_examples():
    assert mat_plus(Matrix(N3, [[1]])) == Matrix(N3, [[2]])
    assert mat_plus(Matrix(NAT_INF, [[2]])) == Matrix(NAT_INF, [[INF]])


def test_star_errors():
    with pytest.raises(NotSquare):
        mat_star(Matrix(BOOL, [[1, 0]]))
    with pytest.raises(StarUndefined):
        mat_star(Matrix(NAT, [[0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        mat_star(Matrix(BOOL, [[1, 0], [0, 1]]), split=2)


def test_rational_two_by_two_inverse():
    M = Matrix(RAT, [[F(0), F(1, 2)], [F(1, 3), F(0)]])
    S = mat_star(M)
    # (I - M)^{-1} computed by hand: det = 1 - 1/6 = 5/6
    assert S.tolist() == [[F(6, 5), F(3, 5)], [F(2, 5), F(6, 5)]]


@pytest.mark.parametrize("sid", ["bool", "nat-k:3", "nat-inf"])
def test_partition_invariance_and_fixed_point(sid):
    S = get_semiring(sid)
    rng = random.Random(sid)
    for _ in range(30):
        n = rng.randint(1, 5)
        M = random_matrix(rng, S, n, density=0.5)
        ref = mat_star(M)
        for k in range(1, n):
            assert mat_star(M, split=k) == ref
        assert ref == Matrix.identity(S, n) + M @ ref
        assert elimination_star(M) == ref


def test_solve_left_linear_trivial_cases():
    N = Matrix(NAT, [[1, 2], [3, 4]])
    assert solve_left_linear(Matrix.zeros(NAT, 2, 2), N) == N
    M = Matrix(BOOL, [[0, 1], [0, 0]])
    assert solve_left_linear(M, Matrix.identity(BOOL, 2)) == mat_star(M)
    with pytest.raises(DimensionMismatch):
        solve_left_linear(Matrix.zeros(NAT, 2, 2), Matrix.zeros(NAT, 3, 1))


def test_solve_left_linear_over_series():
    alg = SeriesAlgebra(NAT, "ab", 5)
    rng = random.Random(4)
    for _ in range(10):
        M = Matrix(alg, [[random_series(rng, alg, proper=True) for _ in range(2)] for _ in range(2)])
        N = Matrix(alg, [[random_series(rng, alg)] for _ in range(2)])
        X = solve_left_linear(M, N)
        assert X == M @ X + N


def test_conjugation_examples():
    M = Matrix(RAT, [[F(0), F(1, 2)], [F(1, 3), F(0)]])
    X = Matrix.diag(RAT, [F(2), F(3)])
    assert conjugate_by_diagonal(M, X).tolist() == [[0, F(3, 4)], [F(2, 9), 0]]
    assert conjugate_by_diagonal(M, Matrix.identity(RAT, 2)) == M
    assert conjugate_by_diagonal(Matrix(RAT, [[F(1, 2)]]), Matrix(RAT, [[F(2)]])) == Matrix(RAT, [[F(1, 2)]])
    with pytest.raises(NotInvertibleDiagonal):
        conjugate_by_diagonal(M, Matrix.diag(RAT, [F(0), F(1)]))
    with pytest.raises(NotInvertibleDiagonal):
        conjugate_by_diagonal(M, Matrix(RAT, [[F(1), F(1)], [F(0), F(1)]]))
    with pytest.raises(NotInvertibleDiagonal):
        conjugate_by_diagonal(Matrix(NAT, [[1, 0], [0, 1]]), Matrix.diag(NAT, [2, 1]))


def test_matrix_product_matches_dense_reference():
    rng = random.Random(1)
    for _ in range(20):
        A = random_matrix(rng, NAT, 3, 4)
        B = random_matrix(rng, NAT, 4, 2)
        assert (A @ B).tolist() == dense_matmul(NAT, A.tolist(), B.tolist())


def test_blocks_and_shapes():
    A = Matrix(NAT, [[1, 2], [3, 4]])
    B = Matrix.blocks([[A, Matrix.zeros(NAT, 2, 1)], [Matrix.zeros(NAT, 1, 2), Matrix(NAT, [[5]])]])
    assert B.shape == (3, 3) and B[2, 2] == 5 and B[1, 0] == 3
    with pytest.raises(DimensionMismatch):
        Matrix(NAT, [[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        A + Matrix.zeros(NAT, 1, 2)


RAT_ENTRIES = [F(0), F(1, 2), F(-1, 2), F(1, 3), F(-1, 3)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.lists(st.lists(st.sampled_from(RAT_ENTRIES), min_size=n, max_size=n),
                                 min_size=n, max_size=n),
                        st.lists(st.sampled_from([F(1), F(2), F(-1), F(1, 3)]), min_size=n, max_size=n))))
def test_diagonal_conjugation_commutes_with_star(data):
    rows, d = data
    M = Matrix(RAT, rows)
    X = Matrix.diag(RAT, d)
    Xinv = Matrix.diag(RAT, [1 / x for x in d])
    try:
        star = mat_star(M)
    except StarUndefined:
        return
    assert mat_star(conjugate_by_diagonal(M, X)) == Xinv @ star @ X
