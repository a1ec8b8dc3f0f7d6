"""Dense matrices over an algebra and the blocked matrix star.

A matrix carries an *algebra*: any object with ``add``, ``mul``, ``zero``,
``one``, ``star`` and ``is_zero``.  Semiring descriptors, the truncated
series algebra and the symbolic term algebra all qualify, so the same star
routine runs on scalars, on series and on syntax.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, NotAUnit, NotInvertibleDiagonal, NotSquare


class Matrix:
    __slots__ = ("algebra", "rows", "cols", "entries", "_hash")

    def __init__(self, algebra, entries: Iterable[Sequence]):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise DimensionMismatch("a matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        self.algebra = algebra
        self.rows = len(rows)
        self.cols = width
        self.entries = rows
        self._hash = None

    # -- constructors --------------------------------------------------------
    @classmethod
    def zeros(cls, algebra, rows: int, cols: int) -> "Matrix":
        z = algebra.zero
        return cls(algebra, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, algebra, n: int) -> "Matrix":
        z, o = algebra.zero, algebra.one
        return cls(algebra, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, algebra, values: Sequence) -> "Matrix":
        n = len(values)
        z = algebra.zero
        return cls(algebra, [[values[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def row_vector(cls, algebra, values: Sequence) -> "Matrix":
        return cls(algebra, [list(values)])

    @classmethod
    def column_vector(cls, algebra, values: Sequence) -> "Matrix":
        return cls(algebra, [[v] for v in values])

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a matrix from a grid of blocks."""
        algebra = grid[0][0].algebra
        out = []
        for block_row in grid:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise DimensionMismatch("block heights differ within a row")
            for i in range(height):
                line = []
                for b in block_row:
                    line.extend(b.entries[i])
                out.append(line)
        return cls(algebra, out)

    # -- access ----------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def sub(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.algebra, [r[c0:c1] for r in self.entries[r0:r1]])

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix(self.algebra, zip(*self.entries))

    def map(self, fn, algebra=None) -> "Matrix":
        return Matrix(algebra or self.algebra, [[fn(x) for x in r] for r in self.entries])

    def is_zero(self) -> bool:
        iz = self.algebra.is_zero
        return all(iz(x) for r in self.entries for x in r)

    def is_diagonal(self) -> bool:
        iz = self.algebra.is_zero
        return self.is_square and all(
            iz(x) for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j
        )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        add = self.algebra.add
        return Matrix(
            self.algebra,
            [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        alg = self.algebra
        add, mul, iz, zero = alg.add, alg.mul, alg.is_zero, alg.zero
        cols = other.transpose().entries
        out = []
        for r in self.entries:
            nz = [(k, a) for k, a in enumerate(r) if not iz(a)]
            line = []
            for c in cols:
                acc = zero
                for k, a in nz:
                    b = c[k]
                    if not iz(b):
                        acc = add(acc, mul(a, b))
                line.append(acc)
            out.append(line)
        return Matrix(alg, out)

    def scale(self, k) -> "Matrix":
        """Left action ``k·M`` entrywise."""
        act = self.algebra.act
        return self.map(lambda x: act(k, x))


def _split(M: Matrix, k: int):
    n = M.rows
    return (M.sub(0, k, 0, k), M.sub(0, k, k, n), M.sub(k, n, 0, k), M.sub(k, n, k, n))


def mat_star(M: Matrix, split: Optional[int] = None) -> Matrix:
    """Star of a square matrix by the blocked formula.

    With ``M = [[X, Y], [U, V]]`` where ``X`` is ``k×k``::

        M* = [[α, β], [γ, δ]]
        α = (X + Y V* U)*     β = α Y V*
        δ = (V + U X* Y)*     γ = δ U X*

    ``split`` selects ``k`` at the top level only (default ``n - 1``, the
    last row and column); nested stars always split off the last index.
    Scalar stars outside the star domain raise ``StarUndefined`` as they are
    met.  Sub-stars are memoised on matrix content within one call.
    """
    if not M.is_square:
        raise NotSquare(f"star of a {M.rows}x{M.cols} matrix")
    n = M.rows
    if split is not None and not 1 <= split < n:
        raise ValueError(f"split point {split} out of range for n={n}")
    return _formula_star(M, split, {})


def _formula_star(M: Matrix, split, memo) -> Matrix:
    key = (M, split)
    hit = memo.get(key)
    if hit is not None:
        return hit
    n = M.rows
    alg = M.algebra
    if n == 1:
        result = Matrix(alg, [[alg.star(M.entries[0][0])]])
    else:
        k = n - 1 if split is None else split
        X, Y, U, V = _split(M, k)
        Vs = _formula_star(V, None, memo)
        Xs = _formula_star(X, None, memo)
        a = _formula_star(X + Y @ Vs @ U, None, memo)
        d = _formula_star(V + U @ Xs @ Y, None, memo)
        b = a @ Y @ Vs
        c = d @ U @ Xs
        result = Matrix.blocks([[a, b], [c, d]])
    memo[key] = result
    return result


def elimination_star(M: Matrix) -> Matrix:
    """Star by one-state-at-a-time elimination.

    Same blocks as :func:`mat_star` for ``k = n - 1`` with ``γ`` and ``δ``
    rewritten through the sum-star and product-star identities to
    ``γ = V* U α`` and ``δ = V* + V* U α Y V*``.  This needs a single
    recursive star per level, so it is polynomial, and agrees with
    :func:`mat_star` in every Conway semiring.
    """
    if not M.is_square:
        raise NotSquare(f"star of a {M.rows}x{M.cols} matrix")
    alg = M.algebra
    n = M.rows
    if n == 1:
        return Matrix(alg, [[alg.star(M.entries[0][0])]])
    X, Y, U, V = _split(M, n - 1)
    Vs = Matrix(alg, [[alg.star(V.entries[0][0])]])
    a = elimination_star(X + Y @ Vs @ U)
    b = a @ Y @ Vs
    c = Vs @ U @ a
    d = Vs + c @ Y @ Vs
    return Matrix.blocks([[a, b], [c, d]])


def mat_plus(M: Matrix) -> Matrix:
    """``M⁺ = M·M*``."""
    return M @ mat_star(M)


def solve_left_linear(M: Matrix, N: Matrix) -> Matrix:
    """The solution ``M*N`` of ``X = MX + N``."""
    if not M.is_square:
        raise NotSquare(f"coefficient matrix is {M.rows}x{M.cols}")
    if M.rows != N.rows:
        raise DimensionMismatch(f"{M.shape} system with right-hand side {N.shape}")
    return mat_star(M) @ N


def conjugate_by_diagonal(M: Matrix, X: Matrix) -> Matrix:
    """``X⁻¹ M X`` for an invertible diagonal ``X`` over a semiring."""
    if not X.is_diagonal() or X.rows != M.rows or not M.is_square:
        raise NotInvertibleDiagonal("conjugating matrix must be square, diagonal and match M")
    alg = M.algebra
    try:
        inv = [alg.inverse(X.entries[i][i]) for i in range(X.rows)]
    except NotAUnit as exc:
        raise NotInvertibleDiagonal(str(exc)) from exc
    d = [X.entries[i][i] for i in range(X.rows)]
    return Matrix(
        alg,
        [[alg.mul(alg.mul(inv[i], M.entries[i][j]), d[j]) for j in range(M.cols)]
         for i in range(M.rows)],
    )
