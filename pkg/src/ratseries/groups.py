"""Finite groups, their symbolic group matrices and the group identities.

For a group ``G = {g₁, …, gₙ}`` the group matrix has entry ``x_{gᵢ⁻¹gⱼ}``
at ``(i, j)``.  Its star is computed symbolically with the blocked matrix
star formula; the sum of the first row of the result is the left-hand side
of the identity ``r₁ + … + rₙ = (x₁ + … + xₙ)*``.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .errors import ParseError, StarUndefined
from .matrix import Matrix, mat_star
from .semiring import Semiring
from .series import SeriesAlgebra, TruncatedSeries, all_words
from .terms import Star, Term, TermAlgebra, evaluate, sum_balanced, sum_left, to_text, var


class FiniteGroup:
    """A group on ``0 … n-1`` given by its multiplication table (0-based internally)."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G"):
        n = len(table)
        self.n = n
        self.table = tuple(tuple(r) for r in table)
        self.name = name
        if n == 0 or any(len(r) != n for r in self.table):
            raise ValueError("a Cayley table must be a nonempty square")
        elems = set(range(n))
        for r in self.table:
            if set(r) != elems:
                raise ValueError("Cayley table rows must be permutations")
        for j in range(n):
            if {self.table[i][j] for i in range(n)} != elems:
                raise ValueError("Cayley table columns must be permutations")
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ids:
            raise ValueError("the table has no identity element")
        self.identity = ids[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError("the table is not associative")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.n})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return next(b for b in range(self.n) if self.table[a][b] == self.identity)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], name: str = "G") -> "FiniteGroup":
        """Table with 1-based element indices, as in the JSON group format."""
        return cls([[x - 1 for x in r] for r in table], name)

    def table_1based(self) -> list:
        return [[x + 1 for x in r] for r in self.table]


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], f"C{n}")


def klein_four() -> FiniteGroup:
    return FiniteGroup([[i ^ j for j in range(4)] for i in range(4)], "V4")


def parse_group(text: str) -> FiniteGroup:
    """``C<n>``, ``V4`` or a JSON document ``{"n": ..., "table": [[...]]}``."""
    text = text.strip()
    if text.upper() == "V4":
        return klein_four()
    if text[:1] in "Cc" and text[1:].isdigit():
        return cyclic(int(text[1:]))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"unknown group {text!r}") from exc
    table = doc["table"]
    if doc.get("n", len(table)) != len(table):
        raise ParseError("group size and table disagree")
    return FiniteGroup.from_table(table, doc.get("name", "G"))


def group_matrix(G: FiniteGroup) -> Matrix:
    """Entry ``(i, j)`` is the variable of the element ``gᵢ⁻¹ gⱼ`` (variables are 1-based)."""
    alg = TermAlgebra()
    return Matrix(alg, [[var(G.mul(G.inverse(i), j) + 1) for j in range(G.n)] for i in range(G.n)])


@dataclass
class GroupIdentity:
    lhs: Term
    rhs: Term
    variables: list
    first_row: list = field(default_factory=list)

    def to_text(self) -> str:
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


def build_identity(G: FiniteGroup) -> GroupIdentity:
    M = group_matrix(G)
    star = mat_star(M)
    first_row = list(star.entries[0])
    xs = [var(i + 1) for i in range(G.n)]
    return GroupIdentity(sum_left(first_row), Star(sum_left(xs)), [x.name for x in xs], first_row)


@dataclass
class IdentityReport:
    holds: bool
    mode: str
    checked: int
    skipped: int = 0
    counterexample: Optional[dict] = None
    lhs_value: object = None
    rhs_value: object = None

    def to_text(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        line = f"{status} mode={self.mode} checked={self.checked} skipped={self.skipped}"
        if self.counterexample is not None:
            shown = ", ".join(f"{k}={_show(v)}" for k, v in self.counterexample.items())
            line += f" counterexample: {shown}"
        return line


def _show(v):
    if isinstance(v, TruncatedSeries):
        return "{" + v.to_text().replace("\n", "; ") + "}"
    return str(v)


def check_identity(identity: GroupIdentity, S: Semiring, mode: str = "exhaustive", samples: int = 100,
                   max_len: int = 6, seed: int = 0, alphabet: Sequence[str] = ("a", "b")) -> IdentityReport:
    """Evaluate both sides under every assignment (finite ``S``) or under sampled proper series."""
    names = identity.variables
    if mode == "exhaustive":
        if not S.finite:
            raise ValueError(f"exhaustive mode needs a finite carrier, {S.id} is infinite")
        checked = skipped = 0
        for values in itertools.product(S.elements, repeat=len(names)):
            env = dict(zip(names, values))
            try:
                left = evaluate(identity.lhs, S, env)
                right = evaluate(identity.rhs, S, env)
            except StarUndefined:
                skipped += 1
                continue
            checked += 1
            if left != right:
                return IdentityReport(False, mode, checked, skipped, env, left, right)
        return IdentityReport(True, mode, checked, skipped)
    if mode == "series":
        from .random_gen import random_series

        alg = SeriesAlgebra(S, tuple(alphabet), max_len)
        rng = random.Random(seed)
        for k in range(samples):
            env = {x: random_series(rng, alg, proper=True) for x in names}
            left = evaluate(identity.lhs, alg, env)
            right = evaluate(identity.rhs, alg, env)
            if left != right:
                return IdentityReport(False, mode, k + 1, 0, env, left, right)
        return IdentityReport(True, mode, samples)
    raise ValueError(f"unknown mode {mode!r}")


def row_multisets_agree(G: FiniteGroup, S: Semiring, values: Sequence) -> bool:
    """Each row and column of the evaluated ``M_G*`` rearranges its first row."""
    M = group_matrix(G)
    env = {f"x{i + 1}": v for i, v in enumerate(values)}
    evaluated = M.map(lambda t: evaluate(t, S, env), algebra=S)
    star = mat_star(evaluated)
    first = sorted(map(repr, star.entries[0]))
    lines = list(star.entries) + list(star.transpose().entries)
    return all(sorted(map(repr, r)) == first for r in lines)
