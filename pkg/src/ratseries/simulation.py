"""Simulations between weighted automata: checking, classification, search.

A matrix ``X`` simulates ``A = (α, M, β)`` by ``B = (γ, N, δ)`` when
``αX = γ``, ``M_σ X = X N_σ`` for every letter and ``β = Xδ``.  Simulations
imply equal behavior.  Searching for them is only a semi-decision: failing
to find one within the pool and budget says nothing about equivalence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .automaton import WeightedAutomaton
from .errors import DimensionMismatch, LimitExceeded
from .matrix import Matrix
from .semiring import INF, Semiring

FLAG_NAMES = ("functional", "dual_functional", "diagonal", "invertible_diagonal")


def classify(X: Matrix) -> dict:
    S = X.algebra
    rows, cols = X.entries, X.transpose().entries

    def unit_vector(v):
        ones = [x for x in v if S.is_one(x)]
        return len(ones) == 1 and all(S.is_zero(x) or S.is_one(x) for x in v)

    diagonal = X.is_diagonal()
    return {
        "functional": all(unit_vector(r) for r in rows),
        "dual_functional": all(unit_vector(c) for c in cols),
        "diagonal": diagonal,
        "invertible_diagonal": diagonal and all(S.is_unit(X[i, i]) for i in range(X.rows)),
    }


@dataclass
class SimulationWitness:
    X: Matrix
    flags: dict = field(default_factory=dict)
    direction: str = "A->B"

    def flag_list(self) -> list:
        return [f for f in FLAG_NAMES if self.flags.get(f)]

    def to_json(self) -> dict:
        enc = self.X.algebra.to_json
        return {"X": [[enc(x) for x in r] for r in self.X.entries], "flags": self.flag_list(),
                "direction": self.direction}

    def in_strong_class(self) -> bool:
        return bool(self.flags.get("functional") or self.flags.get("dual_functional")
                    or self.flags.get("invertible_diagonal"))


@dataclass
class SimulationCheck:
    ok: bool
    flags: dict
    failures: list

    def __bool__(self):
        return self.ok


def check_simulation(A: WeightedAutomaton, B: WeightedAutomaton, X: Matrix) -> SimulationCheck:
    if X.shape != (A.n, B.n):
        raise DimensionMismatch(f"X is {X.shape}, expected {(A.n, B.n)}")
    if A.alphabet != B.alphabet:
        raise DimensionMismatch("automata over different alphabets")
    failures = []
    if A.alpha @ X != B.alpha:
        failures.append("alpha")
    for s in A.alphabet:
        if A.delta[s] @ X != X @ B.delta[s]:
            failures.append(f"M[{s}]")
    if A.beta != X @ B.beta:
        failures.append("beta")
    return SimulationCheck(not failures, classify(X), failures)


def default_pool(S: Semiring) -> tuple:
    if S.finite:
        return tuple(S.elements)
    table = {
        "nat": (0, 1, 2),
        "int": (0, 1, -1, 2, -2),
        "rat": tuple(Fraction(x) for x in (0, 1, -1, 2, -2)) + (Fraction(1, 2), Fraction(-1, 2)),
        "nat-inf": (0, 1, 2, INF),
        "trop": (INF, 0, 1, 2),
    }
    if S.id in table:
        return table[S.id]
    return (S.zero, S.one)


def search_simulation(A: WeightedAutomaton, B: WeightedAutomaton, pool: Sequence | None = None,
                      budget: int = 200_000,
                      accept: Callable[[Matrix], bool] | None = None) -> Optional[SimulationWitness]:
    """First ``X`` over ``pool`` (row-major, pool order) simulating ``A`` by ``B``.

    Rows are filled top to bottom.  A row is rejected as soon as it breaks
    ``β_i = X_i δ``, and each letter equation row ``i`` is checked once the
    rows it depends on are filled.  ``budget`` bounds the number of partial
    assignments tried; exceeding it raises :class:`LimitExceeded`.  Returns
    ``None`` when the pool holds no witness.
    """
    if A.alphabet != B.alphabet:
        raise DimensionMismatch("automata over different alphabets")
    S = A.semiring
    pool = tuple(default_pool(S) if pool is None else pool)
    m, n = A.n, B.n
    add, mul, iz = S.add, S.mul, S.is_zero
    delta = B.beta_list()
    gamma = B.alpha_list()

    def dot(u, v):
        acc = S.zero
        for x, y in zip(u, v):
            if not iz(x) and not iz(y):
                acc = add(acc, mul(x, y))
        return acc

    all_rows = list(itertools.product(pool, repeat=n))
    candidates = [[r for r in all_rows if dot(r, delta) == A.beta[i, 0]] for i in range(m)]
    sparse = A.sparse_rows()
    deps = []
    for i in range(m):
        d = {i}
        for s in A.alphabet:
            d.update(k for k, _ in sparse[s][i])
        deps.append(max(d))
    ready = [[i for i in range(m) if deps[i] == r] for r in range(m)]
    Nrows = {s: B.delta[s].entries for s in A.alphabet}

    def row_equation(i, X):
        for s in A.alphabet:
            lhs = [S.zero] * n
            for k, w in sparse[s][i]:
                for j in range(n):
                    x = X[k][j]
                    if not iz(x):
                        lhs[j] = add(lhs[j], mul(w, x))
            rhs = [dot(X[i], [Nrows[s][k][j] for k in range(n)]) for j in range(n)]
            if lhs != rhs:
                return False
        return True

    nodes = 0
    X: List[tuple] = []

    def rec(r):
        nonlocal nodes
        if r == m:
            if [dot(A.alpha_list(), [X[i][j] for i in range(m)]) for j in range(n)] != gamma:
                return None
            M = Matrix(S, X)
            if accept is not None and not accept(M):
                return None
            return M
        for row in candidates[r]:
            nodes += 1
            if nodes > budget:
                raise LimitExceeded(f"simulation search exceeded {budget} nodes")
            X.append(row)
            if all(row_equation(i, X) for i in ready[r]):
                found = rec(r + 1)
                if found is not None:
                    return found
            X.pop()
        return None

    M = rec(0)
    if M is None:
        return None
    return SimulationWitness(M, classify(M))


# ---------------------------------------------------------------------------
# chains

@dataclass
class SimulationChain:
    """Automata ``C₀ … C_k`` with one verified simulation per consecutive pair.

    ``links[i]`` is ``(X, "forward")`` for ``Cᵢ → Cᵢ₊₁`` or
    ``(X, "backward")`` for ``Cᵢ₊₁ → Cᵢ``.
    """

    automata: list
    links: list

    def __len__(self):
        return len(self.links)

    def verify(self) -> bool:
        for i, (X, orientation) in enumerate(self.links):
            a, b = self.automata[i], self.automata[i + 1]
            if orientation == "backward":
                a, b = b, a
            if not check_simulation(a, b, X).ok:
                return False
        return True

    def is_strong(self) -> bool:
        return all(SimulationWitness(X, classify(X)).in_strong_class() for X, _ in self.links)

    def to_json(self) -> list:
        out = []
        for i, (X, orientation) in enumerate(self.links):
            enc = X.algebra.to_json
            out.append({
                "automaton": self.automata[i].to_json(),
                "witness": {"X": [[enc(x) for x in r] for r in X.entries],
                            "flags": [f for f in FLAG_NAMES if classify(X)[f]]},
                "direction": orientation,
            })
        out.append({"automaton": self.automata[-1].to_json()})
        return out


def vector_automaton(A: WeightedAutomaton, cap: int = 256):
    """The automaton on distinct reachable row vectors ``α M_w`` and its simulation into ``A``.

    Returns ``(D, X)`` with ``D → A`` by ``X`` (the rows of ``X`` are the
    vectors), or ``None`` if more than ``cap`` vectors are reachable.
    """
    S = A.semiring
    start = tuple(A.alpha_list())
    index = {start: 0}
    order = [start]
    trans = []
    k = 0
    while k < len(order):
        vec = order[k]
        sparse = {i: x for i, x in enumerate(vec) if not S.is_zero(x)}
        for s in A.alphabet:
            nxt_sparse = A.step(sparse, s)
            nxt = tuple(nxt_sparse.get(i, S.zero) for i in range(A.n))
            if nxt not in index:
                if len(order) >= cap:
                    return None
                index[nxt] = len(order)
                order.append(nxt)
            trans.append((s, k, index[nxt]))
        k += 1
    d = len(order)
    delta = {s: [[S.zero] * d for _ in range(d)] for s in A.alphabet}
    for s, a, b in trans:
        delta[s][a][b] = S.one
    beta = [A.final_weight({i: x for i, x in enumerate(v) if not S.is_zero(x)}) for v in order]
    D = WeightedAutomaton(S, A.alphabet, [S.one] + [S.zero] * (d - 1), delta, beta)
    return D, Matrix(S, order)


def _successor(D: WeightedAutomaton, state: int, s: str) -> int:
    return D.sparse_rows()[s][state][0][0]


def canonical_quotient(D: WeightedAutomaton):
    """Minimal deterministic quotient of a deterministic ``D`` and the functional map onto it.

    States are numbered in breadth-first order from the initial state, so
    two equivalent deterministic automata have identical quotients.
    """
    S = D.semiring
    letters = D.alphabet
    block = {q: D.beta[q, 0] for q in range(D.n)}
    while True:
        sig = {q: (block[q],) + tuple(block[_successor(D, q, s)] for s in letters) for q in range(D.n)}
        names = {}
        new = {q: names.setdefault(sig[q], len(names)) for q in range(D.n)}
        if len(names) == len(set(block.values())):
            block = new
            break
        block = new
    # renumber blocks in BFS order from the initial state
    order = {block[0]: 0}
    queue = [0]
    k = 0
    while k < len(queue):
        q = queue[k]
        k += 1
        for s in letters:
            t = _successor(D, q, s)
            if block[t] not in order:
                order[block[t]] = len(order)
                queue.append(t)
    rep = {}
    for q in queue:
        rep.setdefault(order[block[q]], q)
    c = len(order)
    delta = {s: [[S.zero] * c for _ in range(c)] for s in letters}
    beta = [S.zero] * c
    for b, q in rep.items():
        beta[b] = D.beta[q, 0]
        for s in letters:
            delta[s][b][order[block[_successor(D, q, s)]]] = S.one
    C = WeightedAutomaton(S, letters, [S.one] + [S.zero] * (c - 1), delta, beta)
    F = Matrix(S, [[S.one if order.get(block[q]) == j else S.zero for j in range(c)] for q in range(D.n)])
    return C, F


def search_chain(A: WeightedAutomaton, B: WeightedAutomaton, depth: int = 4, pool=None,
                 budget: int = 200_000, strong: bool = False) -> Optional[SimulationChain]:
    """A verified chain of at most ``depth`` simulations joining ``A`` and ``B``.

    Tried in order: the empty chain (``A == B``), a single simulation in
    either direction, two-link chains through the reachable-vector automaton
    of one side, and, when both vector automata are finite, the four-link
    chain through their common minimal deterministic quotient.  With
    ``strong`` only functional, dual functional and invertible diagonal
    links are allowed.  ``None`` means no chain was found within the bounds.
    """
    if A == B:
        return SimulationChain([A], [])
    if depth < 1:
        return None
    accept = (lambda X: SimulationWitness(X, classify(X)).in_strong_class()) if strong else None

    def link(a, b):
        w = search_simulation(a, b, pool, budget, accept)
        return None if w is None else w.X

    X = link(A, B)
    if X is not None:
        return SimulationChain([A, B], [(X, "forward")])
    X = link(B, A)
    if X is not None:
        return SimulationChain([A, B], [(X, "backward")])
    if depth < 2:
        return None

    va, vb = vector_automaton(A), vector_automaton(B)
    ok = (lambda Y: SimulationWitness(Y, classify(Y)).in_strong_class()) if strong else (lambda Y: True)
    for side in (va, vb):
        if side is None:
            continue
        D, Y = side
        if not ok(Y):
            continue
        if side is va:
            Z = link(D, B)
            if Z is not None:
                chain = SimulationChain([A, D, B], [(Y, "backward"), (Z, "forward")])
                if chain.verify():
                    return chain
        else:
            Z = link(D, A)
            if Z is not None:
                chain = SimulationChain([A, D, B], [(Z, "backward"), (Y, "forward")])
                if chain.verify():
                    return chain
    if depth < 4 or va is None or vb is None:
        return None
    (DA, XA), (DB, XB) = va, vb
    CA, FA = canonical_quotient(DA)
    CB, FB = canonical_quotient(DB)
    if CA != CB:
        return None
    chain = SimulationChain([A, DA, CA, DB, B],
                            [(XA, "backward"), (FA, "forward"), (FB, "backward"), (XB, "forward")])
    if strong and not chain.is_strong():
        return None
    return chain if chain.verify() else None


# ---------------------------------------------------------------------------
# constructions with known simulations

def expand_states(B: WeightedAutomaton, owner: Sequence[int], split: Callable) -> WeightedAutomaton:
    """An automaton ``A`` with ``A → B`` by the functional matrix of ``owner``.

    State ``i`` of ``A`` is a copy of state ``owner[i]`` of ``B``.  Every
    initial weight and every transition weight into a state of ``B`` is
    divided among that state's copies with ``split(value, parts)``, which
    must return ``parts`` scalars summing to ``value``.
    """
    S = B.semiring
    m = len(owner)
    copies = [[i for i in range(m) if owner[i] == j] for j in range(B.n)]
    if any(not c for c in copies):
        raise ValueError("every state of B needs at least one copy")

    def spread(value_vector):
        out = [S.zero] * m
        for j, v in enumerate(value_vector):
            parts = split(v, len(copies[j]))
            for i, p in zip(copies[j], parts):
                out[i] = p
        return out

    alpha = spread(B.alpha_list())
    delta = {s: [spread(B.delta[s].entries[owner[i]]) for i in range(m)] for s in B.alphabet}
    beta = [B.beta[owner[i], 0] for i in range(m)]
    return WeightedAutomaton(S, B.alphabet, alpha, delta, beta)


def functional_matrix(S: Semiring, owner: Sequence[int], n: int) -> Matrix:
    return Matrix(S, [[S.one if owner[i] == j else S.zero for j in range(n)] for i in range(len(owner))])


def transpose_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    return WeightedAutomaton(A.semiring, A.alphabet, A.beta_list(),
                             {s: m.transpose() for s, m in A.delta.items()}, A.alpha_list())


def conjugate_automaton(A: WeightedAutomaton, D: Matrix) -> WeightedAutomaton:
    """``(αD, D⁻¹M_σD, D⁻¹β)``, simulated from ``A`` by the invertible diagonal ``D``."""
    from .matrix import conjugate_by_diagonal

    S = A.semiring
    inv = Matrix.diag(S, [S.inverse(D[i, i]) for i in range(D.rows)])
    return WeightedAutomaton(S, A.alphabet, A.alpha @ D,
                             {s: conjugate_by_diagonal(m, D) for s, m in A.delta.items()}, inv @ A.beta)
