"""Weighted automata: behavior, Kleene constructions and state elimination."""
from __future__ import annotations

import json
from typing import Callable, Dict, Mapping, Optional, Sequence

from .errors import DimensionMismatch, ImproperStar, IncompatibleSemiring, NotPositive, StarUndefined, StateBlowup
from .matrix import Matrix, elimination_star
from .semiring import BOOL, Semiring, get_semiring, same_semiring
from .series import TruncatedSeries
from .terms import (ONE, Const, One, Plus, Prod, Star, Sum, Sym, Term, TermAlgebra, Zero,
                    default_alphabet, letter_for, postorder, sum_balanced)


class WeightedAutomaton:
    """``(α, {M_σ}, β)`` over a semiring; ``α`` is ``1×n``, ``β`` is ``n×1``."""

    __slots__ = ("semiring", "alphabet", "alpha", "delta", "beta", "_sparse")

    def __init__(self, semiring: Semiring, alphabet: Sequence[str], alpha, delta: Mapping[str, object], beta):
        self.semiring = semiring
        self.alphabet = tuple(alphabet)
        self.alpha = alpha if isinstance(alpha, Matrix) else Matrix.row_vector(semiring, alpha)
        self.beta = beta if isinstance(beta, Matrix) else Matrix.column_vector(semiring, beta)
        n = self.alpha.cols
        if self.alpha.rows != 1 or self.beta.cols != 1 or self.beta.rows != n:
            raise DimensionMismatch("alpha must be 1×n and beta n×1")
        out = {}
        for sigma in self.alphabet:
            m = delta.get(sigma)
            if m is None:
                m = Matrix.zeros(semiring, n, n)
            elif not isinstance(m, Matrix):
                m = Matrix(semiring, m)
            if m.shape != (n, n):
                raise DimensionMismatch(f"transition matrix of {sigma!r} is {m.shape}, expected {(n, n)}")
            out[sigma] = m
        extra = set(delta) - set(self.alphabet)
        if extra:
            raise DimensionMismatch(f"transition letters {sorted(extra)} are not in the alphabet")
        self.delta = out
        self._sparse = None

    @property
    def n(self) -> int:
        return self.alpha.cols

    def __repr__(self):
        return f"WeightedAutomaton({self.semiring.id}, n={self.n}, alphabet={''.join(self.alphabet)!r})"

    def __eq__(self, other):
        if not isinstance(other, WeightedAutomaton):
            return NotImplemented
        return (same_semiring(self.semiring, other.semiring) and self.alphabet == other.alphabet
                and self.alpha == other.alpha and self.beta == other.beta and self.delta == other.delta)

    def __hash__(self):
        return hash((self.semiring.id, self.alphabet, self.alpha, self.beta))

    def alpha_list(self) -> list:
        return list(self.alpha.entries[0])

    def beta_list(self) -> list:
        return [r[0] for r in self.beta.entries]

    def sparse_rows(self):
        """Per letter, the nonzero ``(j, weight)`` pairs of every row."""
        if self._sparse is None:
            iz = self.semiring.is_zero
            self._sparse = {
                s: [[(j, x) for j, x in enumerate(r) if not iz(x)] for r in m.entries]
                for s, m in self.delta.items()
            }
        return self._sparse

    def step(self, vec: Dict[int, object], sigma: str) -> Dict[int, object]:
        """Row vector (as a sparse dict) times ``M_σ``."""
        S = self.semiring
        add, mul, iz = S.add, S.mul, S.is_zero
        rows = self.sparse_rows()[sigma]
        out: Dict[int, object] = {}
        for i, a in vec.items():
            for j, x in rows[i]:
                p = mul(a, x)
                out[j] = add(out[j], p) if j in out else p
        return {j: v for j, v in out.items() if not iz(v)}

    def initial_vector(self) -> Dict[int, object]:
        iz = self.semiring.is_zero
        return {i: a for i, a in enumerate(self.alpha.entries[0]) if not iz(a)}

    def final_weight(self, vec: Dict[int, object]):
        S = self.semiring
        acc = S.zero
        for i, a in vec.items():
            b = self.beta.entries[i][0]
            if not S.is_zero(b):
                acc = S.add(acc, S.mul(a, b))
        return acc

    def weight(self, word: str):
        vec = self.initial_vector()
        for sigma in word:
            vec = self.step(vec, sigma)
        return self.final_weight(vec)

    # -- serialisation ----------------------------------------------------------------
    def to_json(self) -> dict:
        enc = self.semiring.to_json
        return {
            "semiring": self.semiring.id,
            "alphabet": list(self.alphabet),
            "n": self.n,
            "alpha": [enc(x) for x in self.alpha_list()],
            "beta": [enc(x) for x in self.beta_list()],
            "delta": {s: [[enc(x) for x in r] for r in m.entries] for s, m in self.delta.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc, semiring: Optional[Semiring] = None) -> "WeightedAutomaton":
        if isinstance(doc, str):
            doc = json.loads(doc)
        S = semiring or get_semiring(doc["semiring"])
        n = doc["n"]
        dec = S.parse

        def vec(xs, what):
            if len(xs) != n:
                raise DimensionMismatch(f"{what} has {len(xs)} entries, expected {n}")
            return [dec(str(x)) for x in xs]

        delta = {s: [[dec(str(x)) for x in r] for r in m] for s, m in doc.get("delta", {}).items()}
        return cls(S, doc["alphabet"], vec(doc["alpha"], "alpha"), delta, vec(doc["beta"], "beta"))


# ---------------------------------------------------------------------------
# behavior

def behavior(A: WeightedAutomaton, max_len: int) -> TruncatedSeries:
    """Coefficients ``α M_{w₁}···M_{wₘ} β`` for all ``|w| <= max_len``."""
    coeffs = {}
    layer = {"": A.initial_vector()}
    for length in range(max_len + 1):
        for w, vec in layer.items():
            c = A.final_weight(vec)
            if not A.semiring.is_zero(c):
                coeffs[w] = c
        if length == max_len:
            break
        nxt = {}
        for w, vec in layer.items():
            if not vec:
                continue
            for sigma in A.alphabet:
                v = A.step(vec, sigma)
                if v:
                    nxt[w + sigma] = v
        layer = nxt
    return TruncatedSeries(A.semiring, A.alphabet, max_len, coeffs)


# ---------------------------------------------------------------------------
# elementary automata and Kleene constructions

def _mat(S, n, cells=()):
    rows = [[S.zero] * n for _ in range(n)]
    for i, j, x in cells:
        rows[i][j] = x
    return Matrix(S, rows)


def constant_automaton(S: Semiring, alphabet, k) -> WeightedAutomaton:
    return WeightedAutomaton(S, alphabet, [k], {}, [S.one])


def zero_automaton(S: Semiring, alphabet) -> WeightedAutomaton:
    return WeightedAutomaton(S, alphabet, [S.zero], {}, [S.zero])


def letter_automaton(S: Semiring, alphabet, sigma: str) -> WeightedAutomaton:
    if sigma not in alphabet:
        raise IncompatibleSemiring(f"letter {sigma!r} is not in the alphabet")
    return WeightedAutomaton(S, alphabet, [S.one, S.zero], {sigma: _mat(S, 2, [(0, 1, S.one)])},
                             [S.zero, S.one])


def _check_pair(A: WeightedAutomaton, B: WeightedAutomaton):
    if not same_semiring(A.semiring, B.semiring):
        raise IncompatibleSemiring(f"{A.semiring.id} vs {B.semiring.id}")
    if A.alphabet != B.alphabet:
        raise IncompatibleSemiring(f"alphabets {A.alphabet} vs {B.alphabet}")


def sum_automaton(A: WeightedAutomaton, B: WeightedAutomaton) -> WeightedAutomaton:
    """Direct sum; behavior ``|A| + |B|``."""
    _check_pair(A, B)
    S = A.semiring
    za = Matrix.zeros(S, A.n, B.n)
    zb = Matrix.zeros(S, B.n, A.n)
    delta = {s: Matrix.blocks([[A.delta[s], za], [zb, B.delta[s]]]) for s in A.alphabet}
    return WeightedAutomaton(S, A.alphabet, A.alpha_list() + B.alpha_list(), delta,
                             A.beta_list() + B.beta_list())


def product_automaton(A: WeightedAutomaton, B: WeightedAutomaton) -> WeightedAutomaton:
    """Cascade; behavior ``|A|·|B|``."""
    _check_pair(A, B)
    S = A.semiring
    k = (A.alpha @ A.beta)[0, 0]
    alpha = A.alpha_list() + [S.mul(k, x) for x in B.alpha_list()]
    link = A.beta @ B.alpha
    delta = {}
    for s in A.alphabet:
        delta[s] = Matrix.blocks([[A.delta[s], A.delta[s] @ link],
                                  [Matrix.zeros(S, B.n, A.n), B.delta[s]]])
    beta = [S.zero] * A.n + B.beta_list()
    return WeightedAutomaton(S, A.alphabet, alpha, delta, beta)


def scale_initial(A: WeightedAutomaton, k) -> WeightedAutomaton:
    S = A.semiring
    return WeightedAutomaton(S, A.alphabet, [S.mul(k, x) for x in A.alpha_list()], A.delta, A.beta_list())


def scale_final(A: WeightedAutomaton, k) -> WeightedAutomaton:
    S = A.semiring
    return WeightedAutomaton(S, A.alphabet, A.alpha_list(), A.delta, [S.mul(x, k) for x in A.beta_list()])


def proper_part_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    """An automaton for ``|A| - (|A|, ε)ε``: a fresh initial state replays ``α M_σ``."""
    S = A.semiring
    if S.is_zero((A.alpha @ A.beta)[0, 0]):
        return A
    n = A.n
    delta = {}
    for s in A.alphabet:
        first = (A.alpha @ A.delta[s]).entries[0]
        rows = [[S.zero] + list(first)] + [[S.zero] + list(r) for r in A.delta[s].entries]
        delta[s] = Matrix(S, rows)
    return WeightedAutomaton(S, A.alphabet, [S.one] + [S.zero] * n, delta, [S.zero] + A.beta_list())


def plus_proper_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    """``|A|⁺`` for proper ``|A|``: every accepting step may loop back to the start."""
    loop = A.beta @ A.alpha
    delta = {s: m + m @ loop for s, m in A.delta.items()}
    return WeightedAutomaton(A.semiring, A.alphabet, A.alpha, delta, A.beta)


def star_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    """``|A|*`` written as ``k* + (k* r)⁺ k*`` where ``|A| = k + r``."""
    S = A.semiring
    k = (A.alpha @ A.beta)[0, 0]
    try:
        k_star = S.star(k)
    except StarUndefined as exc:
        raise ImproperStar(f"star of a series with constant term {S.format(k)} in {S.id}") from exc
    r = proper_part_automaton(A)
    loop = plus_proper_automaton(scale_initial(r, k_star))
    return sum_automaton(constant_automaton(S, A.alphabet, k_star), scale_final(loop, k_star))


def plus_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    S = A.semiring
    if S.is_zero((A.alpha @ A.beta)[0, 0]):
        return plus_proper_automaton(A)
    return product_automaton(A, star_automaton(A))


def compile_term(e: Term, S: Semiring, alphabet: Sequence[str] | None = None) -> WeightedAutomaton:
    """An automaton whose behavior is ``|e|`` (symbols read canonically)."""
    alphabet = tuple(alphabet) if alphabet is not None else default_alphabet(e)
    built: Dict[int, WeightedAutomaton] = {}
    for node in postorder(e):
        if isinstance(node, Sum):
            A = sum_automaton(built[id(node.left)], built[id(node.right)])
        elif isinstance(node, Prod):
            A = product_automaton(built[id(node.left)], built[id(node.right)])
        elif isinstance(node, Star):
            A = star_automaton(built[id(node.arg)])
        elif isinstance(node, Plus):
            A = plus_automaton(built[id(node.arg)])
        elif isinstance(node, Sym):
            A = letter_automaton(S, alphabet, letter_for(node.name, alphabet))
        elif isinstance(node, Const):
            if not S.contains(node.value):
                raise IncompatibleSemiring(f"constant {node.value!r} is not in {S.id}")
            A = constant_automaton(S, alphabet, node.value)
        elif isinstance(node, One):
            A = constant_automaton(S, alphabet, S.one)
        else:
            A = zero_automaton(S, alphabet)
        built[id(node)] = A
    return built[id(e)]


# ---------------------------------------------------------------------------
# automaton → expression

def transition_terms(A: WeightedAutomaton, symbol_for: Callable[[str], str] | None = None) -> Matrix:
    """``M = Σ_σ M_σ σ`` as a matrix of terms."""
    S = A.semiring
    alg = TermAlgebra(S)
    symbol_for = symbol_for or (lambda s: s)
    syms = {s: Sym(symbol_for(s)) for s in A.alphabet}
    rows = []
    for i in range(A.n):
        line = []
        for j in range(A.n):
            line.append(sum_balanced([alg.act(A.delta[s][i, j], syms[s]) for s in A.alphabet]))
        rows.append(line)
    return Matrix(alg, rows)


def plus_of_proper(M: Matrix) -> Matrix:
    """``M⁺`` of a proper matrix of terms without star (entries stay simple).

    Splitting off the last state, with ``Q = X + YU + YV⁺U``::

        M⁺ = [[Q⁺,              (Y + Q⁺Y)(1 + V⁺)              ],
              [(1 + V⁺)(U + UQ⁺), V⁺ + (1 + V⁺) U(1 + Q⁺)Y (1 + V⁺)]]

    which is the blocked star formula rewritten with ``a* = 1 + a⁺``.
    """
    alg = M.algebra
    n = M.rows
    if n == 1:
        return Matrix(alg, [[alg.plus(M.entries[0][0])]])
    X, Y = M.sub(0, n - 1, 0, n - 1), M.sub(0, n - 1, n - 1, n)
    U, V = M.sub(n - 1, n, 0, n - 1), M.entries[n - 1][n - 1]
    Vp = alg.plus(V)
    add, mul = alg.add, alg.mul
    m = n - 1
    Q = Matrix(alg, [[add(add(X[i, j], mul(Y[i, 0], U[0, j])), mul(mul(Y[i, 0], Vp), U[0, j]))
                      for j in range(m)] for i in range(m)])
    P = plus_of_proper(Q)
    y1 = Y + P @ Y
    u1 = U + U @ P
    B = [add(y1[i, 0], mul(y1[i, 0], Vp)) for i in range(m)]
    C = [add(u1[0, j], mul(Vp, u1[0, j])) for j in range(m)]
    r = (u1 @ Y)[0, 0]
    D = sum_balanced([Vp, r, mul(Vp, r), mul(r, Vp), mul(mul(Vp, r), Vp)])
    rows = [list(P.entries[i]) + [B[i]] for i in range(m)]
    rows.append(C + [D])
    return Matrix(alg, rows)


def state_eliminate(A: WeightedAutomaton, symbol_for: Callable[[str], str] | None = None) -> Term:
    """A term ``[αβ] + Σ [α_i β_j].P_ij`` with ``P = M⁺`` simple.

    Scalars are moved in front of each ``P_ij``, which is valid for the
    commutative built-in semirings.
    """
    S = A.semiring
    alg = TermAlgebra(S)
    P = plus_of_proper(transition_terms(A, symbol_for))
    alpha, beta = A.alpha_list(), A.beta_list()
    parts = []
    for i, a in enumerate(alpha):
        if S.is_zero(a):
            continue
        for j, b in enumerate(beta):
            if S.is_zero(b) or isinstance(P[i, j], Zero):
                continue
            parts.append(alg.act(S.mul(a, b), P[i, j]))
    k = (A.alpha @ A.beta)[0, 0]
    simple = sum_balanced(parts)
    if S.is_zero(k):
        return simple
    const = ONE if S.is_one(k) else Const(k)
    return const if isinstance(simple, Zero) else Sum(const, simple)


def simple_part(A: WeightedAutomaton, symbol_for=None) -> Term:
    """The term ``Σ [α_i β_j].P_ij`` alone (``0`` if empty)."""
    S = A.semiring
    alg = TermAlgebra(S)
    P = plus_of_proper(transition_terms(A, symbol_for))
    parts = [alg.act(S.mul(a, b), P[i, j])
             for i, a in enumerate(A.alpha_list()) if not S.is_zero(a)
             for j, b in enumerate(A.beta_list()) if not S.is_zero(b) and not isinstance(P[i, j], Zero)]
    return sum_balanced(parts)


def push_forward(A: WeightedAutomaton, h: Callable[[str], object] | Mapping[str, object], target):
    """``α (M h)* β`` computed in ``target`` (a semiring or a series algebra)."""
    if isinstance(h, Mapping):
        h = h.__getitem__
    S = A.semiring
    images = {s: h(s) for s in A.alphabet}
    n = A.n
    rows = []
    for i in range(n):
        line = []
        for j in range(n):
            acc = target.zero
            for s in A.alphabet:
                k = A.delta[s][i, j]
                if not S.is_zero(k):
                    acc = target.add(acc, target.act(k, images[s]))
            line.append(acc)
        rows.append(line)
    Ms = elimination_star(Matrix(target, rows))
    acc = target.zero
    for i, a in enumerate(A.alpha_list()):
        if S.is_zero(a):
            continue
        for j, b in enumerate(A.beta_list()):
            if S.is_zero(b):
                continue
            acc = target.add(acc, target.act(S.mul(a, b), Ms[i, j]))
    return acc


# ---------------------------------------------------------------------------
# structural operations

def restrict(A: WeightedAutomaton, keep: Sequence[int]) -> WeightedAutomaton:
    """The sub-automaton on the given states (in the given order)."""
    S = A.semiring
    keep = list(keep)
    if not keep:
        return zero_automaton(S, A.alphabet)
    alpha = [A.alpha[0, i] for i in keep]
    beta = [A.beta[i, 0] for i in keep]
    delta = {s: Matrix(S, [[m[i, j] for j in keep] for i in keep]) for s, m in A.delta.items()}
    return WeightedAutomaton(S, A.alphabet, alpha, delta, beta)


def trim(A: WeightedAutomaton) -> WeightedAutomaton:
    """Drop states that are not both reachable and co-reachable along nonzero weights."""
    rows = A.sparse_rows()
    succ = [set() for _ in range(A.n)]
    pred = [set() for _ in range(A.n)]
    for s in A.alphabet:
        for i, r in enumerate(rows[s]):
            for j, _ in r:
                succ[i].add(j)
                pred[j].add(i)
    S = A.semiring

    def closure(start, edges):
        seen = set(start)
        stack = list(start)
        while stack:
            i = stack.pop()
            for j in edges[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    acc = closure([i for i in range(A.n) if not S.is_zero(A.alpha[0, i])], succ)
    co = closure([i for i in range(A.n) if not S.is_zero(A.beta[i, 0])], pred)
    return restrict(A, sorted(acc & co))


def hadamard_automaton(A: WeightedAutomaton, B: WeightedAutomaton, cap: int = 100_000) -> WeightedAutomaton:
    """Product automaton on reachable state pairs; behavior ``|A| ⊙ |B|``."""
    _check_pair(A, B)
    S = A.semiring
    if not S.commutative:
        raise IncompatibleSemiring("the Hadamard product needs a commutative semiring")
    ra, rb = A.sparse_rows(), B.sparse_rows()
    index: Dict[tuple, int] = {}
    order = []
    alpha0 = {}
    for i, a in A.initial_vector().items():
        for j, b in B.initial_vector().items():
            p = S.mul(a, b)
            if not S.is_zero(p):
                alpha0[(i, j)] = p
    frontier = sorted(alpha0)
    for pair in frontier:
        index[pair] = len(order)
        order.append(pair)
    edges = []
    k = 0
    while k < len(order):
        i, j = order[k]
        for s in A.alphabet:
            for i2, x in ra[s][i]:
                for j2, y in rb[s][j]:
                    p = S.mul(x, y)
                    if S.is_zero(p):
                        continue
                    if (i2, j2) not in index:
                        if len(order) >= cap:
                            raise StateBlowup(f"Hadamard product exceeds {cap} states")
                        index[(i2, j2)] = len(order)
                        order.append((i2, j2))
                    edges.append((s, k, index[(i2, j2)], p))
        k += 1
    n = max(len(order), 1)
    delta = {s: [[S.zero] * n for _ in range(n)] for s in A.alphabet}
    for s, a, b, p in edges:
        delta[s][a][b] = S.add(delta[s][a][b], p)
    alpha = [S.zero] * n
    beta = [S.zero] * n
    for pair, idx in index.items():
        alpha[idx] = alpha0.get(pair, S.zero)
        beta[idx] = S.mul(A.beta[pair[0], 0], B.beta[pair[1], 0])
    return WeightedAutomaton(S, A.alphabet, alpha, delta, beta)


def support_automaton(A: WeightedAutomaton) -> WeightedAutomaton:
    """Boolean automaton recognising ``supp |A|`` (the semiring must be positive)."""
    S = A.semiring
    if not S.positive:
        raise NotPositive(f"support is a morphism only over positive semirings, not {S.id}")
    flag = lambda x: 0 if S.is_zero(x) else 1
    return WeightedAutomaton(BOOL, A.alphabet, [flag(x) for x in A.alpha_list()],
                             {s: [[flag(x) for x in r] for r in m.entries] for s, m in A.delta.items()},
                             [flag(x) for x in A.beta_list()])


def change_semiring(A: WeightedAutomaton, target: Semiring, convert=lambda x: x) -> WeightedAutomaton:
    """Reinterpret the weights of ``A`` in ``target`` (e.g. ``nat`` inside ``nat-inf``)."""
    return WeightedAutomaton(target, A.alphabet, [convert(x) for x in A.alpha_list()],
                             {s: [[convert(x) for x in r] for r in m.entries] for s, m in A.delta.items()},
                             [convert(x) for x in A.beta_list()])


def determinize(A: WeightedAutomaton, cap: int = 4096) -> WeightedAutomaton:
    """Complete deterministic Boolean automaton by the subset construction.

    State ``0`` is the initial subset; the empty subset is kept as a sink.
    """
    if A.semiring.id != "bool":
        raise IncompatibleSemiring("determinize works on Boolean automata")
    rows = A.sparse_rows()
    start = frozenset(A.initial_vector())
    index = {start: 0}
    order = [start]
    trans = []
    k = 0
    while k < len(order):
        cur = order[k]
        for s in A.alphabet:
            nxt = frozenset(j for i in cur for j, _ in rows[s][i])
            if nxt not in index:
                if len(order) >= cap:
                    raise StateBlowup(f"subset construction exceeds {cap} states")
                index[nxt] = len(order)
                order.append(nxt)
            trans.append((s, k, index[nxt]))
        k += 1
    n = len(order)
    delta = {s: [[0] * n for _ in range(n)] for s in A.alphabet}
    for s, a, b in trans:
        delta[s][a][b] = 1
    final = [1 if any(A.beta[i, 0] for i in subset) else 0 for subset in order]
    alpha = [1] + [0] * (n - 1)
    return WeightedAutomaton(BOOL, A.alphabet, alpha, delta, final)


def complement(A: WeightedAutomaton, cap: int = 4096) -> WeightedAutomaton:
    """Boolean automaton for the complement of the language of ``A``."""
    D = determinize(A, cap)
    return WeightedAutomaton(BOOL, D.alphabet, D.alpha, D.delta, [1 - x for x in D.beta_list()])
