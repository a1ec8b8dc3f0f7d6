"""Exact equivalence of weighted automata.

Two procedures are available:

* over ``nat``, ``int`` and ``rat`` the weights are embedded in the
  rationals and the span of reachable difference vectors is computed by
  Gaussian elimination;
* over semirings with a finite carrier (``bool``, ``nat-k``, ``chain``,
  ``zmod``) the pairs of reachable row vectors are explored breadth first.

Both return the length-lexicographically least word on which the
behaviors differ.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .automaton import WeightedAutomaton
from .errors import IncompatibleSemiring, StateBlowup, UnsupportedSemiring
from .semiring import same_semiring

RATIONAL_IDS = ("nat", "int", "rat")


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    witness: Optional[str] = None
    method: str = ""

    def __bool__(self):
        return self.equivalent

    def describe(self) -> str:
        if self.equivalent:
            return "EQUIVALENT"
        return f"INEQUIVALENT witness={self.witness or 'eps'}"


def supports_exact(semiring) -> bool:
    return semiring.id in RATIONAL_IDS or semiring.finite


def exact_equiv(A: WeightedAutomaton, B: WeightedAutomaton, cap: int = 200_000) -> Verdict:
    if not same_semiring(A.semiring, B.semiring):
        raise IncompatibleSemiring(f"{A.semiring.id} vs {B.semiring.id}")
    if A.alphabet != B.alphabet:
        raise IncompatibleSemiring("automata over different alphabets")
    S = A.semiring
    if S.id in RATIONAL_IDS:
        return _linear_equiv(A, B)
    if S.finite:
        return _pair_search(A, B, cap)
    raise UnsupportedSemiring(f"no exact equivalence procedure for {S.id}")


# ---------------------------------------------------------------------------
# rational span

class _Basis:
    """Row-echelon basis of a subspace of ``Q^N``."""

    def __init__(self):
        self.rows: Dict[int, List[Fraction]] = {}

    def reduce(self, v: List[Fraction]) -> List[Fraction]:
        v = list(v)
        for p, row in self.rows.items():
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        c = v[pivot]
        v = [x / c for x in v]
        for p, row in self.rows.items():
            if row[pivot]:
                k = row[pivot]
                self.rows[p] = [x - k * y for x, y in zip(row, v)]
        self.rows[pivot] = v
        return True

    def vectors(self):
        return list(self.rows.values())


def _difference_system(A, B):
    N = A.n + B.n
    alpha = [Fraction(x) for x in A.alpha_list()] + [Fraction(x) for x in B.alpha_list()]
    beta = [Fraction(x) for x in A.beta_list()] + [-Fraction(x) for x in B.beta_list()]
    mats = {}
    for s in A.alphabet:
        m = [[Fraction(0)] * N for _ in range(N)]
        for i in range(A.n):
            for j in range(A.n):
                m[i][j] = Fraction(A.delta[s][i, j])
        for i in range(B.n):
            for j in range(B.n):
                m[A.n + i][A.n + j] = Fraction(B.delta[s][i, j])
        mats[s] = m
    return N, alpha, beta, mats


def _vm(v, m):
    N = len(v)
    out = [Fraction(0)] * N
    for i, x in enumerate(v):
        if x:
            row = m[i]
            for j in range(N):
                if row[j]:
                    out[j] += x * row[j]
    return out


def _mv(m, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in m]


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def _linear_equiv(A, B) -> Verdict:
    N, alpha, beta, mats = _difference_system(A, B)
    letters = A.alphabet
    # forward spans by length: F_m = span{α M_w : |w| <= m}
    basis = _Basis()
    frontier = [alpha] if basis.add(alpha) else []
    length = 0
    shortest = None
    if _dot(alpha, beta):
        shortest = 0
    while frontier and shortest is None:
        length += 1
        nxt = []
        for v in frontier:
            for s in letters:
                u = _vm(v, mats[s])
                if basis.add(u):
                    nxt.append(u)
                    if shortest is None and _dot(u, beta):
                        shortest = length
        frontier = nxt
    if shortest is None:
        return Verdict(True, method="rational-span")
    # backward spans B_j = span{M_s β : |s| = j}, then a greedy length-lex walk
    back = [[beta]]
    for _ in range(shortest):
        bb = _Basis()
        for b in back[-1]:
            for s in letters:
                bb.add(_mv(mats[s], b))
        back.append(bb.vectors())
    vec = alpha
    word = ""
    for pos in range(shortest):
        remaining = shortest - pos - 1
        for s in letters:
            u = _vm(vec, mats[s])
            if any(_dot(u, b) for b in back[remaining]):
                vec = u
                word += s
                break
        else:
            raise AssertionError("witness walk lost track of the span")
    return Verdict(False, word, method="rational-span")


# ---------------------------------------------------------------------------
# finite carriers

def _pair_search(A, B, cap: int) -> Verdict:
    start = (tuple(sorted(A.initial_vector().items())), tuple(sorted(B.initial_vector().items())))
    seen = {start}
    queue = [(start, "")]
    k = 0
    while k < len(queue):
        (va, vb), word = queue[k]
        k += 1
        da, db = dict(va), dict(vb)
        if A.final_weight(da) != B.final_weight(db):
            return Verdict(False, word, method="pair-search")
        for s in A.alphabet:
            nxt = (tuple(sorted(A.step(da, s).items())), tuple(sorted(B.step(db, s).items())))
            if nxt not in seen:
                if len(seen) >= cap:
                    raise StateBlowup(f"more than {cap} reachable vector pairs")
                seen.add(nxt)
                queue.append((nxt, word + s))
    return Verdict(True, method="pair-search")


def series_witness(s, t) -> Optional[str]:
    """Length-lex least word where two truncated series differ, if any."""
    from .series import all_words

    for w in all_words(s.alphabet, s.max_len):
        if s.coefficient(w) != t.coefficient(w):
            return w
    return None
