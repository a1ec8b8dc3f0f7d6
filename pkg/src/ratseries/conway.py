"""Normal forms and an equivalence decision for terms over ``K∞``.

Every term over the infinity extension of a positive semiring ``K`` is
equivalent to ``c + t₀ + ∞·t∞`` where ``c`` is a scalar, ``t₀`` is a simple
term (no star, no bare constants, so ``|t₀|`` is proper with coefficients in
``K``) and ``∞·t∞`` carries the coefficients equal to ``∞``.  Because
``∞·s`` only depends on the support of ``s``, the infinite part can be
compared through Boolean automata, while the simple part is compared over
``K`` itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .automaton import (WeightedAutomaton, change_semiring, compile_term, complement, hadamard_automaton,
                        simple_part, support_automaton, trim)
from .equivalence import Verdict, exact_equiv, supports_exact
from .errors import UnsupportedSemiring
from .semiring import INF, NAT_INF, Semiring
from .terms import (ONE, ZERO, Const, One, Plus, Prod, Star, Sum, Sym, Term, TermAlgebra, Zero,
                    constant_term, default_alphabet, postorder, symbols)


def _base(semiring: Semiring) -> Semiring:
    if semiring.base is None or not semiring.contains(INF):
        raise UnsupportedSemiring(f"{semiring.id} is not the infinity extension of a positive semiring")
    return semiring.base


def fold_constants(t: Term, semiring: Semiring = NAT_INF) -> Term:
    """Replace every maximal symbol-free subterm by one constant ``[k]``."""
    has_sym = {}
    for node in postorder(t):
        kids = node.children()
        has_sym[id(node)] = isinstance(node, Sym) or any(has_sym[id(c)] for c in kids)
    out = {}
    for node in postorder(t):
        if not has_sym[id(node)]:
            out[id(node)] = Const(constant_term(node, semiring))
        elif isinstance(node, (Sum, Prod)):
            out[id(node)] = type(node)(out[id(node.left)], out[id(node.right)])
        elif isinstance(node, (Star, Plus)):
            out[id(node)] = type(node)(out[id(node.arg)])
        else:
            out[id(node)] = node
    return out[id(t)]


@dataclass
class NormalForm:
    """``const + simple + ∞·infinite``; ``infinite`` is proper unless ``const`` is 0."""

    semiring: Semiring
    const: object
    simple: Term
    infinite: Term
    disjoint_supports: bool = False
    alphabet: Optional[tuple] = None
    simple_automaton: Optional[WeightedAutomaton] = field(default=None, repr=False, compare=False)

    def as_term(self) -> Term:
        alg = TermAlgebra(self.semiring)
        S = self.semiring
        const = ZERO if S.is_zero(self.const) else ONE if S.is_one(self.const) else Const(self.const)
        return alg.add(alg.add(const, self.simple), alg.act(INF, self.infinite))

    def components(self):
        return (self.const, self.simple, self.infinite)


def normalize(t: Term, semiring: Semiring = NAT_INF) -> NormalForm:
    """Split ``t`` into constant, simple and infinite parts by structural recursion."""
    S = semiring
    _base(S)
    alg = TermAlgebra(S)
    add, mul, act = alg.add, alg.mul, alg.act
    parts = {}
    for node in postorder(t):
        if isinstance(node, Zero):
            nf = (S.zero, ZERO, ZERO)
        elif isinstance(node, One):
            nf = (S.one, ZERO, ZERO)
        elif isinstance(node, Const):
            nf = (node.value, ZERO, ZERO)
        elif isinstance(node, Sym):
            nf = (S.zero, node, ZERO)
        elif isinstance(node, Sum):
            (a, b, c), (d, e, f) = parts[id(node.left)], parts[id(node.right)]
            nf = (S.add(a, d), add(b, e), add(c, f))
        elif isinstance(node, Prod):
            nf = _product(S, alg, parts[id(node.left)], parts[id(node.right)])
        elif isinstance(node, Star):
            nf = _star(S, alg, parts[id(node.arg)])
        else:  # Plus
            inner = parts[id(node.arg)]
            nf = _product(S, alg, inner, _star(S, alg, inner))
        parts[id(node)] = nf
    const, simple, infinite = parts[id(t)]
    return NormalForm(S, const, simple, infinite)


def _product(S, alg, left, right):
    sc, s0, si = left
    tc, t0, ti = right
    add, mul, act = alg.add, alg.mul, alg.act
    simple = mul(s0, t0)
    infinite = add(add(mul(s0, ti), mul(si, t0)), mul(si, ti))
    if sc is INF:
        infinite = add(infinite, add(t0, ti))
    else:
        simple = add(act(sc, t0), simple)
        if not S.is_zero(sc):
            infinite = add(infinite, ti)
    if tc is INF:
        infinite = add(infinite, add(s0, si))
    else:
        simple = add(simple, act(tc, s0))
        if not S.is_zero(tc):
            infinite = add(infinite, si)
    return (S.mul(sc, tc), simple, infinite)


def _star(S, alg, part):
    c, s0, si = part
    if S.is_zero(c):
        # (s0 + ∞si)* = 1 + s0⁺ + ∞ (s0 + si)* si s0*
        inf = alg.mul(alg.mul(alg.star(alg.add(s0, si)), si), alg.star(s0))
        return (S.one, alg.plus(s0), inf)
    # (c + r)* = ∞ + ∞ r⁺ whenever c ≠ 0, and ∞ r⁺ only sees supp(r)
    return (INF, ZERO, alg.plus(alg.add(s0, si)))


def _symbol_map(alphabet, names):
    if any(n.startswith("x") and n[1:].isdigit() for n in names):
        return lambda letter: f"x{alphabet.index(letter) + 1}"
    return lambda letter: letter


def refine_disjoint(nf: NormalForm, alphabet: Sequence[str] | None = None, cap: int = 4096) -> NormalForm:
    """Make the supports of the three parts pairwise disjoint.

    An infinite constant is moved into the infinite part (``∞ = ∞·1``).
    The simple part is then restricted to the complement of the support of
    the infinite part; what is cut away is absorbed, as ``s + ∞t = ∞t``
    whenever ``supp s ⊆ supp t``.
    """
    S = nf.semiring
    K = _base(S)
    alg = TermAlgebra(S)
    alphabet = tuple(alphabet) if alphabet is not None else default_alphabet(nf.simple, nf.infinite)
    const, simple, infinite = nf.const, nf.simple, nf.infinite
    if const is INF:
        const, infinite = S.zero, alg.add(ONE, infinite)
    out = replace(nf, const=const, simple=simple, infinite=infinite, disjoint_supports=True,
                  alphabet=alphabet, simple_automaton=None)
    if isinstance(infinite, Zero) or isinstance(simple, Zero):
        return out
    simple_aut = compile_term(simple, K, alphabet)
    inf_support = support_automaton(compile_term(infinite, S, alphabet))
    overlap = trim(hadamard_automaton(support_automaton(simple_aut), inf_support))
    if not any(overlap.alpha_list()):
        out.simple_automaton = simple_aut
        return out
    outside = change_semiring(complement(inf_support, cap), K, lambda x: K.one if x else K.zero)
    kept = trim(hadamard_automaton(simple_aut, outside))
    out.simple_automaton = kept
    names = symbols(simple) | symbols(infinite)
    out.simple = simple_part(kept, _symbol_map(alphabet, names)) if any(kept.alpha_list()) else ZERO
    return out


def normal_form(t: Term, semiring: Semiring = NAT_INF, alphabet=None, cap: int = 4096) -> NormalForm:
    return refine_disjoint(normalize(t, semiring), alphabet or default_alphabet(t), cap)


def simple_automaton(nf: NormalForm) -> WeightedAutomaton:
    if nf.simple_automaton is not None:
        return nf.simple_automaton
    return compile_term(nf.simple, _base(nf.semiring), nf.alphabet or default_alphabet(nf.simple))


def infinite_support(nf: NormalForm) -> WeightedAutomaton:
    alphabet = nf.alphabet or default_alphabet(nf.infinite)
    return support_automaton(compile_term(nf.infinite, nf.semiring, alphabet))


def decide_equiv(s: Term, t: Term, semiring: Semiring = NAT_INF, cap: int = 4096) -> Verdict:
    """Exact equivalence of two terms over ``K∞``, with the least differing word."""
    K = _base(semiring)
    if not supports_exact(K):
        raise UnsupportedSemiring(f"no exact equivalence procedure for {K.id}")
    alphabet = default_alphabet(s, t)
    ns = normal_form(s, semiring, alphabet, cap)
    nt = normal_form(t, semiring, alphabet, cap)
    witnesses = []
    if ns.const != nt.const:
        witnesses.append("")
    v0 = exact_equiv(simple_automaton(ns), simple_automaton(nt))
    if not v0.equivalent:
        witnesses.append(v0.witness)
    vi = exact_equiv(infinite_support(ns), infinite_support(nt))
    if not vi.equivalent:
        witnesses.append(vi.witness)
    if not witnesses:
        return Verdict(True, method="normal-form")
    rank = {c: i for i, c in enumerate(alphabet)}
    best = min(witnesses, key=lambda w: (len(w), [rank[c] for c in w]))
    return Verdict(False, best, method="normal-form")
