"""Seeded generators for series, terms, matrices and automata."""
from __future__ import annotations

import random
from typing import Sequence

from .automaton import WeightedAutomaton
from .matrix import Matrix
from .semiring import Semiring
from .series import SeriesAlgebra, TruncatedSeries, all_words
from .terms import ONE, ZERO, Const, Plus, Prod, Star, Sum, Sym, Term, constant_term


def nonzero_sample(rng: random.Random, S: Semiring):
    for _ in range(100):
        x = S.sample(rng)
        if not S.is_zero(x):
            return x
    return S.one


def random_series(rng: random.Random, alg: SeriesAlgebra, proper: bool = False,
                  density: float = 0.3) -> TruncatedSeries:
    S = alg.semiring
    coeffs = {}
    for w in all_words(alg.alphabet, alg.max_len):
        if proper and not w:
            continue
        if rng.random() < density:
            coeffs[w] = S.sample(rng)
    return alg.series(coeffs)


def random_term(rng: random.Random, S: Semiring, names: Sequence[str], depth: int = 5,
                leaf_prob: float = 0.3, const_prob: float = 0.2) -> Term:
    """A random term of depth at most ``depth`` whose stars are all defined in ``S``.

    A star or plus whose argument has a constant term outside the star
    domain is applied to a fresh ``σ·t`` instead, which is proper.
    """
    names = list(names)

    def leaf():
        r = rng.random()
        if r < const_prob:
            k = S.sample(rng)
            if S.is_zero(k):
                return ZERO
            return ONE if S.is_one(k) else Const(k)
        return Sym(rng.choice(names))

    def build(d):
        if d == 0 or rng.random() < leaf_prob:
            return leaf()
        r = rng.random()
        if r < 0.35:
            return Sum(build(d - 1), build(d - 1))
        if r < 0.7:
            return Prod(build(d - 1), build(d - 1))
        arg = build(d - 1)
        if not S.star_domain(constant_term(arg, S)):
            sym = Sym(rng.choice(names))
            arg = Prod(sym, build(d - 2)) if d >= 2 else sym
        return Star(arg) if r < 0.85 else Plus(arg)

    return build(depth)


def random_matrix(rng: random.Random, S: Semiring, n: int, cols: int | None = None, pool=None,
                  density: float = 1.0) -> Matrix:
    cols = n if cols is None else cols

    def entry():
        if rng.random() >= density:
            return S.zero
        return rng.choice(pool) if pool is not None else S.sample(rng)

    return Matrix(S, [[entry() for _ in range(cols)] for _ in range(n)])


def random_automaton(rng: random.Random, S: Semiring, alphabet: Sequence[str], n: int,
                     density: float = 0.4, pool=None, nonzero_alpha: bool = False) -> WeightedAutomaton:
    def entry(p):
        if rng.random() >= p:
            return S.zero
        return rng.choice(pool) if pool is not None else S.sample(rng)

    if nonzero_alpha:
        nz = [x for x in pool if not S.is_zero(x)] if pool is not None else None
        alpha = [rng.choice(nz) if nz else nonzero_sample(rng, S) for _ in range(n)]
    else:
        alpha = [entry(0.6) for _ in range(n)]
    beta = [entry(0.6) for _ in range(n)]
    delta = {s: [[entry(density) for _ in range(n)] for _ in range(n)] for s in alphabet}
    return WeightedAutomaton(S, alphabet, alpha, delta, beta)
