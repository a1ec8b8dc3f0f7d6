"""Exact truncated formal power series over a free monoid.

A :class:`TruncatedSeries` stores the coefficients of all words of length at
most ``max_len``.  Every operation here is exact on that window: products
and stars of a word only ever depend on coefficients of shorter or equal
words, so truncating first and computing afterwards loses nothing.
"""
from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence

from .errors import IncompatibleSemiring, IncompatibleSeries, NotProper, StarUndefined
from .semiring import BOOL, Semiring, same_semiring

EPS_TEXT = "eps"


def word_key(alphabet: Sequence[str]):
    """Sort key for length-lexicographic order with respect to ``alphabet``."""
    rank = {c: i for i, c in enumerate(alphabet)}
    return lambda w: (len(w), tuple(rank[c] for c in w))


def all_words(alphabet: Sequence[str], max_len: int):
    """Every word of length ``<= max_len`` in length-lex order."""
    for n in range(max_len + 1):
        for letters in itertools.product(alphabet, repeat=n):
            yield "".join(letters)


class TruncatedSeries:
    """Coefficients of the words ``|w| <= max_len``; absent words are zero."""

    __slots__ = ("semiring", "alphabet", "max_len", "coeffs", "_hash")

    def __init__(self, semiring: Semiring, alphabet: Sequence[str], max_len: int,
                 coeffs: Optional[Mapping[str, object]] = None, *, _trusted: bool = False):
        self.semiring = semiring
        self.alphabet = tuple(alphabet)
        self.max_len = max_len
        self._hash = None
        if _trusted:
            self.coeffs = coeffs
            return
        if max_len < 0:
            raise ValueError("max_len must be non-negative")
        if any(len(c) != 1 for c in self.alphabet) or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"alphabet letters must be distinct single characters: {alphabet!r}")
        letters = set(self.alphabet)
        clean: Dict[str, object] = {}
        for w, c in (coeffs or {}).items():
            if any(ch not in letters for ch in w):
                raise IncompatibleSeries(f"word {w!r} leaves the alphabet {self.alphabet}")
            if len(w) > max_len:
                raise IncompatibleSeries(f"word {w!r} is longer than the truncation {max_len}")
            if not semiring.contains(c):
                raise IncompatibleSeries(f"{c!r} is not a {semiring.id} scalar")
            if not semiring.is_zero(c):
                clean[w] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------------
    @classmethod
    def zero(cls, semiring, alphabet, max_len):
        return cls(semiring, alphabet, max_len, {})

    @classmethod
    def one(cls, semiring, alphabet, max_len):
        return cls.constant(semiring, alphabet, max_len, semiring.one)

    @classmethod
    def constant(cls, semiring, alphabet, max_len, k):
        return cls(semiring, alphabet, max_len, {"": k})

    @classmethod
    def monomial(cls, semiring, alphabet, max_len, word, k=None):
        k = semiring.one if k is None else k
        if len(word) > max_len:
            return cls.zero(semiring, alphabet, max_len)
        return cls(semiring, alphabet, max_len, {word: k})

    def _like(self, coeffs) -> "TruncatedSeries":
        zero = self.semiring.is_zero
        return TruncatedSeries(self.semiring, self.alphabet, self.max_len,
                               {w: c for w, c in coeffs.items() if not zero(c)}, _trusted=True)

    # -- queries ---------------------------------------------------------------------
    def coefficient(self, word: str):
        return self.coeffs.get(word, self.semiring.zero)

    __getitem__ = coefficient

    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    def constant_term(self):
        return self.coefficient("")

    def is_proper(self) -> bool:
        return "" not in self.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def proper_part(self) -> "TruncatedSeries":
        return self._like({w: c for w, c in self.coeffs.items() if w})

    def sorted_items(self):
        key = word_key(self.alphabet)
        return sorted(self.coeffs.items(), key=lambda item: key(item[0]))

    def to_text(self) -> str:
        """``word : scalar`` lines in length-lex order; the zero series is ``0``."""
        if not self.coeffs:
            return "0"
        fmt = self.semiring.format
        return "\n".join(f"{w or EPS_TEXT} : {fmt(c)}" for w, c in self.sorted_items())

    def to_json(self) -> dict:
        enc = self.semiring.to_json
        return {
            "semiring": self.semiring.id,
            "alphabet": list(self.alphabet),
            "maxlen": self.max_len,
            "coefficients": [[w or EPS_TEXT, enc(c)] for w, c in self.sorted_items()],
        }

    def __repr__(self):
        body = " + ".join(f"{self.semiring.format(c)}·{w or 'ε'}" for w, c in self.sorted_items())
        return f"TruncatedSeries<{self.semiring.id}, L={self.max_len}>({body or '0'})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (same_semiring(self.semiring, other.semiring) and self.alphabet == other.alphabet
                and self.max_len == other.max_len and self.coeffs == other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.semiring.id, self.alphabet, self.max_len,
                               frozenset(self.coeffs.items())))
        return self._hash

    # -- operators --------------------------------------------------------------------
    def __add__(self, other):
        return series_add(self, other)

    def __mul__(self, other):
        return cauchy_product(self, other)

    def star(self):
        return star_total(self)

    def by_length(self):
        buckets = [[] for _ in range(self.max_len + 1)]
        for w, c in self.coeffs.items():
            buckets[len(w)].append((w, c))
        return buckets


def _check(s: TruncatedSeries, t: TruncatedSeries) -> None:
    if not same_semiring(s.semiring, t.semiring):
        raise IncompatibleSeries(f"semirings differ: {s.semiring.id} vs {t.semiring.id}")
    if s.alphabet != t.alphabet:
        raise IncompatibleSeries(f"alphabets differ: {s.alphabet} vs {t.alphabet}")
    if s.max_len != t.max_len:
        raise IncompatibleSeries(f"truncation lengths differ: {s.max_len} vs {t.max_len}")


def series_add(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    _check(s, t)
    add = s.semiring.add
    out = dict(s.coeffs)
    for w, c in t.coeffs.items():
        out[w] = add(out[w], c) if w in out else c
    return s._like(out)


def series_action(k, s: TruncatedSeries) -> TruncatedSeries:
    """Left action ``(k s, w) = k (s, w)``."""
    mul = s.semiring.mul
    return s._like({w: mul(k, c) for w, c in s.coeffs.items()})


def series_right_action(s: TruncatedSeries, k) -> TruncatedSeries:
    mul = s.semiring.mul
    return s._like({w: mul(c, k) for w, c in s.coeffs.items()})


def cauchy_product(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """``(st, w) = Σ_{uv=w} (s,u)(t,v)`` for every ``|w| <= max_len``."""
    _check(s, t)
    S = s.semiring
    add, mul = S.add, S.mul
    L = s.max_len
    t_len = t.by_length()
    out: Dict[str, object] = {}
    for u, a in s.coeffs.items():
        for m in range(L - len(u) + 1):
            for v, b in t_len[m]:
                w = u + v
                p = mul(a, b)
                out[w] = add(out[w], p) if w in out else p
    return s._like(out)


def star_proper(s: TruncatedSeries) -> TruncatedSeries:
    """The unique solution of ``x = s x + 1`` for proper ``s``.

    Solved length by length: ``(x, ε) = 1`` and, for ``|w| >= 1``,
    ``(x, w) = Σ (s, u)(x, v)`` over factorisations ``w = uv`` with ``u``
    nonempty.  Only coefficients of strictly shorter words are consulted.
    """
    if not s.is_proper():
        raise NotProper("star_proper needs a series with zero constant term")
    S = s.semiring
    add, mul, is_zero = S.add, S.mul, S.is_zero
    L = s.max_len
    s_len = s.by_length()
    layers = [{"": S.one}]
    for n in range(1, L + 1):
        acc: Dict[str, object] = {}
        for m in range(1, n + 1):
            rest = layers[n - m]
            if not rest:
                continue
            for u, a in s_len[m]:
                for v, b in rest.items():
                    w = u + v
                    p = mul(a, b)
                    acc[w] = add(acc[w], p) if w in acc else p
        layers.append({w: c for w, c in acc.items() if not is_zero(c)})
    out: Dict[str, object] = {}
    for layer in layers:
        out.update(layer)
    return s._like(out)


def star_total(s: TruncatedSeries) -> TruncatedSeries:
    """Star of an arbitrary series as ``(k₀* r)* k₀*`` with ``s = k₀ + r``.

    Needs ``k₀`` in the star domain of the coefficient semiring; for proper
    ``s`` this is ``star_proper(s)``.
    """
    S = s.semiring
    k0 = s.constant_term()
    if S.is_zero(k0):
        return star_proper(s)
    k_star = S.star(k0)
    r = s.proper_part()
    return series_right_action(star_proper(series_action(k_star, r)), k_star)


def hadamard(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise product."""
    _check(s, t)
    if not s.semiring.commutative:
        raise IncompatibleSemiring("the Hadamard product needs a commutative semiring")
    mul = s.semiring.mul
    return s._like({w: mul(c, t.coeffs[w]) for w, c in s.coeffs.items() if w in t.coeffs})


def support_series(s: TruncatedSeries) -> TruncatedSeries:
    """Characteristic series of ``supp(s)`` over the Boolean semiring."""
    return TruncatedSeries(BOOL, s.alphabet, s.max_len, {w: 1 for w in s.coeffs}, _trusted=True)


def extend_polynomial_morphism(h: Callable[[str], object] | Mapping[str, object],
                               p: TruncatedSeries, target):
    """Image of the polynomial ``p`` under the morphism extending ``h``.

    ``target`` is an algebra (a :class:`Semiring` or a :class:`SeriesAlgebra`)
    whose scalars accept the coefficients of ``p``; the image is
    ``Σ_w (p,w) · h(w₁)···h(wₘ)``.
    """
    if isinstance(h, Mapping):
        h = h.__getitem__
    scalars = target if isinstance(target, Semiring) else target.semiring
    K = p.semiring
    for c in p.coeffs.values():
        if not scalars.contains(c):
            raise IncompatibleSemiring(f"{K.id} coefficient {c!r} does not act on {scalars.id}")
    if not (same_semiring(scalars, K) or (scalars.base is not None and same_semiring(scalars.base, K))):
        raise IncompatibleSemiring(f"{scalars.id} is not an algebra over {K.id}")
    images = {}
    acc = target.zero
    for w, c in p.sorted_items():
        value = target.one
        for letter in w:
            if letter not in images:
                images[letter] = h(letter)
            value = target.mul(value, images[letter])
        acc = target.add(acc, target.act(c, value))
    return acc


class SeriesAlgebra:
    """The semiring of truncated series, packaged as a matrix/term algebra.

    ``star`` is :func:`star_total`, so it is total exactly when the
    coefficient semiring is, and partial (proper arguments) otherwise.
    """

    def __init__(self, semiring: Semiring, alphabet: Sequence[str], max_len: int):
        self.semiring = semiring
        self.alphabet = tuple(alphabet)
        self.max_len = max_len
        self.zero = TruncatedSeries.zero(semiring, self.alphabet, max_len)
        self.one = TruncatedSeries.one(semiring, self.alphabet, max_len)
        self.id = f"{semiring.id}<<{''.join(self.alphabet)}*>>/{max_len}"

    def __repr__(self):
        return f"SeriesAlgebra({self.semiring.id!r}, {''.join(self.alphabet)!r}, {self.max_len})"

    def add(self, s, t):
        return series_add(s, t)

    def mul(self, s, t):
        return cauchy_product(s, t)

    def star(self, s):
        return star_total(s)

    def act(self, k, s):
        return series_action(k, s)

    def is_zero(self, s) -> bool:
        return s.is_zero()

    def letter(self, sigma: str) -> TruncatedSeries:
        return TruncatedSeries.monomial(self.semiring, self.alphabet, self.max_len, sigma)

    def constant(self, k) -> TruncatedSeries:
        return TruncatedSeries.constant(self.semiring, self.alphabet, self.max_len, k)

    def series(self, coeffs: Mapping[str, object]) -> TruncatedSeries:
        return TruncatedSeries(self.semiring, self.alphabet, self.max_len, coeffs)

    def contains(self, s) -> bool:
        return (isinstance(s, TruncatedSeries) and same_semiring(s.semiring, self.semiring)
                and s.alphabet == self.alphabet and s.max_len == self.max_len)


class InfinityCollapseAlgebra(SeriesAlgebra):
    """Boolean series with the collapsing action of an infinity extension.

    ``0·r = 0`` and ``k·r = r`` for every nonzero ``k`` of ``scalars``; this
    instance satisfies ``∞e = e``.
    """

    def __init__(self, scalars: Semiring, alphabet, max_len):
        super().__init__(BOOL, alphabet, max_len)
        self.scalars = scalars
        self.id = f"bool<<{''.join(self.alphabet)}*>>/{max_len} over {scalars.id}"

    def act(self, k, s):
        return self.zero if self.scalars.is_zero(k) else s


def iterate_affine(a: TruncatedSeries, b: TruncatedSeries, start: TruncatedSeries, steps: int):
    """Apply ``x ← a x + b`` ``steps`` times starting from ``start``."""
    x = start
    for _ in range(steps):
        x = series_add(cauchy_product(a, x), b)
    return x


def series_from_items(semiring, alphabet, max_len, items: Iterable):
    return TruncatedSeries(semiring, alphabet, max_len, dict(items))
