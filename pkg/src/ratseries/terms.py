"""Rational expressions and Conway terms: syntax, parsing, printing, evaluation.

One syntax serves both roles.  Letters are single alphabetic characters,
variables are ``x`` followed by digits (``x1``, ``x2``, ...), ``[k]`` is the
scalar constant ``k·1`` and ``[k].t`` is the action of ``k`` on ``t``::

    expr := sum
    sum  := prod ("+" prod)*
    prod := post ("." post)*
    post := atom ("*" | "^+")*
    atom := "0" | "1" | LETTER | VAR | "[" SCALAR "]" | "(" expr ")"

Terms are immutable and hash-consed only by value; evaluation walks them as
DAGs, so heavily shared terms (state elimination output) stay cheap.
"""
from __future__ import annotations

import re
import string
from typing import Callable, Dict, Iterable, Mapping, Sequence

from .errors import ParseError
from .semiring import Semiring


class Term:
    __slots__ = ("_hash",)
    precedence = 3

    def children(self) -> tuple:
        return ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term) or type(self) is not type(other):
            return False
        if hash(self) != hash(other):
            return False
        return _deep_eq(self, other)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Term({to_text(self, limit=200)!r})"

    # convenience builders so tests can write terms compactly
    def __add__(self, other):
        return Sum(self, other)

    def __mul__(self, other):
        return Prod(self, other)


class Zero(Term):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("Zero")

    def key(self):
        return ()


class One(Term):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("One")

    def key(self):
        return ()


class Sym(Term):
    """A letter (``a``) or a variable (``x3``)."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("Sym", name))

    def key(self):
        return (self.name,)

    @property
    def is_variable(self) -> bool:
        return _VAR_RE.fullmatch(self.name) is not None

    @property
    def index(self) -> int:
        return int(self.name[1:])


class Const(Term):
    """The constant term ``k·1``."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value
        self._hash = hash(("Const", value))

    def key(self):
        return (self.value,)


class Sum(Term):
    __slots__ = ("left", "right")
    precedence = 0

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash(("Sum", left._hash, right._hash))

    def children(self):
        return (self.left, self.right)


class Prod(Term):
    __slots__ = ("left", "right")
    precedence = 1

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash(("Prod", left._hash, right._hash))

    def children(self):
        return (self.left, self.right)


class Star(Term):
    __slots__ = ("arg",)
    precedence = 2

    def __init__(self, arg: Term):
        self.arg = arg
        self._hash = hash(("Star", arg._hash))

    def children(self):
        return (self.arg,)


class Plus(Term):
    """``t⁺``, denoting ``t·t*``."""

    __slots__ = ("arg",)
    precedence = 2

    def __init__(self, arg: Term):
        self.arg = arg
        self._hash = hash(("Plus", arg._hash))

    def children(self):
        return (self.arg,)


ZERO = Zero()
ONE = One()

_VAR_RE = re.compile(r"x[0-9]+")


def _deep_eq(s: Term, t: Term) -> bool:
    stack = [(s, t)]
    seen = set()
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        if type(a) is not type(b) or a._hash != b._hash:
            return False
        pair = (id(a), id(b))
        if pair in seen:
            continue
        seen.add(pair)
        kids = a.children()
        if not kids:
            if a.key() != b.key():
                return False
            continue
        stack.extend(zip(kids, b.children()))
    return True


# ---------------------------------------------------------------------------
# traversal helpers

def postorder(t: Term):
    """Distinct nodes of the DAG ``t``, children before parents."""
    out = []
    seen = set()
    stack = [(t, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.children()):
            if id(child) not in seen:
                stack.append((child, False))
    return out


def dag_size(t: Term) -> int:
    return len(postorder(t))


def tree_size(t: Term) -> int:
    sizes: Dict[int, int] = {}
    for node in postorder(t):
        sizes[id(node)] = 1 + sum(sizes[id(c)] for c in node.children())
    return sizes[id(t)]


def depth(t: Term) -> int:
    d: Dict[int, int] = {}
    for node in postorder(t):
        d[id(node)] = 1 + max((d[id(c)] for c in node.children()), default=-1)
    return d[id(t)]


def symbols(t: Term) -> frozenset:
    return frozenset(n.name for n in postorder(t) if isinstance(n, Sym))


def _sym_key(name: str):
    if _VAR_RE.fullmatch(name):
        return (1, int(name[1:]), name)
    return (0, 0, name)


def sorted_symbols(names: Iterable[str]) -> list:
    return sorted(names, key=_sym_key)


def variables(t: Term) -> list:
    return [n for n in sorted_symbols(symbols(t)) if _VAR_RE.fullmatch(n)]


def default_alphabet(*terms: Term) -> tuple:
    """Letters needed by the canonical assignment of ``terms``.

    Plain letters stand for themselves.  Variables ``x_i`` are mapped to the
    ``i``-th letter of ``a, b, c, ...``, so ``x1, x3`` need ``(a, b, c)``.
    """
    names = set()
    for t in terms:
        names |= symbols(t)
    vars_ = [n for n in names if _VAR_RE.fullmatch(n)]
    letters = sorted(n for n in names if not _VAR_RE.fullmatch(n))
    if vars_ and letters:
        raise ParseError("a term may use letters or variables x1, x2, ... but not both")
    if vars_:
        top = max(int(v[1:]) for v in vars_)
        if top > 26:
            raise ParseError("at most 26 variables can be mapped onto letters")
        return tuple(string.ascii_lowercase[:top])
    return tuple(letters) or ("a",)


def letter_for(name: str, alphabet: Sequence[str]) -> str:
    """The letter a symbol denotes under the canonical assignment."""
    if _VAR_RE.fullmatch(name):
        i = int(name[1:])
        if not 1 <= i <= len(alphabet):
            raise ParseError(f"variable {name} has no letter in alphabet {''.join(alphabet)}")
        return alphabet[i - 1]
    if name not in alphabet:
        raise ParseError(f"letter {name!r} is not in alphabet {''.join(alphabet)}")
    return name


# ---------------------------------------------------------------------------
# printing

def format_scalar(k) -> str:
    return str(k)


def to_text(t: Term, limit: int | None = None) -> str:
    """Fully parenthesis-minimal text that :func:`parse_term` reads back verbatim."""
    texts: Dict[int, str] = {}
    for node in postorder(t):
        texts[id(node)] = _render(node, texts)
        if limit is not None and len(texts[id(node)]) > limit:
            texts[id(node)] = texts[id(node)][:limit] + "..."
    return texts[id(t)]


def _render(node: Term, texts) -> str:
    if isinstance(node, Zero):
        return "0"
    if isinstance(node, One):
        return "1"
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Const):
        return f"[{format_scalar(node.value)}]"

    def wrap(child, ok):
        s = texts[id(child)]
        return s if ok else f"({s})"

    if isinstance(node, Sum):
        return (wrap(node.left, True) + " + "
                + wrap(node.right, not isinstance(node.right, Sum)))
    if isinstance(node, Prod):
        return (wrap(node.left, node.left.precedence >= 1) + "."
                + wrap(node.right, node.right.precedence >= 2))
    suffix = "*" if isinstance(node, Star) else "^+"
    return wrap(node.arg, node.arg.precedence >= 2) + suffix


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(x[0-9]+)|(\^\+)|(\[[^\]]*\])|([A-Za-z])|([01])|([+.*()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at offset {pos} in {text!r}")
        var, plus, scalar, letter, digit, punct = m.groups()
        if var:
            out.append(("sym", var))
        elif plus:
            out.append(("op", "^+"))
        elif scalar:
            out.append(("scalar", scalar[1:-1].strip()))
        elif letter:
            out.append(("sym", letter))
        elif digit:
            out.append(("digit", digit))
        else:
            out.append(("op", punct))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, semiring: Semiring):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.semiring = semiring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, what):
        raise ParseError(f"{what} at token {self.pos} in {self.text!r}")

    def parse(self) -> Term:
        if not self.tokens:
            self.fail("empty expression")
        t = self.sum()
        if self.pos != len(self.tokens):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return t

    def sum(self):
        t = self.prod()
        while self.peek() == ("op", "+"):
            self.take()
            t = Sum(t, self.prod())
        return t

    def prod(self):
        t = self.post()
        while self.peek() == ("op", "."):
            self.take()
            t = Prod(t, self.post())
        return t

    def post(self):
        t = self.atom()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                t = Star(t)
            elif tok == ("op", "^+"):
                self.take()
                t = Plus(t)
            else:
                return t

    def atom(self):
        kind, value = self.take()
        if kind == "digit":
            return ZERO if value == "0" else ONE
        if kind == "sym":
            return Sym(value)
        if kind == "scalar":
            return Const(self.semiring.parse(value))
        if (kind, value) == ("op", "("):
            t = self.sum()
            if self.take() != ("op", ")"):
                self.pos -= 1
                self.fail("expected ')'")
            return t
        self.pos -= 1
        self.fail("expected an atom" if kind else "unexpected end of input")


def parse_term(text: str, semiring: Semiring) -> Term:
    """Parse ``text``; scalars inside ``[...]`` are read with ``semiring``."""
    return _Parser(text, semiring).parse()


# ---------------------------------------------------------------------------
# evaluation

def evaluate(t: Term, algebra, assignment: Mapping[str, object] | Callable[[str], object]):
    """Value of ``t`` in ``algebra`` with symbols interpreted by ``assignment``.

    ``algebra`` provides ``zero``, ``one``, ``add``, ``mul``, ``star`` and
    ``act``; constants are evaluated as ``act(k, one)`` and ``t⁺`` as
    ``t·t*``.  Shared subterms are evaluated once.
    """
    lookup = assignment.__getitem__ if isinstance(assignment, Mapping) else assignment
    values: Dict[int, object] = {}
    sym_cache: Dict[str, object] = {}
    for node in postorder(t):
        if isinstance(node, Sum):
            v = algebra.add(values[id(node.left)], values[id(node.right)])
        elif isinstance(node, Prod):
            v = algebra.mul(values[id(node.left)], values[id(node.right)])
        elif isinstance(node, Star):
            v = algebra.star(values[id(node.arg)])
        elif isinstance(node, Plus):
            a = values[id(node.arg)]
            v = algebra.mul(a, algebra.star(a))
        elif isinstance(node, Sym):
            if node.name not in sym_cache:
                sym_cache[node.name] = lookup(node.name)
            v = sym_cache[node.name]
        elif isinstance(node, Const):
            v = algebra.act(node.value, algebra.one)
        elif isinstance(node, One):
            v = algebra.one
        else:
            v = algebra.zero
        values[id(node)] = v
    return values[id(t)]


def eval_series(t: Term, semiring: Semiring, alphabet: Sequence[str] | None = None, max_len: int = 8,
                assignment: Mapping[str, object] | None = None):
    """The truncated series ``|t|`` under the canonical assignment (or ``assignment``)."""
    from .series import SeriesAlgebra

    alphabet = tuple(alphabet) if alphabet is not None else default_alphabet(t)
    alg = SeriesAlgebra(semiring, alphabet, max_len)
    if assignment is None:
        return evaluate(t, alg, lambda name: alg.letter(letter_for(name, alphabet)))
    return evaluate(t, alg, assignment)


def constant_term(t: Term, semiring: Semiring):
    """The coefficient of the empty word in ``|t|`` (every symbol is proper)."""
    return evaluate(t, semiring, lambda _name: semiring.zero)


# ---------------------------------------------------------------------------
# building terms

class TermAlgebra:
    """Terms as an algebra, so that matrix code can run symbolically.

    Only the unit and zero laws are applied while building
    (``0 + t = t``, ``0·t = 0``, ``1·t = t``); no other rewriting happens.
    """

    def __init__(self, semiring: Semiring | None = None):
        self.semiring = semiring
        self.zero = ZERO
        self.one = ONE

    def is_zero(self, t) -> bool:
        return isinstance(t, Zero)

    def add(self, s, t):
        if isinstance(s, Zero):
            return t
        if isinstance(t, Zero):
            return s
        return Sum(s, t)

    def mul(self, s, t):
        if isinstance(s, Zero) or isinstance(t, Zero):
            return ZERO
        if isinstance(s, One):
            return t
        if isinstance(t, One):
            return s
        return Prod(s, t)

    def star(self, t):
        if isinstance(t, Zero):
            return ONE
        return Star(t)

    def plus(self, t):
        if isinstance(t, Zero):
            return ZERO
        return Plus(t)

    def act(self, k, t):
        S = self.semiring
        if S is not None:
            if S.is_zero(k):
                return ZERO
            if S.is_one(k):
                return t
        if isinstance(t, Zero):
            return ZERO
        if isinstance(t, One):
            return Const(k)
        return Prod(Const(k), t)


def sum_balanced(terms: Sequence[Term]) -> Term:
    """``t1 + ... + tn`` as a balanced tree (``0`` for the empty sum)."""
    terms = [t for t in terms if not isinstance(t, Zero)]
    if not terms:
        return ZERO
    while len(terms) > 1:
        nxt = [Sum(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def sum_left(terms: Sequence[Term]) -> Term:
    """``t1 + ... + tn`` associated to the left, as the parser builds it."""
    terms = list(terms)
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out


def var(i: int) -> Sym:
    return Sym(f"x{i}")


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace symbols by terms (unmapped symbols are kept)."""
    out: Dict[int, Term] = {}
    for node in postorder(t):
        if isinstance(node, Sym):
            out[id(node)] = mapping.get(node.name, node)
        elif isinstance(node, (Sum, Prod)):
            out[id(node)] = type(node)(out[id(node.left)], out[id(node.right)])
        elif isinstance(node, (Star, Plus)):
            out[id(node)] = type(node)(out[id(node.arg)])
        else:
            out[id(node)] = node
    return out[id(t)]


def is_simple(t: Term) -> bool:
    """Built from symbols and ``0`` by sum, product, scalar action and plus.

    Scalar action ``[k].s`` appears as a product whose left factor is a
    constant; a bare constant (or ``1``, or a star) is not simple.
    """
    ok: Dict[int, bool] = {}
    for node in postorder(t):
        if isinstance(node, (Sym, Zero)):
            ok[id(node)] = True
        elif isinstance(node, Sum):
            ok[id(node)] = ok[id(node.left)] and ok[id(node.right)]
        elif isinstance(node, Prod):
            if isinstance(node.left, Const):
                ok[id(node)] = ok[id(node.right)]
            else:
                ok[id(node)] = ok[id(node.left)] and ok[id(node.right)]
        elif isinstance(node, Plus):
            ok[id(node)] = ok[id(node.arg)]
        else:
            ok[id(node)] = False
    return ok[id(t)]
