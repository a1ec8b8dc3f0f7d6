"""Semiring descriptors and the built-in exact semirings.

A :class:`Semiring` bundles the operations of a carrier together with a
partial star (guarded by ``star_domain``) and a few capability flags.  All
scalars are plain Python values: ``int``, :class:`fractions.Fraction` and
the :data:`INF` singleton.  Nothing here uses floating point.

Built-in descriptors are addressed by string id, see :func:`get_semiring`::

    bool, nat, int, rat, trop, nat-inf, nat-k:<k>, chain:<n>, zmod:<n>

and ``<id>-inf`` for the infinity extension of any positive built-in.
"""
from __future__ import annotations

import dataclasses
import functools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Tuple

from .errors import NotAUnit, NotPositive, ParseError, StarUndefined

Scalar = Any


class _Infinity:
    """The point at infinity.  An algebraic tag, never an overflow value."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __hash__(self):
        return hash("ratseries.inf")

    def __reduce__(self):
        return (_Infinity, ())

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


#: The distinguished infinite scalar, shared by ``nat-inf`` and ``trop``.
INF = _Infinity()


def _always(_x) -> bool:
    return True


@dataclass(frozen=True, eq=False)
class Semiring:
    """Descriptor of an exact semiring with an optional partial star.

    ``star_fn`` may assume its argument lies in ``star_domain``; callers go
    through :meth:`star`, which checks the domain first.
    """

    id: str
    add: Callable[[Scalar, Scalar], Scalar]
    mul: Callable[[Scalar, Scalar], Scalar]
    zero: Scalar
    one: Scalar
    star_fn: Callable[[Scalar], Scalar]
    star_domain: Callable[[Scalar], bool]
    contains: Callable[[Scalar], bool]
    parse_fn: Callable[[str], Scalar]
    format_fn: Callable[[Scalar], str]
    sampler: Callable[[random.Random], Scalar]
    commutative: bool = True
    idempotent: bool = False
    positive: bool = False
    total_star: bool = False
    elements: Optional[Tuple[Scalar, ...]] = None
    inverse_fn: Optional[Callable[[Scalar], Optional[Scalar]]] = None
    units_fn: Optional[Callable[[], Iterable[Scalar]]] = None
    base: Optional["Semiring"] = None

    def __repr__(self):
        return f"Semiring({self.id!r})"

    # -- arithmetic ---------------------------------------------------------
    def is_zero(self, x) -> bool:
        return x == self.zero

    def is_one(self, x) -> bool:
        return x == self.one

    def sum(self, xs: Iterable[Scalar]) -> Scalar:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs: Iterable[Scalar]) -> Scalar:
        acc = self.one
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def act(self, k, x):
        """Left action of the semiring on itself."""
        return self.mul(k, x)

    def star(self, a):
        if not self.star_domain(a):
            raise StarUndefined(f"star of {self.format(a)} is undefined in {self.id}")
        return self.star_fn(a)

    def plus(self, a):
        return self.mul(a, self.star(a))

    def inverse(self, a):
        inv = self.inverse_fn(a) if self.inverse_fn is not None else None
        if inv is None:
            if self.is_one(a):
                return self.one
            raise NotAUnit(f"{self.format(a)} is not a unit of {self.id}")
        return inv

    def is_unit(self, a) -> bool:
        try:
            self.inverse(a)
        except NotAUnit:
            return False
        return True

    def units(self) -> Iterable[Scalar]:
        if self.units_fn is not None:
            return tuple(self.units_fn())
        if self.elements is not None:
            return tuple(x for x in self.elements if self.is_unit(x))
        return (self.one,)

    @property
    def finite(self) -> bool:
        return self.elements is not None

    # -- text encoding -------------------------------------------------------
    def parse(self, text) -> Scalar:
        if not isinstance(text, str):
            text = str(text)
        try:
            value = self.parse_fn(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse {text!r} as a {self.id} scalar") from exc
        if not self.contains(value):
            raise ParseError(f"{text!r} is not an element of {self.id}")
        return value

    def format(self, x) -> str:
        return self.format_fn(x)

    def to_json(self, x):
        """JSON-friendly encoding: ints stay numbers, everything else is text."""
        if isinstance(x, int) and not isinstance(x, bool):
            return x
        return self.format(x)

    def sample(self, rng: random.Random) -> Scalar:
        return self.sampler(rng)

    def with_star(self, star_fn, star_domain=_always, id=None) -> "Semiring":
        """A copy of this descriptor with a different star (for law checks)."""
        return dataclasses.replace(
            self, star_fn=star_fn, star_domain=star_domain, id=id or self.id + "~star"
        )


# ---------------------------------------------------------------------------
# scalar encodings

def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _parse_int(text: str) -> int:
    return int(text)


_RAT_TEXT = re.compile(r"[+-]?\d+(/\d+)?")


def _parse_rat(text: str) -> Fraction:
    if not _RAT_TEXT.fullmatch(text):
        raise ValueError(text)
    return Fraction(text)


def _format_plain(x) -> str:
    if x is INF:
        return "inf"
    return str(x)


def _parse_bool(text: str) -> int:
    table = {"T": 1, "F": 0, "1": 1, "0": 0, "true": 1, "false": 0}
    if text not in table:
        raise ValueError(text)
    return table[text]


def _parse_ext(parse_base):
    def parse(text):
        if text in ("inf", "∞"):
            return INF
        return parse_base(text)

    return parse


# ---------------------------------------------------------------------------
# built-ins

def _bool_semiring() -> Semiring:
    return Semiring(
        id="bool",
        add=lambda a, b: a | b,
        mul=lambda a, b: a & b,
        zero=0,
        one=1,
        star_fn=lambda a: 1,
        star_domain=_always,
        contains=lambda x: x in (0, 1) and _is_int(x),
        parse_fn=_parse_bool,
        format_fn=_format_plain,
        sampler=lambda rng: rng.randint(0, 1),
        idempotent=True,
        positive=True,
        total_star=True,
        elements=(0, 1),
    )


def _nat_semiring() -> Semiring:
    return Semiring(
        id="nat",
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        zero=0,
        one=1,
        star_fn=lambda a: 1,
        star_domain=lambda a: a == 0,
        contains=lambda x: _is_int(x) and x >= 0,
        parse_fn=_parse_int,
        format_fn=_format_plain,
        sampler=lambda rng: rng.choice((0, 0, 1, 1, 2, 3)),
        positive=True,
    )


def _int_semiring() -> Semiring:
    return Semiring(
        id="int",
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        zero=0,
        one=1,
        star_fn=lambda a: 1,
        star_domain=lambda a: a == 0,
        contains=_is_int,
        parse_fn=_parse_int,
        format_fn=_format_plain,
        sampler=lambda rng: rng.choice((0, 0, 1, -1, 2, -2, 3)),
        inverse_fn=lambda a: a if a in (1, -1) else None,
        units_fn=lambda: (1, -1),
    )


_RAT_SAMPLES = tuple(
    Fraction(p, q) for p in range(-3, 4) for q in (1, 2, 3) if math.gcd(p, q) == 1
)
_RAT_UNITS = tuple(x for x in _RAT_SAMPLES if x != 0)


def _rat_semiring() -> Semiring:
    return Semiring(
        id="rat",
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        zero=Fraction(0),
        one=Fraction(1),
        star_fn=lambda a: 1 / (1 - Fraction(a)),
        star_domain=lambda a: a != 1,
        contains=lambda x: isinstance(x, Fraction) or _is_int(x),
        parse_fn=_parse_rat,
        format_fn=_format_plain,
        sampler=lambda rng: rng.choice(_RAT_SAMPLES),
        inverse_fn=lambda a: 1 / Fraction(a) if a != 0 else None,
        units_fn=lambda: _RAT_UNITS,
    )


def _trop_add(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return a if a <= b else b


def _trop_mul(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def _trop_semiring() -> Semiring:
    # (N ∪ {inf}, min, +, inf, 0); x* = min_n n·x = 0 for every x.
    return Semiring(
        id="trop",
        add=_trop_add,
        mul=_trop_mul,
        zero=INF,
        one=0,
        star_fn=lambda a: 0,
        star_domain=_always,
        contains=lambda x: x is INF or (_is_int(x) and x >= 0),
        parse_fn=_parse_ext(_parse_int),
        format_fn=_format_plain,
        sampler=lambda rng: rng.choice((INF, INF, 0, 1, 2, 3, 5)),
        idempotent=True,
        positive=True,
        total_star=True,
    )


def _nat_k_semiring(k: int) -> Semiring:
    if k < 2:
        raise ValueError("nat-k needs k >= 2")
    top = k - 1
    return Semiring(
        id=f"nat-k:{k}",
        add=lambda a, b: min(a + b, top),
        mul=lambda a, b: min(a * b, top),
        zero=0,
        one=1,
        star_fn=lambda a: 1 if a == 0 else top,
        star_domain=_always,
        contains=lambda x: _is_int(x) and 0 <= x <= top,
        parse_fn=_parse_int,
        format_fn=_format_plain,
        sampler=lambda rng: rng.randint(0, top),
        idempotent=(k == 2),
        positive=True,
        total_star=True,
        elements=tuple(range(k)),
    )


def _chain_semiring(n: int) -> Semiring:
    # the bounded distributive lattice 0 < 1 < ... < n-1
    if n < 2:
        raise ValueError("chain needs at least 2 elements")
    top = n - 1
    return Semiring(
        id=f"chain:{n}",
        add=max,
        mul=min,
        zero=0,
        one=top,
        star_fn=lambda a: top,
        star_domain=_always,
        contains=lambda x: _is_int(x) and 0 <= x <= top,
        parse_fn=_parse_int,
        format_fn=_format_plain,
        sampler=lambda rng: rng.randint(0, top),
        idempotent=True,
        positive=True,
        total_star=True,
        elements=tuple(range(n)),
    )


def _zmod_semiring(n: int) -> Semiring:
    if n < 2:
        raise ValueError("zmod needs n >= 2")

    def inverse(a):
        if math.gcd(a, n) != 1:
            return None
        return pow(a, -1, n)

    return Semiring(
        id=f"zmod:{n}",
        add=lambda a, b: (a + b) % n,
        mul=lambda a, b: (a * b) % n,
        zero=0,
        one=1 % n,
        star_fn=lambda a: inverse((1 - a) % n),
        star_domain=lambda a: math.gcd((1 - a) % n, n) == 1,
        contains=lambda x: _is_int(x) and 0 <= x < n,
        parse_fn=lambda text: int(text) % n,
        format_fn=_format_plain,
        sampler=lambda rng: rng.randrange(n),
        elements=tuple(range(n)),
        inverse_fn=inverse,
    )


def adjoin_infinity(S: Semiring) -> Semiring:
    """Return ``S∞``: ``S`` plus an absorbing point with the complete star.

    ``∞ + x = ∞``, ``y·∞ = ∞·y = ∞`` for ``y ≠ 0`` and ``0·∞ = 0``;
    ``0* = 1`` and ``x* = ∞`` otherwise.  Only positive semirings qualify.
    """
    if not S.positive:
        raise NotPositive(f"{S.id} is not positive; {S.id}∞ would not be a semiring")
    if S.contains(INF):
        raise ValueError(f"{S.id} already contains the infinity tag")
    zero, one = S.zero, S.one

    def add(a, b):
        if a is INF or b is INF:
            return INF
        return S.add(a, b)

    def mul(a, b):
        if a is INF:
            return zero if S.is_zero(b) else INF
        if b is INF:
            return zero if S.is_zero(a) else INF
        return S.mul(a, b)

    def sample(rng):
        return INF if rng.random() < 0.2 else S.sample(rng)

    elements = None if S.elements is None else S.elements + (INF,)
    return Semiring(
        id=S.id + "-inf",
        add=add,
        mul=mul,
        zero=zero,
        one=one,
        star_fn=lambda a: one if S.is_zero(a) else INF,
        star_domain=_always,
        contains=lambda x: x is INF or S.contains(x),
        parse_fn=_parse_ext(S.parse_fn),
        format_fn=_format_plain,
        sampler=sample,
        commutative=S.commutative,
        idempotent=S.idempotent,
        positive=True,
        total_star=True,
        elements=elements,
        inverse_fn=lambda a: None if a is INF else S.inverse(a) if S.is_unit(a) else None,
        units_fn=lambda: S.units(),
        base=S,
    )


@functools.lru_cache(maxsize=None)
def get_semiring(ident: str) -> Semiring:
    """Look up a built-in semiring by its string id."""
    ident = ident.strip()
    simple = {
        "bool": _bool_semiring,
        "nat": _nat_semiring,
        "int": _int_semiring,
        "rat": _rat_semiring,
        "trop": _trop_semiring,
    }
    if ident in simple:
        return simple[ident]()
    if ident.endswith("-inf"):
        return adjoin_infinity(get_semiring(ident[: -len("-inf")]))
    for prefix, factory in (("nat-k:", _nat_k_semiring), ("chain:", _chain_semiring),
                            ("zmod:", _zmod_semiring)):
        if ident.startswith(prefix):
            try:
                size = int(ident[len(prefix):])
            except ValueError:
                break
            return factory(size)
    raise ValueError(f"unknown semiring id {ident!r}")


BOOL = get_semiring("bool")
NAT = get_semiring("nat")
INT = get_semiring("int")
RAT = get_semiring("rat")
TROP = get_semiring("trop")
NAT_INF = get_semiring("nat-inf")


def semiring_star(S: Semiring, a):
    return S.star(a)


def scalar_inverse(S: Semiring, a):
    return S.inverse(a)


def same_semiring(S: Semiring, T: Semiring) -> bool:
    return S is T or S.id == T.id
