"""Law suites over semirings and series algebras, plus finite structural checks.

Every law is a function from its arguments to a ``(lhs, rhs)`` pair, so a
reported counterexample can be re-evaluated on its own with
:meth:`LawResult.reproduce`.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .errors import StarUndefined
from .semiring import INF, Semiring
from .series import InfinityCollapseAlgebra, SeriesAlgebra, TruncatedSeries

EXHAUSTIVE_LIMIT = 50_000


@dataclass
class Law:
    name: str
    arity: int
    equation: Callable
    kind: str = "element"  # or "scalar": arguments are scalars of the acting semiring

    def sides(self, *args):
        return self.equation(*args)


@dataclass
class LawResult:
    law: Law
    passed: bool
    checked: int
    skipped: int = 0
    counterexample: Optional[tuple] = None
    note: str = ""

    def reproduce(self) -> bool:
        """True when the stored counterexample still violates the law."""
        if self.counterexample is None:
            return False
        lhs, rhs = self.law.sides(*self.counterexample)
        return lhs != rhs

    def to_json(self) -> dict:
        doc = {"law": self.law.name, "passed": self.passed, "checked": self.checked, "skipped": self.skipped}
        if self.counterexample is not None:
            doc["counterexample"] = [_encode(x) for x in self.counterexample]
        if self.note:
            doc["note"] = self.note
        return doc


def _encode(x):
    if isinstance(x, TruncatedSeries):
        return x.to_text()
    if isinstance(x, tuple):
        return [_encode(y) for y in x]
    return str(x)


@dataclass
class LawSuiteReport:
    suite: str
    instance: str
    results: List[LawResult] = field(default_factory=list)
    samples: int = 0
    seed: int = 0
    mode: str = "sampled"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name) -> LawResult:
        for r in self.results:
            if r.law.name == name:
                return r
        raise KeyError(name)

    def to_text(self) -> str:
        head = (f"suite {self.suite} on {self.instance}: {'PASS' if self.passed else 'FAIL'} "
                f"({self.mode}, samples={self.samples}, seed={self.seed})")
        lines = [head]
        for r in self.results:
            line = f"  {'PASS' if r.passed else 'FAIL'} {r.law.name} checked={r.checked} skipped={r.skipped}"
            if r.counterexample is not None:
                line += " counterexample=" + json.dumps([_encode(x) for x in r.counterexample])
            if r.note:
                line += f" [{r.note}]"
            lines.append(line)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"suite": self.suite, "instance": self.instance, "passed": self.passed, "mode": self.mode,
                "samples": self.samples, "seed": self.seed, "laws": [r.to_json() for r in self.results]}


# ---------------------------------------------------------------------------
# driving a list of laws

def _sampler(instance, rng, proper):
    if isinstance(instance, SeriesAlgebra):
        from .random_gen import random_series

        return lambda: random_series(rng, instance, proper=proper)
    return lambda: instance.sample(rng)


def _scalar_sampler(scalars: Semiring, rng):
    extra = (scalars.zero, scalars.one) + ((INF,) if scalars.contains(INF) else ())
    return lambda: rng.choice(extra) if rng.random() < 0.3 else scalars.sample(rng)


def run_laws(suite: str, instance, laws: Sequence[Law], samples: int = 200, seed: int = 0,
             proper: bool = True, scalars: Semiring | None = None) -> LawSuiteReport:
    """Check each law exhaustively on a small finite carrier, otherwise on seeded samples."""
    finite = isinstance(instance, Semiring) and instance.finite
    report = LawSuiteReport(suite, getattr(instance, "id", str(instance)), samples=samples, seed=seed)
    modes = set()
    for law in laws:
        domain = scalars if law.kind == "scalar" else instance
        dom_finite = isinstance(domain, Semiring) and domain.finite
        if dom_finite and len(domain.elements) ** law.arity <= EXHAUSTIVE_LIMIT:
            cases = itertools.product(domain.elements, repeat=law.arity)
            modes.add("exhaustive")
        else:
            rng = random.Random(f"{seed}:{law.name}")
            draw = (_scalar_sampler(domain, rng) if law.kind == "scalar"
                    else _sampler(domain, rng, proper))
            cases = (tuple(draw() for _ in range(law.arity)) for _ in range(samples))
            modes.add("sampled")
        checked = skipped = 0
        bad = None
        for args in cases:
            try:
                lhs, rhs = law.sides(*args)
            except StarUndefined:
                skipped += 1
                continue
            checked += 1
            if lhs != rhs:
                bad = args
                break
        report.results.append(LawResult(law, bad is None, checked, skipped, bad))
    report.mode = "+".join(sorted(modes)) if modes else ("exhaustive" if finite else "sampled")
    return report


# ---------------------------------------------------------------------------
# suites

def semiring_axiom_laws(S) -> List[Law]:
    add, mul, zero, one = S.add, S.mul, S.zero, S.one
    return [
        Law("add-assoc", 3, lambda a, b, c: (add(add(a, b), c), add(a, add(b, c)))),
        Law("add-comm", 2, lambda a, b: (add(a, b), add(b, a))),
        Law("add-zero", 1, lambda a: (add(a, zero), a)),
        Law("mul-assoc", 3, lambda a, b, c: (mul(mul(a, b), c), mul(a, mul(b, c)))),
        Law("mul-one", 1, lambda a: ((mul(a, one), mul(one, a)), (a, a))),
        Law("distrib-left", 3, lambda a, b, c: (mul(a, add(b, c)), add(mul(a, b), mul(a, c)))),
        Law("distrib-right", 3, lambda a, b, c: (mul(add(a, b), c), add(mul(a, c), mul(b, c)))),
        Law("annihilation", 1, lambda a: ((mul(a, zero), mul(zero, a)), (zero, zero))),
    ]


def conway_laws(A) -> List[Law]:
    add, mul, star, one = A.add, A.mul, A.star, A.one
    return [
        Law("sum-star", 2, lambda a, b: (star(add(a, b)), mul(star(mul(star(a), b)), star(a)))),
        Law("product-star", 2, lambda a, b: (star(mul(a, b)), add(one, mul(mul(a, star(mul(b, a))), b)))),
        Law("fixed-point", 1, lambda a: (add(mul(a, star(a)), one), star(a))),
    ]


def check_semiring_axioms(instance, samples: int = 200, seed: int = 0) -> LawSuiteReport:
    return run_laws("semiring-axioms", instance, semiring_axiom_laws(instance), samples, seed, proper=False)


def check_conway(instance, samples: int = 200, seed: int = 0, proper: bool = True) -> LawSuiteReport:
    """Sum-star, product-star and ``aa* + 1 = a*`` wherever the stars are defined."""
    return run_laws("conway", instance, conway_laws(instance), samples, seed, proper=proper)


def infinity_laws(A, scalars: Semiring, w_member: bool) -> List[Law]:
    add, mul, star, act, one = A.add, A.mul, A.star, A.act, A.one
    laws = [
        Law("const-star", 1, lambda k: (star(act(k, one)), act(scalars.star(k), one)), kind="scalar"),
        Law("const-plus", 1, lambda k: (_plus(A, act(k, one)), act(scalars.plus(k), one)), kind="scalar"),
        Law("inf-plus", 1, lambda a: (_plus(A, act(INF, a)), act(INF, _plus(A, a)))),
        Law("inf-star", 1, lambda a: (act(INF, star(act(INF, a))), act(INF, star(a)))),
    ]
    if w_member:
        laws += [
            Law("inf-unit", 0, lambda: (act(INF, one), one)),
            Law("unit-plus", 0, lambda: (_plus(A, one), one)),
            Law("unit-star", 0, lambda: (star(one), one)),
        ]
    return laws


def _plus(A, a):
    return A.mul(a, A.star(a))


def check_infinity_variety(instance, samples: int = 200, seed: int = 0, w_member: bool | None = None,
                           proper: bool = False) -> LawSuiteReport:
    """Laws of series over an infinity extension; ``∞e = e`` only for collapsing instances."""
    if isinstance(instance, InfinityCollapseAlgebra):
        scalars = instance.scalars
        w_member = True if w_member is None else w_member
    else:
        scalars = instance.semiring if isinstance(instance, SeriesAlgebra) else instance
        w_member = bool(w_member)
    if not scalars.contains(INF):
        raise ValueError(f"{scalars.id} has no infinity element")
    return run_laws("infinity-variety", instance, infinity_laws(instance, scalars, w_member), samples,
                    seed, proper=proper, scalars=scalars)


def check_zerosum_free(S: Semiring, samples: int = 200, seed: int = 0) -> LawSuiteReport:
    def law(a, b):
        violated = S.is_zero(S.add(a, b)) and not (S.is_zero(a) and S.is_zero(b))
        return (violated, False)

    return run_laws("zerosum-free", S, [Law("zerosum-free", 2, law)], samples, seed, proper=False)


# ---------------------------------------------------------------------------
# finite structural predicates

def _require_finite(S: Semiring):
    if not S.finite:
        raise ValueError(f"{S.id} does not have a finite carrier")


def equisubtractive_split(S: Semiring, x, y, z, u):
    """Some ``(a, b, c, d)`` with ``x = a+b, y = c+d, z = a+c, u = b+d``, or ``None``."""
    E = S.elements
    add = S.add
    for a, b in itertools.product(E, repeat=2):
        if add(a, b) != x:
            continue
        for c in E:
            if add(a, c) != z:
                continue
            for d in E:
                if add(c, d) == y and add(b, d) == u:
                    return (a, b, c, d)
    return None


def check_equisubtractive(S: Semiring) -> LawSuiteReport:
    """Every ``x + y = z + u`` has a common refinement ``a, b, c, d``; exhaustive."""
    _require_finite(S)
    checked = 0
    bad = None
    for x, y, z, u in itertools.product(S.elements, repeat=4):
        if S.add(x, y) != S.add(z, u):
            continue
        checked += 1
        if equisubtractive_split(S, x, y, z, u) is None:
            bad = (x, y, z, u)
            break

    def sides(x, y, z, u):
        return (equisubtractive_split(S, x, y, z, u) is not None, True)

    law = Law("equisubtractive", 4, sides)
    report = LawSuiteReport("equisubtractive", S.id, mode="exhaustive", samples=checked)
    report.results.append(LawResult(law, bad is None, checked, 0, bad))
    return report


def transport_matrix(S: Semiring, xs: Sequence, ys: Sequence, bound: int | None = None):
    """An ``m×n`` matrix with row sums ``xs`` and column sums ``ys`` using the fewest nonzero cells.

    Its nonzero cells are the atoms ``z_ℓ`` of a common refinement, with
    ``I_i`` the cells of row ``i`` and ``J_j`` those of column ``j``.
    Returns ``None`` if no such matrix has at most ``bound`` nonzero cells.
    """
    E = S.elements
    n = len(ys)
    by_sum = {}
    for row in itertools.product(E, repeat=n):
        by_sum.setdefault(S.sum(row), []).append(row)
    zero_cols = tuple([S.zero] * n)
    # best[colsums] = (nonzero count, rows so far)
    best = {zero_cols: (0, ())}
    for x in xs:
        nxt = {}
        for cols, (count, rows) in best.items():
            for row in by_sum.get(x, ()):
                new_cols = tuple(S.add(c, r) for c, r in zip(cols, row))
                new_count = count + sum(1 for r in row if not S.is_zero(r))
                if bound is not None and new_count > bound:
                    continue
                if new_cols not in nxt or new_count < nxt[new_cols][0]:
                    nxt[new_cols] = (new_count, rows + (row,))
        best = nxt
    hit = best.get(tuple(ys))
    return None if hit is None else [list(r) for r in hit[1]]


def check_atomistic(S: Semiring, max_len: int = 3, bound: int = 8) -> LawSuiteReport:
    """Equal sums of up to ``max_len`` terms have a common refinement into at most ``bound`` atoms."""
    _require_finite(S)
    checked = 0
    bad = None
    for m in range(1, max_len + 1):
        for n in range(1, max_len + 1):
            sums_x = {}
            for xs in itertools.product(S.elements, repeat=m):
                sums_x.setdefault(S.sum(xs), []).append(xs)
            for ys in itertools.product(S.elements, repeat=n):
                for xs in sums_x.get(S.sum(ys), ()):
                    checked += 1
                    if transport_matrix(S, xs, ys, bound) is None:
                        bad = (xs, ys)
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break

    def sides(xs, ys):
        return (transport_matrix(S, xs, ys, bound) is not None, True)

    law = Law("atomistic", 2, sides)
    report = LawSuiteReport("atomistic", S.id, mode="exhaustive", samples=checked)
    report.results.append(LawResult(law, bad is None, checked, 0, bad,
                                    note=f"holds within bound k <= {bound}, m, n <= {max_len}"))
    return report


def equisubtractive_via_atomistic(S: Semiring, bound: int = 8) -> LawSuiteReport:
    """Derive every equisubtractive split from a 2×2 atomistic refinement.

    With cells ``[[a, b], [c, d]]`` of the refinement of ``(x, y)`` against
    ``(z, u)`` one gets ``x = a+b``, ``y = c+d``, ``z = a+c``, ``u = b+d``.
    """
    _require_finite(S)
    checked = 0
    bad = None
    add = S.add

    def derived(x, y, z, u):
        T = transport_matrix(S, (x, y), (z, u), bound)
        if T is None:
            return None
        (a, b), (c, d) = T
        if (add(a, b), add(c, d), add(a, c), add(b, d)) != (x, y, z, u):
            return None
        return (a, b, c, d)

    for x, y, z, u in itertools.product(S.elements, repeat=4):
        if add(x, y) != add(z, u):
            continue
        checked += 1
        if derived(x, y, z, u) is None:
            bad = (x, y, z, u)
            break
    law = Law("equisubtractive-from-atomistic", 4, lambda x, y, z, u: (derived(x, y, z, u) is not None, True))
    report = LawSuiteReport("equisubtractive-from-atomistic", S.id, mode="exhaustive", samples=checked)
    report.results.append(LawResult(law, bad is None, checked, 0, bad))
    return report
