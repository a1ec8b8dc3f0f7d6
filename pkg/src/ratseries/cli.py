"""Command-line front end.

Exit status: 0 for success, equivalence or a passing check; 1 for
inequivalence or a failing check; 2 for usage and computational errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .automaton import WeightedAutomaton, behavior, compile_term, state_eliminate
from .conway import decide_equiv, normalize, refine_disjoint
from .equivalence import exact_equiv, series_witness, supports_exact
from .errors import RatSeriesError
from .groups import build_identity, check_identity, parse_group
from .laws import (check_atomistic, check_conway, check_equisubtractive, check_infinity_variety,
                   check_semiring_axioms, check_zerosum_free)
from .matrix import Matrix
from .semiring import INF, get_semiring
from .series import InfinityCollapseAlgebra, SeriesAlgebra
from .simulation import check_simulation, search_chain, search_simulation
from .terms import default_alphabet, parse_term, to_text


class _Done(Exception):
    def __init__(self, code):
        self.code = code


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--semiring", default=None, help="semiring id (bool, nat, int, rat, trop, nat-inf, nat-k:<k>, ...)")
    p.add_argument("--alphabet", default=None, help="alphabet letters, e.g. ab")
    p.add_argument("--maxlen", type=int, default=8, help="truncation length L")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200_000, help="search budget and state cap")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ratseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="coefficients of a term")
    p.add_argument("term")
    p = sub.add_parser("compile", parents=[common], help="expression to automaton JSON")
    p.add_argument("term")
    p = sub.add_parser("behavior", parents=[common], help="coefficients of an automaton file")
    p.add_argument("automaton")
    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of expressions or automata")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("simulate", parents=[common], help="check or search simulations")
    p.add_argument("mode", choices=("check", "search", "chain"))
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("witness", nargs="?", help="witness file for check")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--strong", action="store_true", help="only functional, dual functional, invertible diagonal links")
    p.add_argument("--pool", default=None, help="comma separated entry pool")
    p = sub.add_parser("normalize", parents=[common], help="split a term into constant, simple and infinite parts")
    p.add_argument("term")
    p.add_argument("--no-refine", action="store_true")
    p = sub.add_parser("group-identity", parents=[common], help="group identity of a finite group")
    p.add_argument("group", help="C<n>, V4 or a JSON Cayley table (inline or file)")
    p.add_argument("--check", default="bool,nat-k:3", help="comma separated semirings to check in")
    p.add_argument("--mode", choices=("exhaustive", "series"), default=None)
    p.add_argument("--samples", type=int, default=100)
    p = sub.add_parser("laws", parents=[common], help="run a law suite")
    p.add_argument("suite", choices=("axioms", "conway", "infinity", "equisubtractive", "atomistic", "zerosum"))
    p.add_argument("--series", action="store_true", help="check in the truncated series algebra")
    p.add_argument("--collapse", action="store_true", help="Boolean series with the collapsing action")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--bound", type=int, default=8, help="atom bound for the atomistic check")
    p.add_argument("--max-terms", type=int, default=3)
    return parser


def _emit(args, text: str, doc) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print(text)


def _read_source(arg: str):
    """An automaton (``.json`` path or inline JSON object) or ``None`` for an expression."""
    if arg.endswith(".json") and os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    if arg.lstrip().startswith("{"):
        return json.loads(arg)
    return None


def _series_doc(s):
    return s.to_json()


def cmd_eval(args):
    S = get_semiring(args.semiring or "nat")
    t = parse_term(args.term, S)
    alphabet = tuple(args.alphabet) if args.alphabet else default_alphabet(t)
    from .terms import eval_series

    s = eval_series(t, S, alphabet, args.maxlen)
    _emit(args, s.to_text(), _series_doc(s))
    return 0


def cmd_compile(args):
    S = get_semiring(args.semiring or "nat")
    t = parse_term(args.term, S)
    alphabet = tuple(args.alphabet) if args.alphabet else default_alphabet(t)
    A = compile_term(t, S, alphabet)
    print(json.dumps(A.to_json(), indent=2))
    return 0


def _load_automaton(path, semiring=None):
    doc = _read_source(path)
    if doc is None:
        raise RatSeriesError(f"{path} is not an automaton file")
    return WeightedAutomaton.from_json(doc, semiring)


def cmd_behavior(args):
    A = _load_automaton(args.automaton, get_semiring(args.semiring) if args.semiring else None)
    s = behavior(A, args.maxlen)
    _emit(args, s.to_text(), _series_doc(s))
    return 0


def cmd_equiv(args):
    docs = [_read_source(args.left), _read_source(args.right)]
    sid = args.semiring or next((d["semiring"] for d in docs if d is not None), "nat-inf")
    S = get_semiring(sid)
    sources = []
    for raw, doc in zip((args.left, args.right), docs):
        sources.append(WeightedAutomaton.from_json(doc, S) if doc is not None else parse_term(raw, S))
    terms = [x for x in sources if not isinstance(x, WeightedAutomaton)]
    if args.alphabet:
        alphabet = tuple(args.alphabet)
    else:
        auto = next((x.alphabet for x in sources if isinstance(x, WeightedAutomaton)), None)
        alphabet = auto or default_alphabet(*terms)

    def automaton(x):
        return x if isinstance(x, WeightedAutomaton) else compile_term(x, S, alphabet)

    verdict = None
    method = None
    if S.base is not None and S.contains(INF) and supports_exact(S.base):
        as_terms = [state_eliminate(x) if isinstance(x, WeightedAutomaton) else x for x in sources]
        verdict = decide_equiv(as_terms[0], as_terms[1], S, cap=args.budget)
        method = "exact"
    elif supports_exact(S):
        verdict = exact_equiv(automaton(sources[0]), automaton(sources[1]), cap=args.budget)
        method = "exact"
    if verdict is not None:
        text = verdict.describe()
        doc = {"verdict": "EQUIVALENT" if verdict.equivalent else "INEQUIVALENT", "method": method,
               "witness": verdict.witness, "semiring": S.id}
        _emit(args, text, doc)
        return 0 if verdict.equivalent else 1
    # no exact procedure: compare truncated behaviors
    s, t = (behavior(automaton(x), args.maxlen) for x in sources)
    w = series_witness(s, t)
    status = "EQUIVALENT" if w is None else "INEQUIVALENT"
    text = f"BOUNDED {status} up to L={args.maxlen}"
    if w is not None:
        text += f" witness={w or 'eps'}"
    doc = {"verdict": status, "method": "bounded", "bounded": True, "maxlen": args.maxlen, "witness": w,
           "semiring": S.id}
    _emit(args, text, doc)
    return 0 if w is None else 1


def _pool(args, S):
    if args.pool is None:
        return None
    return [S.parse(x) for x in args.pool.split(",")]


def _matrix_text(X):
    return "[" + ", ".join("[" + ", ".join(X.algebra.format(x) for x in r) + "]" for r in X.entries) + "]"


def cmd_simulate(args):
    S = get_semiring(args.semiring) if args.semiring else None
    A = _load_automaton(args.a, S)
    B = _load_automaton(args.b, S or A.semiring)
    S = A.semiring
    if args.mode == "check":
        if not args.witness:
            raise RatSeriesError("simulate check needs a witness file")
        with open(args.witness) as fh:
            doc = json.load(fh)
        X = Matrix(S, [[S.parse(str(x)) for x in r] for r in doc["X"]])
        res = check_simulation(A, B, X)
        flags = [f for f, v in res.flags.items() if v]
        text = ("SIMULATION" if res.ok else "NOT A SIMULATION") + f" flags={','.join(flags) or '-'}"
        if res.failures:
            text += f" failing={','.join(res.failures)}"
        _emit(args, text, {"ok": res.ok, "flags": flags, "failures": res.failures})
        return 0 if res.ok else 1
    if args.mode == "search":
        w = search_simulation(A, B, _pool(args, S), args.budget)
        if w is None:
            _emit(args, "no witness within budget", {"found": False})
            return 1
        _emit(args, f"FOUND X={_matrix_text(w.X)} flags={','.join(w.flag_list()) or '-'}",
              {"found": True, **w.to_json()})
        return 0
    chain = search_chain(A, B, args.depth, _pool(args, S), args.budget, args.strong)
    if chain is None:
        _emit(args, "no witness within budget", {"found": False})
        return 1
    lines = [f"CHAIN length={len(chain)}"]
    for i, (X, orient) in enumerate(chain.links):
        lines.append(f"  link {i}: {orient} X={_matrix_text(X)}")
    _emit(args, "\n".join(lines), {"found": True, "chain": chain.to_json()})
    return 0


def cmd_normalize(args):
    S = get_semiring(args.semiring or "nat-inf")
    t = parse_term(args.term, S)
    nf = normalize(t, S)
    if not args.no_refine:
        alphabet = tuple(args.alphabet) if args.alphabet else default_alphabet(t)
        nf = refine_disjoint(nf, alphabet, cap=min(args.budget, 1 << 16))
    doc = {"t_c": S.format(nf.const), "t_0": to_text(nf.simple), "t_inf": to_text(nf.infinite),
           "disjoint_supports": nf.disjoint_supports}
    text = "\n".join(f"{k}: {v}" for k, v in doc.items())
    _emit(args, text, doc)
    return 0


def cmd_group(args):
    source = args.group
    if source.endswith(".json") and os.path.exists(source):
        with open(source) as fh:
            source = fh.read()
    G = parse_group(source)
    identity = build_identity(G)
    lines = [f"group {G.name} of order {G.n}", f"lhs: {to_text(identity.lhs)}", f"rhs: {to_text(identity.rhs)}"]
    reports = []
    ok = True
    for sid in [x for x in args.check.split(",") if x]:
        S = get_semiring(sid)
        mode = args.mode or ("exhaustive" if S.finite else "series")
        rep = check_identity(identity, S, mode, samples=args.samples, max_len=min(args.maxlen, 6),
                             seed=args.seed)
        ok &= rep.holds
        lines.append(f"{sid}: {rep.to_text()}")
        reports.append({"semiring": sid, "mode": mode, "holds": rep.holds, "checked": rep.checked})
    _emit(args, "\n".join(lines), {"group": G.name, "order": G.n, "lhs": to_text(identity.lhs),
                                   "rhs": to_text(identity.rhs), "checks": reports})
    return 0 if ok else 1


def cmd_laws(args):
    S = get_semiring(args.semiring or "bool")
    alphabet = tuple(args.alphabet or "ab")
    if args.suite == "equisubtractive":
        rep = check_equisubtractive(S)
    elif args.suite == "atomistic":
        rep = check_atomistic(S, args.max_terms, args.bound)
    elif args.suite == "zerosum":
        rep = check_zerosum_free(S, args.samples, args.seed)
    else:
        if args.collapse:
            instance = InfinityCollapseAlgebra(S, alphabet, args.maxlen)
        elif args.series:
            instance = SeriesAlgebra(S, alphabet, args.maxlen)
        else:
            instance = S
        if args.suite == "axioms":
            rep = check_semiring_axioms(instance, args.samples, args.seed)
        elif args.suite == "conway":
            rep = check_conway(instance, args.samples, args.seed)
        else:
            rep = check_infinity_variety(instance, args.samples, args.seed)
    _emit(args, rep.to_text(), rep.to_json())
    return 0 if rep.passed else 1


COMMANDS = {
    "eval": cmd_eval,
    "compile": cmd_compile,
    "behavior": cmd_behavior,
    "equiv": cmd_equiv,
    "simulate": cmd_simulate,
    "normalize": cmd_normalize,
    "group-identity": cmd_group,
    "laws": cmd_laws,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.maxlen < 0:
        print("error: --maxlen must be non-negative", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except (RatSeriesError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
