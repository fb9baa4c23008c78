"""Command line front end.

Exit status: 0 yes/success, 1 no, 2 unknown (budget exhausted), 3 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automata, eraser, fim, freegroup, stephen, transducers
from .words import LATIN, Alphabet, Word, WordSyntaxError

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_alphabet(spec: str) -> Alphabet:
    """``alphabet: a b``, ``a b``, ``a,b`` or ``ab`` (one letter per name)."""
    spec = spec.strip()
    if spec.startswith("alphabet:"):
        return Alphabet.parse_declaration(spec)
    if "," in spec:
        return Alphabet([x.strip() for x in spec.split(",") if x.strip()])
    if any(ch.isspace() for ch in spec):
        return Alphabet(spec.split())
    return Alphabet(list(spec))


def _support_alphabet(text: str) -> Alphabet:
    w = LATIN.parse(text)
    return Alphabet([LATIN.names[g] for g in sorted(w.generators())])


class Context:
    def __init__(self, args):
        self.args = args
        self.json = getattr(args, "json", False)
        self.dot = getattr(args, "dot", None)
        spec = getattr(args, "alphabet", None)
        self.alphabet = parse_alphabet(spec) if spec else None
        n = getattr(args, "budget", None)
        self.budget = stephen.Budget(max_iterations=n) if n is not None else stephen.DEFAULT_BUDGET

    def alphabet_for_word(self, text: str) -> Alphabet:
        return self.alphabet or _support_alphabet(text)

    def alphabet_of_size(self, n: int) -> Alphabet:
        if self.alphabet is not None:
            if len(self.alphabet) != n:
                raise UsageError(f"expected {len(self.alphabet)} components, got {n}")
            return self.alphabet
        return Alphabet.standard(n)

    def word(self, text: str, alphabet: Alphabet | None = None) -> Word:
        return (alphabet or self.alphabet or LATIN).parse(text)

    def write_dot(self, A: automata.InvAutomaton, alphabet: Alphabet | None):
        if self.dot:
            Path(self.dot).write_text(automata.to_dot(A, alphabet))


def _answer(value) -> object:
    if value is stephen.UNKNOWN:
        return "unknown"
    return value


def _code(value) -> int:
    if value is stephen.UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_YES if value else EXIT_NO


def _yes_no(value) -> str:
    if value is stephen.UNKNOWN:
        return "UNKNOWN"
    return "YES" if value else "NO"


def emit(ctx: Context, payload: dict, lines: list[str]):
    if ctx.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


# fragile


def cmd_fragile_check(ctx, args):
    A = ctx.alphabet_for_word(args.word)
    w = A.parse(args.word)
    ans = freegroup.is_fragile(w, A) if len(A) else False
    emit(ctx, {"answer": ans, "alphabet": list(A)}, [_yes_no(ans)])
    return _code(ans)


def cmd_fragile_image(ctx, args):
    A = ctx.alphabet_for_word(args.word)
    if len(A) < 2:
        raise UsageError("the eraser image needs an alphabet of at least two letters")
    t = freegroup.eraser_image(A.parse(args.word), A)
    comps = t.format()
    emit(ctx, {"alphabet": list(A), "components": comps}, [" ".join(comps)])
    return EXIT_YES


def _free_tuple(ctx, texts) -> freegroup.EraserTuple:
    A = ctx.alphabet_of_size(len(texts))
    return freegroup.EraserTuple(A, tuple(A.parse(x) for x in texts))


def cmd_fragile_in_image(ctx, args):
    t = _free_tuple(ctx, args.components)
    ans = freegroup.in_image(t)
    payload = {"answer": ans}
    lines = [_yes_no(ans)]
    if ans:
        w = t.alphabet.format(freegroup.preimage(t))
        payload["preimage"] = w
        lines.append(w)
    emit(ctx, payload, lines)
    return _code(ans)


def cmd_fragile_preimage(ctx, args):
    t = _free_tuple(ctx, args.components)
    try:
        w = freegroup.preimage(t)
    except freegroup.NotInImage as exc:
        emit(ctx, {"answer": False, "error": str(exc)}, [f"NO: {exc}"])
        return EXIT_NO
    text = t.alphabet.format(w)
    emit(ctx, {"answer": True, "preimage": text}, [text])
    return EXIT_YES


def cmd_fragile_commutator(ctx, args):
    A = ctx.alphabet_of_size(args.n) if ctx.alphabet else Alphabet.standard(args.n)
    c = freegroup.nested_commutator(A)
    text = A.format(c)
    emit(ctx, {"length": len(c), "word": text}, [text])
    return EXIT_YES


# fim


def cmd_fim_equal(ctx, args):
    u, v = ctx.word(args.u), ctx.word(args.v)
    ans = fim.fim_equal(u, v)
    emit(ctx, {"answer": ans}, [_yes_no(ans)])
    return _code(ans)


def cmd_fim_factors(ctx, args):
    A = ctx.alphabet or LATIN
    u = A.parse(args.u)
    elems = [A.format(x.word()) for x in fim.sorted_elements(fim.factors(u))]
    emit(ctx, {"count": len(elems), "factors": elems}, [f"{len(elems)} factors"] + elems)
    return EXIT_YES


def cmd_fim_member(ctx, args):
    A = ctx.alphabet or LATIN
    u = A.parse(args.u)
    L = fim.NFA.from_json(Path(args.L).read_text(), A)
    ans = fim.rational_membership(u, L)
    emit(ctx, {"answer": ans}, [_yes_no(ans)])
    return _code(ans)


def cmd_fim_covers(ctx, args):
    A = ctx.alphabet or LATIN
    e = A.parse(args.e)
    try:
        covers = fim.covering_idempotents(e)
    except fim.NotIdempotent as exc:
        raise UsageError(str(exc)) from None
    words = [A.format(x.word()) for x in fim.sorted_elements(covers)]
    emit(ctx, {"count": len(words), "covers": words}, [f"{len(words)} covering idempotents"] + words)
    return EXIT_YES


# stephen


def _presentation(path: str) -> stephen.Presentation:
    return stephen.Presentation.from_file(path)


def cmd_stephen_closure(ctx, args):
    P = _presentation(args.p)
    w = P.alphabet.parse(args.w)
    res = stephen.closure(w, P, ctx.budget)
    ctx.write_dot(res.automaton, P.alphabet)
    payload = {
        "status": res.status,
        "iterations": res.iterations,
        "states": res.automaton.n_states,
        "state_counts": res.state_counts,
        "answer": res.converged if res.converged else "unknown",
    }
    if res.converged:
        payload["automaton"] = automata.to_json(res.automaton, P.alphabet)
    lines = [f"{res.status} after {res.iterations} iterations, {res.automaton.n_states} states"]
    emit(ctx, payload, lines)
    return EXIT_YES if res.converged else EXIT_UNKNOWN


def cmd_stephen_wp(ctx, args):
    P = _presentation(args.p)
    ans = stephen.word_problem(P.alphabet.parse(args.u), P.alphabet.parse(args.v), P, ctx.budget)
    emit(ctx, {"answer": _answer(ans)}, [_yes_no(ans)])
    return _code(ans)


def cmd_stephen_order(ctx, args):
    P = _presentation(args.p)
    ans = stephen.natural_order(P.alphabet.parse(args.u), P.alphabet.parse(args.v), P, ctx.budget)
    emit(ctx, {"answer": _answer(ans)}, [_yes_no(ans)])
    return _code(ans)


# eraser


def _optional_presentation(ctx, args, n: int | None = None) -> stephen.Presentation:
    if args.p:
        P = _presentation(args.p)
        if n is not None and len(P.alphabet) != n:
            raise UsageError(f"presentation has {len(P.alphabet)} generators but {n} components were given")
        return P
    return stephen.Presentation.free(ctx.alphabet_of_size(n) if n is not None else ctx.alphabet or LATIN)


def cmd_eraser_image(ctx, args):
    if args.p:
        P = _presentation(args.p)
    else:
        P = stephen.Presentation.free(ctx.alphabet_for_word(args.w))
    t = eraser.eraser_image_inv(P.alphabet.parse(args.w), P)
    comps = t.format()
    emit(ctx, {"alphabet": list(P.alphabet), "components": comps}, [" ".join(comps)])
    return EXIT_YES


def _inv_tuple(P: stephen.Presentation, texts) -> eraser.InvEraserTuple:
    return eraser.InvEraserTuple(P.alphabet, tuple(P.alphabet.parse(x) for x in texts))


def cmd_eraser_member(ctx, args):
    P = _optional_presentation(ctx, args, len(args.components))
    t = _inv_tuple(P, args.components)
    if P.is_free:
        ans = eraser.image_membership_fim(t)
        status = "decided"
    else:
        ans = eraser.image_membership_presented(t, P, ctx.budget)
        status = "budget" if ans is stephen.UNKNOWN else "decided"
    payload = {"answer": _answer(ans), "status": status}
    lines = [_yes_no(ans)]
    if ans is True and P.is_free:
        w = P.alphabet.format(eraser.witness(t))
        payload["witness"] = w
        lines.append(w)
    emit(ctx, payload, lines)
    return _code(ans)


def cmd_eraser_witness(ctx, args):
    A = ctx.alphabet_of_size(len(args.components))
    t = eraser.InvEraserTuple(A, tuple(A.parse(x) for x in args.components))
    try:
        w = eraser.witness(t)
    except eraser.NotInImage as exc:
        emit(ctx, {"answer": False, "status": "decided", "error": str(exc)}, [f"NO: {exc}"])
        return EXIT_NO
    text = A.format(w)
    emit(ctx, {"answer": True, "status": "decided", "witness": text}, [text])
    return EXIT_YES


def cmd_eraser_kernel(ctx, args):
    A = ctx.alphabet_for_word(args.w)
    ans = eraser.in_kernel_K(A.parse(args.w), A)
    emit(ctx, {"answer": ans, "alphabet": list(A)}, [_yes_no(ans)])
    return _code(ans)


# transducers


def cmd_td_act(ctx, args):
    t = transducers.Transducer.from_file(args.t)
    out = t.format_input(transducers.act(t, t.parse_states(args.w), t.parse_input(args.u)))
    emit(ctx, {"output": out}, [out])
    return EXIT_YES


def cmd_td_extend(ctx, args):
    t = transducers.extend_with_sink(transducers.Transducer.from_file(args.t))
    text = json.dumps(t.to_json(), indent=2, sort_keys=True) + "\n"
    if args.o:
        Path(args.o).write_text(text)
        emit(ctx, {"written": args.o, "states": t.n_states}, [f"wrote {args.o}"])
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_td_relation(ctx, args):
    t = transducers.Transducer.from_file(args.t)
    w = t.parse_states(args.w)
    ans = transducers.is_relation_bounded(t, w, args.d)
    payload = {"answer": ans, "depth": args.d}
    lines = [_yes_no(ans)]
    if ans:
        fr = transducers.fragile_relation_check(t, w, args.d)
        payload["fragile_over_support"] = fr
        lines.append(f"fragile over support: {'yes' if fr else 'no'}")
    emit(ctx, payload, lines)
    return _code(ans)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--dot", metavar="PATH", default=argparse.SUPPRESS, help="write an automaton as DOT")
    common.add_argument("--budget", type=int, metavar="N", default=argparse.SUPPRESS,
                        help="closure iteration budget")
    common.add_argument("--alphabet", metavar="SPEC", default=argparse.SUPPRESS,
                        help="generator names, e.g. 'a b c' or 'abc'")

    parser = _Parser(prog="fragwords", parents=[common],
                     description="Fragile words, Munn trees, Stephen closure and the eraser morphism.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("fragile", help="free-group fragility and the eraser morphism")
    s = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaf(s, "check", cmd_fragile_check, "is the word fragile").add_argument("word")
    leaf(s, "image", cmd_fragile_image, "letter-deleted reductions").add_argument("word")
    leaf(s, "in-image", cmd_fragile_in_image, "is a tuple an eraser image").add_argument("components", nargs="+")
    leaf(s, "preimage", cmd_fragile_preimage, "a word with the given eraser image").add_argument("components", nargs="+")
    leaf(s, "commutator", cmd_fragile_commutator, "nested commutator").add_argument("-n", type=int, required=True)

    g = groups.add_parser("fim", help="free inverse monoid")
    s = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(s, "equal", cmd_fim_equal, "word problem")
    p.add_argument("u")
    p.add_argument("v")
    leaf(s, "factors", cmd_fim_factors, "factors of an element").add_argument("u")
    p = leaf(s, "member", cmd_fim_member, "rational subset membership")
    p.add_argument("-u", required=True)
    p.add_argument("-L", required=True, metavar="NFA_JSON")
    leaf(s, "covers", cmd_fim_covers, "covering idempotents").add_argument("e")

    g = groups.add_parser("stephen", help="presentations and Stephen closure")
    s = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(s, "closure", cmd_stephen_closure, "Schützenberger automaton of a word")
    p.add_argument("-p", required=True, metavar="FILE")
    p.add_argument("-w", required=True)
    for name, func, help_text in (("wp", cmd_stephen_wp, "word problem"),
                                  ("order", cmd_stephen_order, "is v >= u in the natural order")):
        p = leaf(s, name, func, help_text)
        p.add_argument("-p", required=True, metavar="FILE")
        p.add_argument("u")
        p.add_argument("v")

    g = groups.add_parser("eraser", help="eraser morphism on inverse monoids")
    s = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(s, "image", cmd_eraser_image, "eraser image of a word")
    p.add_argument("-p", metavar="FILE")
    p.add_argument("-w", required=True)
    p = leaf(s, "member", cmd_eraser_member, "is a tuple in the eraser image")
    p.add_argument("-p", metavar="FILE")
    p.add_argument("components", nargs="+")
    leaf(s, "witness", cmd_eraser_witness, "a preimage in the free inverse monoid").add_argument("components", nargs="+")
    leaf(s, "kernel", cmd_eraser_kernel, "kernel membership").add_argument("-w", required=True)

    g = groups.add_parser("td", help="invertible transducers")
    s = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(s, "act", cmd_td_act, "action of a state word")
    p.add_argument("-t", required=True, metavar="FILE")
    p.add_argument("-w", required=True)
    p.add_argument("-u", required=True)
    p = leaf(s, "extend", cmd_td_extend, "add state letters and a sink")
    p.add_argument("-t", required=True, metavar="FILE")
    p.add_argument("-o", metavar="FILE")
    p = leaf(s, "relation", cmd_td_relation, "bounded relation check")
    p.add_argument("-t", required=True, metavar="FILE")
    p.add_argument("-w", required=True)
    p.add_argument("-d", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = Context(args)
        return args.func(ctx, args)
    except (WordSyntaxError, UsageError, ValueError, KeyError, OSError, IndexError) as exc:
        print(f"fragwords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
