"""Command line interface and REPL.

Subcommands: eval, diff, int, nr, signexp, len, ord, bound, member, probe,
paths.  With no subcommand a REPL starts, supporting `let name = expr`
bindings.  Exit codes: 0 ok, 1 domain error, 2 syntax error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import calculus, core, fields, gonshor, ordinal as ordmod, printer, rank, signseq
from .errors import DomainError, ParseError, SurrealError
from .parser import parse_expression, parse_ordinal_text

VERBS = ("eval", "diff", "int", "nr", "signexp", "len", "ord", "bound",
         "member", "probe", "paths")


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="surreals",
        description="surreal-number kernel: exact transseries arithmetic, "
                    "derivation and anti-derivation")
    ap.add_argument("--terms", type=int,
                    default=int(os.environ.get("SURREALS_TERMS", "16")),
                    help="truncation order for inexact operations")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="verb")

    def add(verb, *args):
        p = sub.add_parser(verb)
        p.add_argument("expr", nargs="+")
        for name, kw in args:
            p.add_argument(name, **kw)
        return p

    add("eval")
    add("diff", ("--explain", dict(action="store_true")))
    add("int", ("--max-iter", dict(type=int, default=64)))
    add("nr")
    add("signexp")
    add("len")
    add("ord")
    add("bound")
    add("member", ("--level", dict(type=int, required=True)))
    add("probe", ("--level", dict(type=int, required=True)),
        ("--depth", dict(type=int, default=2)),
        ("--seed", dict(type=int, default=0)),
        ("--words", dict(type=int, default=16)))
    add("paths", ("--limit", dict(type=int, default=8)))
    return ap


def _emit(payload, as_json: bool, text: str):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def run_command(verb: str, raw: str, opts, env=None) -> None:
    as_json = opts.format == "json"
    terms = opts.terms
    core.config.DEFAULT_TERMS = terms

    if verb == "ord":
        o = parse_ordinal_text(raw)
        _emit({"ordinal": ordmod.format_ordinal(o)}, as_json,
              ordmod.format_ordinal(o))
        return

    if verb == "bound":
        parts = raw.split(None, 1)
        if not parts:
            raise ParseError("bound needs a kind")
        kind, rest = parts[0], parts[1] if len(parts) > 1 else ""
        args = [parse_ordinal_text(p) for p in rest.split(";") if p.strip()]
        table = {
            "hat": (1, ordmod.hat),
            "union": (2, ordmod.union_bound),
            "sum": (2, ordmod.sum_bound),
            "monoid": (1, ordmod.monoid_bound),
            "finseq": (1, ordmod.finseq_bound),
        }
        if kind not in table:
            raise ParseError("unknown bound kind %r" % kind)
        arity, fn = table[kind]
        if len(args) != arity:
            raise ParseError("bound %s takes %d ordinal(s), got %d "
                             "(separate with ';')" % (kind, arity, len(args)))
        out = fn(*args)
        _emit({"bound": ordmod.format_ordinal(out)}, as_json,
              ordmod.format_ordinal(out))
        return

    if verb == "signexp" and raw.lstrip()[:1] in "+-":
        s = signseq.parse_signseq(raw)
        x = signseq.to_normal_form(s)
        _emit(printer.series_json(x), as_json, printer.format_series(x))
        return

    x = parse_expression(raw, env=env, terms=terms)

    if verb == "eval":
        _emit(printer.series_json(x), as_json, printer.format_series(x))
    elif verb == "diff":
        rep = calculus.derive(x, terms=terms, collect_paths=opts.explain)
        if opts.explain and not as_json:
            print(printer.format_series(rep.value))
            print("paths used: %d" % rep.paths_used)
            for c, m, k in rep.contributions:
                print("  path k=%d: %s" % (
                    k, printer.format_series(core.from_term(c, m))))
            for name, bound, actual, ok in rep.bound_checks:
                print("  check %-34s %s  (%s <= %s)" % (
                    name, "ok" if ok else "VIOLATED",
                    ordmod.format_ordinal(actual), ordmod.format_ordinal(bound)))
        else:
            payload = printer.series_json(rep.value)
            if opts.explain:
                payload = {"value": payload, "paths_used": rep.paths_used,
                           "bound_checks": [
                               {"name": n, "bound": ordmod.format_ordinal(b),
                                "actual": ordmod.format_ordinal(a), "holds": ok}
                               for n, b, a, ok in rep.bound_checks]}
            _emit(payload, as_json, printer.format_series(rep.value))
    elif verb == "int":
        rep = calculus.integrate(x, max_iter=opts.max_iter, terms=terms)
        _emit({"value": printer.series_json(rep.value), "exact": rep.exact,
               "iterations": rep.iterations},
              as_json, printer.format_series(rep.value))
    elif verb == "nr":
        o = rank.NR(x)
        _emit({"nr": ordmod.format_ordinal(o)}, as_json, ordmod.format_ordinal(o))
    elif verb == "signexp":
        s = signseq.from_normal_form(x)
        _emit({"signexp": signseq.format_signseq(s)}, as_json,
              signseq.format_signseq(s))
    elif verb == "len":
        info = signseq.surreal_length(x)
        _emit({"kind": info.kind, "value": ordmod.format_ordinal(info.value)},
              as_json, "%s %s" % (info.kind, ordmod.format_ordinal(info.value)))
    elif verb == "member":
        wit = fields.gamma_member(x, fields.FragmentSpec(opts.level))
        payload = {"member": bool(wit), "nr": ordmod.format_ordinal(wit.nr),
                   "length": repr(wit.length)}
        _emit(payload, as_json,
              "%s (NR=%s, len=%r)" % ("member" if wit else "not a member",
                                      ordmod.format_ordinal(wit.nr), wit.length))
    elif verb == "probe":
        rep = fields.closure_probe(x, fields.FragmentSpec(opts.level),
                                   opts.depth, seed=opts.seed, words=opts.words)
        payload = {"passed": rep.passed, "skipped": rep.skipped,
                   "failures": rep.failures}
        _emit(payload, as_json,
              "passed=%d skipped=%d failures=%d%s" % (
                  rep.passed, rep.skipped, len(rep.failures),
                  "" if rep.ok else " " + "; ".join(
                      "%s: %s" % f for f in rep.failures)))
    elif verb == "paths":
        out = []
        for p in rank.paths(x, limit=opts.limit):
            steps = [printer.format_series(core.from_term(c, m))
                     for c, m in p.steps]
            out.append({"k": p.k, "steps": steps,
                        "indices": [ordmod.format_ordinal(i) for i in p.indices]})
        _emit(out, as_json,
              "\n".join("k=%d: %s" % (row["k"], " -> ".join(row["steps"]))
                        for row in out))
    else:
        raise ParseError("unknown verb %r" % verb)


def repl(opts) -> int:
    env = {}
    print("surreals repl; verbs: %s; `let name = expr`; ^D quits"
          % " ".join(VERBS))
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            print()
            return 0
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "let":
                name, _, expr = rest.partition("=")
                name = name.strip()
                if not name.isidentifier():
                    raise ParseError("bad binding name %r" % name)
                if name in env:
                    raise DomainError("bindings are immutable: %r" % name)
                env[name] = parse_expression(expr.strip(), env=env,
                                             terms=opts.terms)
                print(printer.format_series(env[name]))
            elif head in VERBS:
                run_command(head, rest, opts, env=env)
            else:
                run_command("eval", line, opts, env=env)
        except ParseError as e:
            print("syntax error: %s" % e, file=sys.stderr)
        except SurrealError as e:
            print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)


def main(argv=None) -> int:
    ap = _build_argparser()
    opts = ap.parse_args(argv)
    if opts.verb is None:
        return repl(opts)
    raw = " ".join(opts.expr)
    try:
        run_command(opts.verb, raw, opts)
    except ParseError as e:
        print("syntax error: %s" % e, file=sys.stderr)
        return 2
    except SurrealError as e:
        print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
