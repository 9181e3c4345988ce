"""Recursive-descent parser for the expression and ordinal grammars.

expr   := term (("+"|"-") term)*
term   := factor (("*"|"/") factor)*
factor := base ("^" rational)?
base   := rational | "w" | "kappa(" signed_ord ")" | "lam(" signed_ord ")"
        | "exp(" expr ")" | "ln(" expr ")" | "lnN(" nat "," expr ")"
        | "tail(" signed_ord "," nat ")" | "kblock(" ord "," ord ")"
        | "log(" nat ")" | "O(" expr ")" | "(" expr ")" | identifier

ord    := ord_product (("+") ord_product)*
ord_product := ord_atom ("^" ord_atom_or_paren)? ("*" nat)?
ord_atom := "w" | "eps(" ord ")" | nat | "(" ord ")"
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import core, ordinal as ordmod
from .constants import Constant
from .core import KappaBlock, KIndex, Series, TailSum
from .errors import ParseError, UnknownIdentifier
from .ordinal import Ordinal

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos and not text[pos:].strip():
                break
            if m.group(1):
                self.items.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.items.append(("name", m.group(2), m.start(2)))
            else:
                ch = m.group(3)
                if ch.strip():
                    self.items.append(("punct", ch, m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("eof", "", len(self.text))

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            raise ParseError("expected %s, found %r" % (value or kind, t[1]),
                             column=t[2])
        return t

    def try_punct(self, ch) -> bool:
        if self.peek()[:2] == ("punct", ch):
            self.next()
            return True
        return False

    def error(self, msg):
        raise ParseError(msg, column=self.peek()[2])


# ---------------------------------------------------------------------------
# ordinal grammar
# ---------------------------------------------------------------------------

def _parse_ord(tk: _Tokens) -> Ordinal:
    total = _parse_ord_product(tk)
    while tk.try_punct("+"):
        total = ordmod.ord_add(total, _parse_ord_product(tk))
    return total


def _parse_ord_atom(tk: _Tokens) -> Ordinal:
    kind, val, pos = tk.peek()
    if kind == "num":
        tk.next()
        return ordmod.from_int(int(val))
    if kind == "name" and val == "w":
        tk.next()
        return ordmod.OMEGA
    if kind == "name" and val == "eps":
        tk.next()
        tk.expect("punct", "(")
        inner = _parse_ord(tk)
        tk.expect("punct", ")")
        return ordmod.eps(inner)
    if kind == "punct" and val == "(":
        tk.next()
        inner = _parse_ord(tk)
        tk.expect("punct", ")")
        return inner
    tk.error("expected an ordinal atom")


def _parse_ord_product(tk: _Tokens) -> Ordinal:
    base = _parse_ord_atom(tk)
    if tk.try_punct("^"):
        e = _parse_ord_atom(tk)
        base = ordmod.ord_pow(base, e)
    if tk.try_punct("*"):
        n = tk.expect("num")
        base = ordmod.ord_mul(base, ordmod.from_int(int(n[1])))
    return base


def parse_ordinal_text(text: str) -> Ordinal:
    tk = _Tokens(text)
    out = _parse_ord(tk)
    if tk.peek()[0] != "eof":
        tk.error("trailing input in ordinal")
    return out


def _parse_signed_ord(tk: _Tokens) -> Tuple[int, Ordinal]:
    sign = 1
    if tk.try_punct("-"):
        sign = -1
    o = _parse_ord(tk)
    if o.is_zero:
        sign = 0
    return sign, o


def _signed_ord_to_kindex(sign: int, mag: Ordinal) -> KIndex:
    return KIndex(sign, mag)


# ---------------------------------------------------------------------------
# expression grammar
# ---------------------------------------------------------------------------

class ExprParser:
    def __init__(self, env: Optional[Dict[str, Series]] = None,
                 terms: Optional[int] = None):
        self.env = env if env is not None else {}
        self.terms = terms

    def parse(self, text: str) -> Series:
        tk = _Tokens(text)
        out = self._expr(tk)
        if tk.peek()[0] != "eof":
            tk.error("trailing input")
        return out

    def _expr(self, tk) -> Series:
        if tk.try_punct("-"):
            total = core.neg(self._term(tk))
        else:
            total = self._term(tk)
        while True:
            if tk.try_punct("+"):
                total = core.add(total, self._term(tk))
            elif tk.try_punct("-"):
                total = core.sub(total, self._term(tk))
            else:
                return total

    def _term(self, tk) -> Series:
        total = self._factor(tk)
        while True:
            if tk.try_punct("*"):
                total = core.mul(total, self._factor(tk))
            elif tk.try_punct("/"):
                total = core.div(total, self._factor(tk), terms=self.terms)
            else:
                return total

    def _factor(self, tk) -> Series:
        neg = tk.try_punct("-")
        base = self._base(tk)
        if tk.try_punct("^"):
            q = self._rational(tk)
            base = core.pow_rat(base, q, terms=self.terms)
        return core.neg(base) if neg else base

    def _rational(self, tk) -> Fraction:
        sign = -1 if tk.try_punct("-") else 1
        num = tk.expect("num")
        val = Fraction(int(num[1]))
        if tk.try_punct("/"):
            den = tk.expect("num")
            val = val / int(den[1])
        return sign * val

    def _base(self, tk) -> Series:
        kind, val, pos = tk.peek()
        if kind == "num":
            tk.next()
            q = Fraction(int(val))
            if tk.try_punct("/"):
                den = tk.expect("num")
                q = q / int(den[1])
            return core.from_rational(q)
        if kind == "punct" and val == "(":
            tk.next()
            inner = self._expr(tk)
            tk.expect("punct", ")")
            return inner
        if kind != "name":
            tk.error("expected a value")
        tk.next()
        if val == "w":
            return core.omega()
        if val in ("exp", "ln"):
            tk.expect("punct", "(")
            inner = self._expr(tk)
            tk.expect("punct", ")")
            fn = core.exp if val == "exp" else core.ln
            return fn(inner, terms=self.terms)
        if val == "lnN":
            tk.expect("punct", "(")
            n = int(tk.expect("num")[1])
            tk.expect("punct", ",")
            inner = self._expr(tk)
            tk.expect("punct", ")")
            return core.lnn(n, inner, terms=self.terms)
        if val == "kappa":
            tk.expect("punct", "(")
            sign, mag = _parse_signed_ord(tk)
            tk.expect("punct", ")")
            return core.kappa(_signed_ord_to_kindex(sign, mag))
        if val == "lam":
            tk.expect("punct", "(")
            sign, mag = _parse_signed_ord(tk)
            tk.expect("punct", ")")
            return core.lam(sign, mag)
        if val == "tail":
            tk.expect("punct", "(")
            sign, mag = _parse_signed_ord(tk)
            tk.expect("punct", ",")
            n = int(tk.expect("num")[1])
            tk.expect("punct", ")")
            return core.from_term(1, TailSum(_signed_ord_to_kindex(sign, mag), n))
        if val == "kblock":
            tk.expect("punct", "(")
            lo = _parse_ord(tk)
            tk.expect("punct", ",")
            hi = _parse_ord(tk)
            tk.expect("punct", ")")
            return core.from_term(1, KappaBlock(lo, hi))
        if val == "log":
            tk.expect("punct", "(")
            p = int(tk.expect("num")[1])
            tk.expect("punct", ")")
            return core.from_constant(Constant(0, {p: 1}))
        if val == "O":
            tk.expect("punct", "(")
            inner = self._expr(tk)
            tk.expect("punct", ")")
            if len(inner.terms) != 1 or not isinstance(inner.terms[0][1], core.Mono):
                tk.error("O(...) takes a single monomial")
            return Series((), tail=inner.terms[0][1])
        if val in self.env:
            return self.env[val]
        raise UnknownIdentifier("unknown identifier %r" % val, column=pos)


def parse_expression(text: str, env=None, terms: Optional[int] = None) -> Series:
    return ExprParser(env, terms).parse(text)
