"""Text and JSON rendering for kernel values.

The text form is re-parseable by the CLI grammar; atoms print as w,
kappa(s), nested ln(...), tail(s, n) and kblock(lo, hi).
"""

from __future__ import annotations

from fractions import Fraction

from .constants import Constant, format_constant
from .core import KappaBlock, KIndex, LogAtom, Mono, Series, TailSum
from .ordinal import format_ordinal


def format_kindex(s: KIndex) -> str:
    if s.sign == 0:
        return "0"
    return ("-" if s.sign < 0 else "") + format_ordinal(s.mag)


def format_atom(a: LogAtom) -> str:
    base = "w" if a.sigma.sign == 0 else "kappa(%s)" % format_kindex(a.sigma)
    lvl = a.level
    out = base
    if lvl > 0:
        out = "ln(%s)" % out if lvl == 1 else "lnN(%d, %s)" % (lvl, out)
    elif lvl < 0:
        for _ in range(-lvl):
            out = "exp(%s)" % out
    return out


def format_body(b) -> str:
    if isinstance(b, TailSum):
        return "tail(%s, %d)" % (format_kindex(b.sigma), b.start)
    if isinstance(b, KappaBlock):
        return "kblock(%s, %s)" % (format_ordinal(b.lo), format_ordinal(b.hi))
    return format_mono(b)


def format_mono(m: Mono) -> str:
    if m.atom is not None:
        return format_atom(m.atom)
    if m.is_unit:
        return "1"
    return "exp(%s)" % format_series(m.exponent)


def _format_coeff(c: Constant) -> str:
    s = format_constant(c)
    if c.logs or (c.q < 0 and (c.q != -1)):
        return "(%s)" % s if (" " in s or c.logs) else s
    return s


def format_series(x: Series) -> str:
    parts = []
    for c, b in x.terms:
        body = format_body(b)
        if isinstance(b, Mono) and b.is_unit:
            piece = format_constant(c) if not c.logs else "(%s)" % format_constant(c)
        elif c == Constant(1):
            piece = body
        elif c == Constant(-1):
            piece = "-%s" % body
        else:
            piece = "%s*%s" % (_format_coeff(c), body)
        parts.append(piece)
    if x.tail is not None:
        parts.append("O(%s)" % format_mono(x.tail))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _coeff_json(c: Constant):
    return {"q": str(c.q),
            "logs": {str(p): str(a) for p, a in c.logs.items()}}


def _mono_json(m: Mono):
    if m.atom is not None:
        return {"atom": {"kind": "log", "sigma": format_kindex(m.atom.sigma),
                         "level": m.atom.level}}
    if m.is_unit:
        return {"unit": True}
    return {"exponent": series_json(m.exponent)}


def _body_json(b):
    if isinstance(b, TailSum):
        return {"atom": {"kind": "tailsum", "sigma": format_kindex(b.sigma),
                         "start": b.start}}
    if isinstance(b, KappaBlock):
        return {"atom": {"kind": "kappablock", "lo": format_ordinal(b.lo),
                         "hi": format_ordinal(b.hi)}}
    return _mono_json(b)


def series_json(x: Series):
    return {
        "terms": [{"coeff": _coeff_json(c), "mono": _body_json(b)}
                  for c, b in x.terms],
        "tail": None if x.tail is None else _mono_json(x.tail),
        "exact": x.tail is None,
    }
