"""Transseries kernel: truncated series over a monomial group exp(gamma).

A monomial is exp(gamma) for gamma an exact, purely infinite Series; towers
that bottom out in a log-atomic generator ln_j kappa_sigma collapse to an
atom.  Series carry a finite term list in strictly descending monomial order,
plus an optional tail marker Below(m) meaning every omitted term is strictly
smaller than m.  Two kinds of symbolic sum blocks keep values like
sum_{m>=N} ln_m kappa_sigma exact.

All values are immutable; the ambient truncation order for inexact
operations is config.DEFAULT_TERMS unless a call passes `terms=`.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import ordinal as ordmod
from .constants import Constant, as_constant
from .errors import (DivisionByZero, DomainError, ExpOfIrrationalConstant,
                     NonPositiveArgument, PowOfNonPositiveLeading,
                     TruncatedInput, UnsupportedIndex)
from .ordinal import Ordinal

LT, EQ, GT = -1, 0, 1
UNKNOWN = 2


class config:
    DEFAULT_TERMS = 16


def _terms_budget(terms: Optional[int]) -> int:
    t = config.DEFAULT_TERMS if terms is None else terms
    if t < 1:
        raise DomainError("precision budget must be >= 1")
    return t


# ---------------------------------------------------------------------------
# kappa-class indices and basis atoms
# ---------------------------------------------------------------------------

@functools.total_ordering
class KIndex:
    """Index sigma of a kappa-class: a signed ordinal with canonical zero."""

    __slots__ = ("sign", "mag")

    def __init__(self, sign: int, mag: Ordinal = ordmod.ZERO):
        if sign == 0 or mag.is_zero:
            sign, mag = 0, ordmod.ZERO
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        self.sign = sign
        self.mag = mag

    def __eq__(self, other):
        return (isinstance(other, KIndex) and self.sign == other.sign
                and self.mag == other.mag)

    def __lt__(self, other):
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign >= 0:
            return self.mag < other.mag
        return self.mag > other.mag

    def __hash__(self):
        return hash((self.sign, self.mag))

    def __repr__(self):
        if self.sign == 0:
            return "0"
        return ("-" if self.sign < 0 else "+") + str(self.mag)


K0 = KIndex(0)


def kindex(n) -> KIndex:
    """KIndex from an int or (sign, Ordinal) convenience input."""
    if isinstance(n, KIndex):
        return n
    if isinstance(n, int):
        return KIndex(0) if n == 0 else KIndex(1 if n > 0 else -1,
                                               ordmod.from_int(abs(n)))
    raise TypeError(n)


class LogAtom:
    """ln_level kappa_sigma; negative level means exp_{-level} kappa_sigma."""

    __slots__ = ("sigma", "level")

    def __init__(self, sigma: KIndex, level: int):
        self.sigma = sigma
        self.level = level

    def __eq__(self, other):
        return (isinstance(other, LogAtom) and self.sigma == other.sigma
                and self.level == other.level)

    def __hash__(self):
        return hash(("logatom", self.sigma, self.level))

    def cmp(self, other: "LogAtom") -> int:
        if self.sigma != other.sigma:
            return GT if self.sigma > other.sigma else LT
        if self.level != other.level:
            return GT if self.level < other.level else LT
        return EQ

    def __repr__(self):
        return "ln_%d k(%r)" % (self.level, self.sigma)


class TailSum:
    """sum_{m >= start} ln_m kappa_sigma, start >= 1."""

    __slots__ = ("sigma", "start")

    def __init__(self, sigma: KIndex, start: int):
        if start < 1:
            raise ValueError("TailSum start must be >= 1")
        self.sigma = sigma
        self.start = start

    def __eq__(self, other):
        return (isinstance(other, TailSum) and self.sigma == other.sigma
                and self.start == other.start)

    def __hash__(self):
        return hash(("tailsum", self.sigma, self.start))

    def head_atom(self) -> LogAtom:
        return LogAtom(self.sigma, self.start)

    def __repr__(self):
        return "tail(%r,%d)" % (self.sigma, self.start)


class KappaBlock:
    """sum over lo <= g < hi of sum_{m>=1} ln_m kappa_{-g}; spans >= 2 classes."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Ordinal, hi: Ordinal):
        if not lo < hi:
            raise ValueError("empty KappaBlock")
        self.lo = lo
        self.hi = hi

    def __eq__(self, other):
        return (isinstance(other, KappaBlock) and self.lo == other.lo
                and self.hi == other.hi)

    def __hash__(self):
        return hash(("kappablock", self.lo, self.hi))

    def head_atom(self) -> LogAtom:
        return LogAtom(_neg_kindex(self.lo), 1)

    def __repr__(self):
        return "kblock(%s,%s)" % (self.lo, self.hi)


def _neg_kindex(g: Ordinal) -> KIndex:
    return K0 if g.is_zero else KIndex(-1, g)


Block = Union[TailSum, KappaBlock]


class Mono:
    """Multiplicative monomial: a collapsed atom or exp(exponent)."""

    __slots__ = ("atom", "exponent", "_hash")

    def __init__(self, atom: Optional[LogAtom] = None,
                 exponent: Optional["Series"] = None):
        self.atom = atom
        self.exponent = exponent
        self._hash = None

    @property
    def is_unit(self) -> bool:
        return self.atom is None and self.exponent.is_zero

    def __eq__(self, other):
        if not isinstance(other, Mono):
            return NotImplemented
        return self.atom == other.atom and self.exponent == other.exponent

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.atom, self.exponent))
        return self._hash

    def __repr__(self):
        if self.atom is not None:
            return "Mono(%r)" % self.atom
        if self.is_unit:
            return "Mono(1)"
        return "Mono(exp(%r))" % self.exponent


Body = Union[Mono, TailSum, KappaBlock]
Term = Tuple[Constant, Body]


class Series:
    __slots__ = ("terms", "tail", "_hash")

    def __init__(self, terms: Tuple[Term, ...] = (), tail: Optional[Mono] = None):
        self.terms = terms
        self.tail = tail
        self._hash = None

    @property
    def exact(self) -> bool:
        return self.tail is None

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.tail is None

    def leading(self) -> Term:
        if not self.terms:
            raise DomainError("zero / fully truncated series has no leading term")
        return self.terms[0]

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.terms == other.terms and self.tail == other.tail

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.terms, self.tail))
        return self._hash

    def __repr__(self):
        from .printer import format_series
        return "<%s>" % format_series(self)


ZERO = Series()
UNIT = Mono(exponent=ZERO)


def make_mono(exponent: "Series") -> Mono:
    """exp(exponent), collapsing single coeff-1 atom towers to atoms."""
    if exponent.tail is not None:
        raise TruncatedInput("monomial exponent must be exact")
    if exponent.is_zero:
        return UNIT
    if len(exponent.terms) == 1:
        c, body = exponent.terms[0]
        if isinstance(body, Mono) and body.atom is not None and c == Constant(1):
            return Mono(atom=LogAtom(body.atom.sigma, body.atom.level - 1))
    for c, body in exponent.terms:
        if isinstance(body, Mono) and not _body_infinite(body):
            raise DomainError("monomial exponent must be purely infinite")
    return Mono(exponent=exponent)


def atom_mono(sigma, level: int) -> Mono:
    return Mono(atom=LogAtom(kindex(sigma), level))


def omega() -> Series:
    return from_term(Constant(1), atom_mono(0, 0))


def omega_pow(q) -> Series:
    """w^q for rational q, as exp(q ln w)."""
    q = Fraction(q)
    if q == 0:
        return from_rational(1)
    return from_term(Constant(1),
                     make_mono(from_term(Constant(q), atom_mono(0, 1))))


def ln_mono(m: Mono) -> Series:
    """ln of a monomial, always exact."""
    if m.atom is not None:
        return from_term(Constant(1), Mono(atom=LogAtom(m.atom.sigma,
                                                        m.atom.level + 1)))
    return m.exponent


def _body_head_mono(b: Body) -> Mono:
    if isinstance(b, Mono):
        return b
    return Mono(atom=b.head_atom())


def _body_infinite(b: Body) -> bool:
    if isinstance(b, (TailSum, KappaBlock)):
        return True
    if b.is_unit:
        return False
    if b.atom is not None:
        return True
    return series_sign(b.exponent) > 0


# ---------------------------------------------------------------------------
# monomial and series comparison
# ---------------------------------------------------------------------------

def cmp_mono(m1: Mono, m2: Mono) -> int:
    """Total order on exact monomials (exp is increasing, compare exponents)."""
    if m1 == m2:
        return EQ
    if m1.atom is not None and m2.atom is not None:
        return m1.atom.cmp(m2.atom)
    c = cmp_series(ln_mono(m1), ln_mono(m2))
    if c == UNKNOWN:
        raise TruncatedInput("cannot order monomials with truncated exponents")
    return c


def series_sign(s: Series) -> int:
    """Sign of an exact-enough series; 0 for the zero series."""
    if not s.terms:
        if s.tail is not None:
            raise TruncatedInput("sign of a fully truncated series")
        return 0
    return s.terms[0][0].sign()


def cmp_series(x: Series, y: Series) -> int:
    # structural identity only certifies equality for exact values
    if x.exact and y.exact and x == y:
        return EQ
    d = sub(x, y)
    if d.terms:
        return GT if d.terms[0][0].sign() > 0 else LT
    if d.tail is not None:
        return UNKNOWN
    return EQ


def cmp(x: Series, y: Series) -> int:
    """Public comparison: LT/EQ/GT, or UNKNOWN when truncation hides the sign."""
    return cmp_series(x, y)


# ---------------------------------------------------------------------------
# term-list normalization
# ---------------------------------------------------------------------------

def _atoms_of_prefix(sigma: KIndex, lo: int, hi: int) -> List[LogAtom]:
    return [LogAtom(sigma, m) for m in range(lo, hi)]


def _split_tailsum(ts: TailSum, new_start: int) -> Tuple[List[LogAtom], TailSum]:
    assert new_start >= ts.start
    return _atoms_of_prefix(ts.sigma, ts.start, new_start), TailSum(ts.sigma, new_start)


def _kappablock_pieces(kb: KappaBlock, cuts: Sequence[Ordinal]) -> List[Block]:
    """Split a block at the given class boundaries (ordinals inside [lo,hi))."""
    points = sorted({kb.lo, kb.hi, *[c for c in cuts if kb.lo <= c < kb.hi],
                     *[ordmod.ord_add(c, ordmod.ONE) for c in cuts
                       if kb.lo <= c < kb.hi]}, key=ordmod._SortKey)
    out: List[Block] = []
    for a, b in zip(points, points[1:]):
        if not a < b or b > kb.hi:
            continue
        if ordmod.ord_add(a, ordmod.ONE) == b:
            out.append(TailSum(_neg_kindex(a), 1))
        else:
            out.append(KappaBlock(a, b))
    return out


def _mono_split_level(ts: TailSum, m: Mono, depth_hint: int) -> Optional[int]:
    """Smallest M >= start with m > ln_M kappa_sigma, or None if m is below
    the entire tail (lower kappa-class)."""
    if kclass_of_mono(m) != ts.sigma:
        return None
    level = ts.start
    for _ in range(depth_hint + 8):
        if cmp_mono(m, Mono(atom=LogAtom(ts.sigma, level))) == GT:
            return level
        level += 1
    raise DomainError("could not locate monomial inside tail sum %r" % (ts,))


def _tower_depth_body(b: Body) -> int:
    if isinstance(b, (TailSum, KappaBlock)):
        return 1
    return _tower_depth_mono(b)


def _tower_depth_mono(m: Mono) -> int:
    if m.atom is not None:
        return 1 + abs(m.atom.level)
    if m.is_unit:
        return 0
    return 1 + max((_tower_depth_body(b) for _, b in m.exponent.terms), default=0)


def normalize_terms(entries: Iterable[Term]) -> Tuple[Term, ...]:
    entries = [(as_constant(c), b) for c, b in entries]
    entries = [(c, b) for c, b in entries if not c.is_zero]

    monos: List[Tuple[Constant, Mono]] = []
    tails: List[Tuple[Constant, TailSum]] = []
    blocks: List[Tuple[Constant, KappaBlock]] = []
    for c, b in entries:
        if isinstance(b, KappaBlock):
            if ordmod.ord_add(b.lo, ordmod.ONE) == b.hi:
                tails.append((c, TailSum(_neg_kindex(b.lo), 1)))
            else:
                blocks.append((c, b))
        elif isinstance(b, TailSum):
            tails.append((c, b))
        else:
            monos.append((c, b))

    # cut kappa blocks around every other entry's class
    if blocks:
        cuts = set()
        for _, ts in tails:
            if ts.sigma.sign <= 0:
                cuts.add(ts.sigma.mag)
        for _, m in monos:
            sig = kclass_of_mono(m) if _body_infinite(m) else None
            if sig is not None and sig.sign <= 0:
                cuts.add(sig.mag)
        for _, kb in blocks:
            cuts.add(kb.lo)
            cuts.add(kb.hi)
        new_blocks: List[Tuple[Constant, KappaBlock]] = []
        for c, kb in blocks:
            for piece in _kappablock_pieces(kb, sorted(cuts, key=ordmod._SortKey)):
                if isinstance(piece, TailSum):
                    tails.append((c, piece))
                else:
                    new_blocks.append((c, piece))
        blocks = new_blocks

    # align tail sums of the same class with each other, with atoms of that
    # class, and with exp-monomials sitting inside their range
    if tails:
        by_sigma = {}
        for c, ts in tails:
            by_sigma.setdefault(ts.sigma, []).append((c, ts))
        tails = []
        for sigma, group in by_sigma.items():
            start = max(ts.start for _, ts in group)
            for _, m in monos:
                if m.atom is not None and m.atom.sigma == sigma \
                        and m.atom.level >= start:
                    start = m.atom.level + 1
            depth_hint = max((_tower_depth_mono(m) for _, m in monos
                              if m.atom is None and not m.is_unit), default=0)
            for _, m in monos:
                if m.atom is None and not m.is_unit and _body_infinite(m):
                    probe = TailSum(sigma, start)
                    if cmp_mono(m, Mono(atom=probe.head_atom())) == LT:
                        lvl = _mono_split_level(probe, m, depth_hint)
                        if lvl is not None and lvl > start:
                            start = lvl
            for c, ts in group:
                pre, aligned = _split_tailsum(ts, start)
                for a in pre:
                    monos.append((c, Mono(atom=a)))
                tails.append((c, aligned))

    merged: dict = {}
    order: List[Body] = []
    for c, b in itertools.chain(monos, tails, blocks):
        if b not in merged:
            merged[b] = Constant(0)
            order.append(b)
        merged[b] = merged[b] + c

    live = [(merged[b], b) for b in order if not merged[b].is_zero]
    live.sort(key=functools.cmp_to_key(
        lambda t1, t2: cmp_mono(_body_head_mono(t1[1]), _body_head_mono(t2[1]))),
        reverse=True)

    # strict descent check between consecutive ranges
    for (c1, b1), (c2, b2) in zip(live, live[1:]):
        if cmp_mono(_body_head_mono(b1), _body_head_mono(b2)) != GT:
            raise DomainError("could not normalize overlapping terms %r / %r"
                              % (b1, b2))

    return _refuse(live)


def _refuse(live: List[Term]) -> Tuple[Term, ...]:
    """Re-absorb adjacent pieces into canonical blocks, right to left."""
    changed = True
    while changed:
        changed = False
        for i in range(len(live) - 2, -1, -1):
            c1, b1 = live[i]
            c2, b2 = live[i + 1]
            if c1 != c2:
                continue
            fused = _fuse(b1, b2)
            if fused is not None:
                live[i:i + 2] = [(c1, fused)]
                changed = True
    return tuple(live)


def _fuse(b1: Body, b2: Body) -> Optional[Body]:
    if isinstance(b1, Mono) and b1.atom is not None and isinstance(b2, TailSum):
        a = b1.atom
        if a.sigma == b2.sigma and a.level + 1 == b2.start and a.level >= 1:
            return TailSum(a.sigma, a.level)
    if isinstance(b1, TailSum) and b1.start == 1 and b1.sigma.sign <= 0:
        g = b1.sigma.mag
        if isinstance(b2, KappaBlock) and b2.lo == ordmod.ord_add(g, ordmod.ONE):
            return KappaBlock(g, b2.hi)
        if isinstance(b2, TailSum) and b2.start == 1 and b2.sigma.sign <= 0 \
                and b2.sigma.mag == ordmod.ord_add(g, ordmod.ONE):
            return KappaBlock(g, ordmod.ord_add(b2.sigma.mag, ordmod.ONE))
    if isinstance(b1, KappaBlock):
        if isinstance(b2, KappaBlock) and b2.lo == b1.hi:
            return KappaBlock(b1.lo, b2.hi)
        if isinstance(b2, TailSum) and b2.start == 1 and b2.sigma.sign <= 0 \
                and b2.sigma.mag == b1.hi:
            return KappaBlock(b1.lo, ordmod.ord_add(b1.hi, ordmod.ONE))
    return None


def _truncate_entry(c: Constant, b: Body, marker: Mono) -> List[Term]:
    """Keep only the part of the entry whose monomials are >= marker."""
    head = _body_head_mono(b)
    if cmp_mono(head, marker) == LT:
        return []
    if isinstance(b, Mono):
        return [(c, b)]
    # block straddling the marker: keep atoms >= marker
    out: List[Term] = []
    if isinstance(b, TailSum):
        lvl = b.start
        for _ in range(10_000):
            a = Mono(atom=LogAtom(b.sigma, lvl))
            if cmp_mono(a, marker) == LT:
                return out
            out.append((c, a))
            lvl += 1
        raise DomainError("marker too deep inside tail sum")
    # KappaBlock: marker chops within some class; split classwise
    mk = kclass_of_mono(marker) if _body_infinite(marker) else None
    cuts = [mk.mag] if (mk is not None and mk.sign <= 0) else []
    for piece in _kappablock_pieces(b, cuts):
        head = Mono(atom=piece.head_atom())
        if cmp_mono(head, marker) == LT:
            break
        if isinstance(piece, TailSum):
            out.extend(_truncate_entry(c, piece, marker))
        else:
            out.append((c, piece))
    return out


def make_series(entries: Iterable[Term], tail: Optional[Mono] = None) -> Series:
    terms = normalize_terms(entries)
    if tail is not None:
        kept: List[Term] = []
        for c, b in terms:
            kept.extend(_truncate_entry(c, b, tail))
        terms = _refuse(kept)
    return Series(terms, tail)


def from_term(c, body: Body) -> Series:
    return make_series([(as_constant(c), body)])


def from_rational(q) -> Series:
    return from_term(Constant(q), UNIT)


def from_constant(c: Constant) -> Series:
    return from_term(c, UNIT)


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def _max_marker(*markers: Optional[Mono]) -> Optional[Mono]:
    live = [m for m in markers if m is not None]
    if not live:
        return None
    out = live[0]
    for m in live[1:]:
        if cmp_mono(m, out) == GT:
            out = m
    return out


def add(x: Series, y: Series) -> Series:
    return make_series(list(x.terms) + list(y.terms),
                       _max_marker(x.tail, y.tail))


def neg(x: Series) -> Series:
    return Series(tuple((-c, b) for c, b in x.terms), x.tail)


def sub(x: Series, y: Series) -> Series:
    return add(x, neg(y))


def scale(x: Series, c) -> Series:
    c = as_constant(c)
    if c.is_zero:
        return Series((), x.tail)
    return Series(tuple((c * c2, b) for c2, b in x.terms), x.tail)


def mul_mono(m1: Mono, m2: Mono) -> Mono:
    if m1.is_unit:
        return m2
    if m2.is_unit:
        return m1
    return make_mono(add(ln_mono(m1), ln_mono(m2)))


def inv_mono(m: Mono) -> Mono:
    if m.is_unit:
        return m
    return make_mono(neg(ln_mono(m)))


def pow_mono(m: Mono, q: Fraction) -> Mono:
    if m.is_unit or q == 0:
        return UNIT
    return make_mono(scale(ln_mono(m), Constant(Fraction(q))))


def _expand_blocks(x: Series, budget: int) -> Series:
    """Replace sum blocks by their first atoms; inexact when blocks remain."""
    out: List[Term] = []
    marker = x.tail
    for c, b in x.terms:
        if isinstance(b, Mono):
            out.append((c, b))
            continue
        atoms, rest = expand(b, budget)
        out.extend((c, Mono(atom=a)) for a in atoms)
        for r in rest:
            marker = _max_marker(marker, Mono(atom=r.head_atom()))
    return make_series(out, marker)


def _has_blocks(s: Series) -> bool:
    return any(not isinstance(b, Mono) for _, b in s.terms)


def _is_pure_constant(s: Series) -> bool:
    return s.tail is None and len(s.terms) == 1 and \
        isinstance(s.terms[0][1], Mono) and s.terms[0][1].is_unit


def mul(x: Series, y: Series) -> Series:
    if x.is_zero or y.is_zero:
        return ZERO
    # sum blocks shift out of block shape under any non-constant factor
    if _has_blocks(x) and not _is_pure_constant(y):
        x = _expand_blocks(x, _terms_budget(None))
    if _has_blocks(y) and not _is_pure_constant(x):
        y = _expand_blocks(y, _terms_budget(None))

    marker: Optional[Mono] = None
    if x.tail is not None:
        marker = _max_marker(marker, x.tail if not y.terms else
                             mul_mono(x.tail, _body_head_mono(y.terms[0][1])))
    if y.tail is not None:
        marker = _max_marker(marker, y.tail if not x.terms else
                             mul_mono(y.tail, _body_head_mono(x.terms[0][1])))

    products: List[Term] = []
    for c1, b1 in x.terms:
        for c2, b2 in y.terms:
            c = c1 * c2
            if isinstance(b1, Mono) and isinstance(b2, Mono):
                products.append((c, mul_mono(b1, b2)))
            elif isinstance(b1, Mono) and b1.is_unit:
                products.append((c, b2))
            else:
                products.append((c, b1))
    return make_series(products, marker)


def mul_many(items: Sequence[Series]) -> Series:
    out = from_rational(1)
    for s in items:
        out = mul(out, s)
    return out


def _leading_mono_term(x: Series) -> Tuple[Constant, Mono]:
    c, b = x.leading()
    return c, _body_head_mono(b)


def _split_leading(x: Series, budget: int) -> Tuple[Constant, Mono, Series]:
    """x = c*m*(1 + u) with u's monomials all < 1; u may be truncated."""
    c, b = x.leading()
    if not isinstance(b, Mono):
        x = _expand_blocks(x, budget)
        c, b = x.leading()
    rest = Series(x.terms[1:], x.tail)
    inv_lead = inv_mono(b)
    u = scale(mul(rest, from_term(Constant(1), inv_lead)), c.inverse())
    return c, b, u


def _truncate_to(x: Series, marker: Mono) -> Series:
    return make_series(list(x.terms), _max_marker(x.tail, marker))


def _power_sum(u: Series, coeffs: Iterable[Fraction], budget: int) -> Series:
    """sum coeff_k * u^k for infinitesimal u, truncated past budget powers."""
    it = iter(coeffs)
    acc = from_rational(next(it))
    if u.is_zero:
        return acc if u.exact else _truncate_to(acc, u.tail)
    m_hat = _leading_mono_term(u)[1]
    power = u
    for k in range(1, budget + 1):
        coeff = next(it)
        if coeff:
            acc = add(acc, scale(power, Constant(coeff)))
        if k < budget:
            power = mul(power, u)
    marker = m_hat
    for _ in range(budget - 1):
        marker = mul_mono(marker, m_hat)
    return _truncate_to(acc, marker)


def inv(x: Series, terms: Optional[int] = None) -> Series:
    if x.is_zero:
        raise DivisionByZero("1/0")
    budget = _terms_budget(terms)
    c, m, u = _split_leading(x, budget)
    lead_inv = from_term(c.inverse(), inv_mono(m))
    if u.is_zero and u.exact:
        return lead_inv
    geo = _power_sum(u, ((-1) ** k for k in itertools.count()), budget)
    return mul(lead_inv, geo)


def div(x: Series, y: Series, terms: Optional[int] = None) -> Series:
    return mul(x, inv(y, terms))


def pow_rat(x: Series, q, terms: Optional[int] = None) -> Series:
    q = Fraction(q)
    if q.denominator == 1:
        n = q.numerator
        if n == 0:
            return from_rational(1)
        base = x if n > 0 else inv(x, terms)
        out = from_rational(1)
        for _ in range(abs(n)):
            out = mul(out, base)
        return out
    budget = _terms_budget(terms)
    if x.is_zero:
        raise PowOfNonPositiveLeading("0 to a fractional power")
    c, m, u = _split_leading(x, budget)
    if c.sign() <= 0:
        raise PowOfNonPositiveLeading(str(c))
    lead = from_term(c.pow_rational_exact(q), pow_mono(m, q))
    if u.is_zero and u.exact:
        return lead

    def binom():
        acc = Fraction(1)
        k = 0
        while True:
            yield acc
            acc = acc * (q - k) / (k + 1)
            k += 1

    return mul(lead, _power_sum(u, binom(), budget))


# ---------------------------------------------------------------------------
# decomposition, exp, ln
# ---------------------------------------------------------------------------

def decompose(x: Series) -> Tuple[Series, Constant, Series]:
    """x = purely_infinite + constant + infinitesimal."""
    inf_terms: List[Term] = []
    const = Constant(0)
    small: List[Term] = []
    inf_tail = None
    small_tail = None
    for c, b in x.terms:
        if isinstance(b, (TailSum, KappaBlock)) or (b.atom is not None):
            inf_terms.append((c, b))
        elif b.is_unit:
            const = const + c
        elif series_sign(b.exponent) > 0:
            inf_terms.append((c, b))
        else:
            small.append((c, b))
    if x.tail is not None:
        if _body_infinite(x.tail):
            inf_tail = x.tail
        else:
            small_tail = x.tail
    return (Series(tuple(inf_terms), inf_tail), const,
            Series(tuple(small), small_tail))


def exp(x: Series, terms: Optional[int] = None) -> Series:
    budget = _terms_budget(terms)
    big, const, small = decompose(x)
    if big.tail is not None:
        raise TruncatedInput("exp needs the purely infinite part exactly")
    lead = from_term(const.exp_exact(), make_mono(big))
    if small.is_zero and small.exact:
        return lead

    def inv_factorials():
        acc = Fraction(1)
        k = 0
        while True:
            yield acc
            k += 1
            acc /= k

    return mul(lead, _power_sum(small, inv_factorials(), budget))


def ln(x: Series, terms: Optional[int] = None) -> Series:
    budget = _terms_budget(terms)
    if x.is_zero:
        raise NonPositiveArgument("ln 0")
    if series_sign(x) <= 0:
        raise NonPositiveArgument("ln of a non-positive series")
    c, m, u = _split_leading(x, budget)
    out = add(ln_mono(m), from_constant(c.ln_exact()))
    if u.is_zero and u.exact:
        return out

    def mercator():
        yield Fraction(0)
        k = 1
        while True:
            yield Fraction((-1) ** (k - 1), k)
            k += 1

    return add(out, _power_sum(u, mercator(), budget))


def lnn(n: int, x: Series, terms: Optional[int] = None) -> Series:
    for _ in range(n):
        x = ln(x, terms)
    return x


def expn(n: int, x: Series, terms: Optional[int] = None) -> Series:
    for _ in range(n):
        x = exp(x, terms)
    return x


# ---------------------------------------------------------------------------
# magnitude / level / class comparisons
# ---------------------------------------------------------------------------

def mag_cmp(x: Series, y: Series) -> int:
    """Archimedean comparison by leading monomials; zero is below everything."""
    if x.is_zero and y.is_zero:
        return EQ
    if x.is_zero:
        return LT
    if y.is_zero:
        return GT
    return cmp_mono(_leading_mono_term(x)[1], _leading_mono_term(y)[1])


def kclass_of_mono(m: Mono) -> KIndex:
    if m.atom is not None:
        return m.atom.sigma
    if m.is_unit:
        raise DomainError("unit monomial has no kappa class")
    return kclass_of_mono(_body_head_mono(m.exponent.leading()[1]))


def kclass(x: Series) -> KIndex:
    if series_sign(x) <= 0:
        raise DomainError("kappa class needs a positive infinite value")
    return kclass_of_mono(_leading_mono_term(x)[1])


def kclass_cmp(x: Series, y: Series) -> int:
    a, b = kclass(x), kclass(y)
    if a == b:
        return EQ
    return GT if a > b else LT


def logclass_cmp(x: Series, y: Series) -> int:
    """Level comparison: iterate ln until magnitudes merge or separation is
    structural (bounded by tower depth)."""
    kc = kclass_cmp(x, y)
    if kc != EQ:
        return kc
    depth = max(_tower_depth_mono(_leading_mono_term(x)[1]),
                _tower_depth_mono(_leading_mono_term(y)[1])) + 3
    a, b = x, y
    last = EQ
    for _ in range(depth):
        c = mag_cmp(a, b)
        if c == EQ:
            return EQ
        last = c
        a, b = ln(a), ln(b)
    return last


# ---------------------------------------------------------------------------
# kappa / lambda generators
# ---------------------------------------------------------------------------

def kappa(sigma) -> Series:
    return from_term(Constant(1), atom_mono(kindex(sigma), 0))


def lam(sign: int, mag: Ordinal) -> Series:
    """lambda at a signed ordinal index; sign in {-1,0,1}."""
    if sign == 0 or mag.is_zero:
        return omega()
    alpha, n = ordmod.ord_div_omega(mag)
    if sign < 0:
        return from_term(Constant(1), atom_mono(_neg_kindex(alpha), n))
    if alpha.is_zero:
        return from_term(Constant(1), atom_mono(K0, -n))
    return from_term(Constant(1), atom_mono(KIndex(1, alpha), -n))


# ---------------------------------------------------------------------------
# structure probes
# ---------------------------------------------------------------------------

def nu(x: Series) -> Ordinal:
    """Order type of the term sequence (series length)."""
    if x.tail is not None:
        raise TruncatedInput("nu of a truncated series")
    total = ordmod.ZERO
    for _, b in x.terms:
        if isinstance(b, Mono):
            total = ordmod.ord_add(total, ordmod.ONE)
        elif isinstance(b, TailSum):
            total = ordmod.ord_add(total, ordmod.OMEGA)
        else:
            span = ordmod.ord_left_sub(b.lo, b.hi)
            total = ordmod.ord_add(total, ordmod.ord_mul(ordmod.OMEGA, span))
    return total


def expand(block: Block, k: int) -> Tuple[List[LogAtom], List[Block]]:
    """Peel the k largest atoms off a sum block."""
    if isinstance(block, TailSum):
        atoms, rest = _split_tailsum(block, block.start + k)
        return atoms, [rest]
    atoms = _atoms_of_prefix(_neg_kindex(block.lo), 1, k + 1)
    rest: List[Block] = [TailSum(_neg_kindex(block.lo), k + 1)]
    nxt = ordmod.ord_add(block.lo, ordmod.ONE)
    if nxt < block.hi:
        if ordmod.ord_add(nxt, ordmod.ONE) == block.hi:
            rest.append(TailSum(_neg_kindex(nxt), 1))
        else:
            rest.append(KappaBlock(nxt, block.hi))
    return atoms, rest


def is_log_atomic(m: Mono) -> bool:
    return m.atom is not None


def is_purely_infinite(x: Series) -> bool:
    big, const, small = decompose(x)
    return const.is_zero and small.is_zero and small.exact and big == x
