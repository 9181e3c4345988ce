"""Gonshor sign sequences: order, simplicity, brackets, and the normal-form
conversion on the convertible fragment.

A SignSeq is a run-length encoding [(sign, run)] with ordinal runs.  The
normal-form synthesis follows the monomial/coefficient juxtaposition rules
with reduced exponents; the inverse direction is a parser over the same run
structure, validated by re-expanding its output.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import core, gonshor, ordinal as ordmod
from .constants import Constant
from .core import Mono, Series
from .errors import (BirthdayBoundExceeded, DomainError, NonDyadicCoefficient,
                     NotSeparated, OutsideFragment, TruncatedInput,
                     UnsupportedExponent, UptoBeyondLength)
from .gonshor import FragValue
from .ordinal import Ordinal

LT, EQ, GT = -1, 0, 1

PLUS, MINUS = 1, -1

CONWAY_BIRTHDAY_BOUND = 8
_MEMO_LIMIT = 100_000


class SignSeq:
    """Run-length encoded +/- sequence of ordinal length."""

    __slots__ = ("blocks", "_hash")

    def __init__(self, blocks: Iterable[Tuple[int, Ordinal]] = ()):
        merged: List[Tuple[int, Ordinal]] = []
        for s, r in blocks:
            if r.is_zero:
                continue
            if s not in (PLUS, MINUS):
                raise ValueError("bad sign %r" % (s,))
            if merged and merged[-1][0] == s:
                merged[-1] = (s, ordmod.ord_add(merged[-1][1], r))
            else:
                merged.append((s, r))
        self.blocks = tuple(merged)
        self._hash = None

    @property
    def is_empty(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        return isinstance(other, SignSeq) and self.blocks == other.blocks

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.blocks)
        return self._hash

    def __repr__(self):
        return "SignSeq(%s)" % format_signseq(self)


EMPTY = SignSeq()


def seq(*pattern) -> SignSeq:
    """Convenience builder: seq(1, -1, (1, OMEGA)) etc."""
    blocks = []
    for p in pattern:
        if isinstance(p, int):
            blocks.append((p, ordmod.ONE))
        else:
            s, r = p
            blocks.append((s, r if isinstance(r, Ordinal) else ordmod.from_int(r)))
    return SignSeq(blocks)


def length(x: SignSeq) -> Ordinal:
    return ordmod.ord_sum(r for _, r in x.blocks)


def flip(x: SignSeq) -> SignSeq:
    return SignSeq((-s, r) for s, r in x.blocks)


def cmp_lex(x: SignSeq, y: SignSeq) -> int:
    """Lexicographic order with blank padding, minus < blank < plus."""
    a = list(x.blocks)
    b = list(y.blocks)
    while a and b:
        s1, r1 = a[0]
        s2, r2 = b[0]
        if s1 != s2:
            return LT if s1 < s2 else GT
        if r1 == r2:
            a.pop(0)
            b.pop(0)
        elif r1 < r2:
            a.pop(0)
            b[0] = (s2, ordmod.ord_left_sub(r1, r2))
        else:
            b.pop(0)
            a[0] = (s1, ordmod.ord_left_sub(r2, r1))
    if a:
        return GT if a[0][0] == PLUS else LT
    if b:
        return LT if b[0][0] == PLUS else GT
    return EQ


def is_prefix(x: SignSeq, y: SignSeq) -> bool:
    """x is an initial segment of y (possibly equal)."""
    a = list(x.blocks)
    b = list(y.blocks)
    while a:
        if not b:
            return False
        s1, r1 = a[0]
        s2, r2 = b[0]
        if s1 != s2 or r1 > r2:
            return False
        if r1 < r2 and len(a) > 1:
            return False
        a.pop(0)
        b.pop(0)
    return True


def prefix(x: SignSeq, upto: Ordinal) -> SignSeq:
    """Initial segment of the given ordinal length."""
    out = []
    pos = ordmod.ZERO
    for s, r in x.blocks:
        end = ordmod.ord_add(pos, r)
        if end <= upto:
            out.append((s, r))
        elif pos < upto:
            out.append((s, ordmod.ord_left_sub(pos, upto)))
            break
        else:
            break
        pos = end
    return SignSeq(out)


def plus_count(x: SignSeq, upto: Optional[Ordinal] = None) -> Ordinal:
    """Ordinal count of pluses among the first `upto` positions."""
    total_len = length(x)
    if upto is None:
        upto = total_len
    if upto > total_len:
        raise UptoBeyondLength(str(upto))
    count = ordmod.ZERO
    pos = ordmod.ZERO
    for s, r in x.blocks:
        end = ordmod.ord_add(pos, r)
        take = r if end <= upto else ordmod.ord_left_sub(pos, upto)
        if pos >= upto:
            break
        if s == PLUS:
            count = ordmod.ord_add(count, take)
        pos = end
    return count


def lcp_length(x: SignSeq, y: SignSeq) -> Ordinal:
    """Length of the longest common prefix."""
    a = list(x.blocks)
    b = list(y.blocks)
    agree = ordmod.ZERO
    while a and b:
        s1, r1 = a[0]
        s2, r2 = b[0]
        if s1 != s2:
            break
        take = min(r1, r2)
        agree = ordmod.ord_add(agree, take)
        if r1 == r2:
            a.pop(0)
            b.pop(0)
        elif r1 < r2:
            a.pop(0)
            b[0] = (s2, ordmod.ord_left_sub(r1, r2))
        else:
            b.pop(0)
            a[0] = (s1, ordmod.ord_left_sub(r2, r1))
    return agree


def concat(*parts: SignSeq) -> SignSeq:
    blocks = []
    for p in parts:
        blocks.extend(p.blocks)
    return SignSeq(blocks)


# ---------------------------------------------------------------------------
# simplicity
# ---------------------------------------------------------------------------

def simplest_between(A: Sequence[SignSeq], B: Sequence[SignSeq]) -> SignSeq:
    """The simplicity-minimal x with A < x < B (A, B finite, A < B)."""
    for a in A:
        for b in B:
            if cmp_lex(a, b) != LT:
                raise NotSeparated("%r !< %r" % (a, b))
    x = EMPTY
    guard = sum(len(s.blocks) for s in list(A) + list(B)) * 2 + 4
    for _ in range(guard):
        low = [a for a in A if cmp_lex(a, x) != LT]
        if low:
            x = _jump(x, low, PLUS)
            continue
        high = [b for b in B if cmp_lex(b, x) != GT]
        if high:
            x = _jump(x, high, MINUS)
            continue
        return x
    raise DomainError("simplest_between did not converge")


def _jump(x: SignSeq, crowd: Sequence[SignSeq], sign: int) -> SignSeq:
    """Append the forced run of `sign` to get past every sequence in crowd."""
    need = ordmod.ONE
    xlen = length(x)
    for a in crowd:
        if not is_prefix(x, a):
            raise NotSeparated("unreachable cut at %r" % (a,))
        rest = _suffix(a, xlen)
        if rest.is_empty:
            d = ordmod.ONE
        else:
            s0, r0 = rest.blocks[0]
            if s0 != sign:
                raise NotSeparated("inconsistent cut at %r" % (a,))
            d = r0 if len(rest.blocks) > 1 else ordmod.ord_add(r0, ordmod.ONE)
        if d > need:
            need = d
    return concat(x, SignSeq([(sign, need)]))


def _suffix(x: SignSeq, start: Ordinal) -> SignSeq:
    out = []
    pos = ordmod.ZERO
    for s, r in x.blocks:
        end = ordmod.ord_add(pos, r)
        if end <= start:
            pass
        elif pos >= start:
            out.append((s, r))
        else:
            out.append((s, ordmod.ord_left_sub(ordmod.ord_left_sub(pos, start), r)))
        pos = end
    return SignSeq(out)


# ---------------------------------------------------------------------------
# dyadics
# ---------------------------------------------------------------------------

def dyadic_to_signseq(q) -> SignSeq:
    q = Fraction(q)
    if q.denominator & (q.denominator - 1):
        raise NonDyadicCoefficient(str(q))
    signs = []
    v = Fraction(0)
    move = Fraction(1)
    flipped = False
    while v != q:
        s = PLUS if q > v else MINUS
        if signs and s != signs[-1]:
            flipped = True
        if flipped:
            move /= 2
        v += s * move
        signs.append(s)
    return SignSeq((s, ordmod.ONE) for s in signs)


def signseq_to_dyadic(x: SignSeq) -> Fraction:
    if not length(x).is_finite:
        raise DomainError("not a finite sequence")
    v = Fraction(0)
    move = Fraction(1)
    flipped = False
    prev = None
    for s, r in x.blocks:
        for _ in range(r.as_int()):
            if prev is not None and s != prev:
                flipped = True
            if flipped:
                move /= 2
            v += s * move
            prev = s
    return v


# ---------------------------------------------------------------------------
# Conway bracket arithmetic at small birthdays
# ---------------------------------------------------------------------------

_memo: Dict[tuple, SignSeq] = {}


def _memoized(key, fn):
    if key in _memo:
        return _memo[key]
    out = fn()
    if len(_memo) < _MEMO_LIMIT:
        _memo[key] = out
    return out


def _check_birthday(x: SignSeq):
    l = length(x)
    if not l.is_finite or l.as_int() > CONWAY_BIRTHDAY_BOUND:
        raise BirthdayBoundExceeded(format_signseq(x))


def _proper_prefixes(x: SignSeq) -> Tuple[List[SignSeq], List[SignSeq]]:
    lower, upper = [], []
    n = length(x).as_int()
    for k in range(n):
        p = prefix(x, ordmod.from_int(k))
        (lower if cmp_lex(p, x) == LT else upper).append(p)
    return lower, upper


def conway_neg(x: SignSeq) -> SignSeq:
    return flip(x)


def conway_add(x: SignSeq, y: SignSeq) -> SignSeq:
    _check_birthday(x)
    _check_birthday(y)
    return _add(x, y)


def conway_mul(x: SignSeq, y: SignSeq) -> SignSeq:
    _check_birthday(x)
    _check_birthday(y)
    return _mul(x, y)


def _add(x: SignSeq, y: SignSeq) -> SignSeq:
    def run():
        xl, xu = _proper_prefixes(x)
        yl, yu = _proper_prefixes(y)
        left = [_add(a, y) for a in xl] + [_add(x, b) for b in yl]
        right = [_add(a, y) for a in xu] + [_add(x, b) for b in yu]
        return simplest_between(_max_set(left), _min_set(right))

    return _memoized(("add", x.blocks, y.blocks), run)


def _sub(x: SignSeq, y: SignSeq) -> SignSeq:
    return _add(x, flip(y))


def _mul(x: SignSeq, y: SignSeq) -> SignSeq:
    def run():
        xl, xu = _proper_prefixes(x)
        yl, yu = _proper_prefixes(y)
        left, right = [], []
        for xo, yo, side in [(a, b, "l") for a in xl for b in yl] + \
                            [(a, b, "l") for a in xu for b in yu] + \
                            [(a, b, "r") for a in xl for b in yu] + \
                            [(a, b, "r") for a in xu for b in yl]:
            v = _sub(_add(_mul(xo, y), _mul(x, yo)), _mul(xo, yo))
            (left if side == "l" else right).append(v)
        return simplest_between(_max_set(left), _min_set(right))

    return _memoized(("mul", x.blocks, y.blocks), run)


def _max_set(items: List[SignSeq]) -> List[SignSeq]:
    """Keep only maximal elements (cofinal subset) to shrink bracket sets."""
    out = []
    for v in items:
        if any(cmp_lex(v, w) == LT for w in items if w is not v):
            continue
        if all(cmp_lex(v, w) != EQ for w in out):
            out.append(v)
    return out


def _min_set(items: List[SignSeq]) -> List[SignSeq]:
    out = []
    for v in items:
        if any(cmp_lex(v, w) == GT for w in items if w is not v):
            continue
        if all(cmp_lex(v, w) != EQ for w in out):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# normal form -> sign expansion
# ---------------------------------------------------------------------------

def _reduce_exponent(se: SignSeq, previous: Sequence[SignSeq]) -> SignSeq:
    """Drop the minuses already contributed by an earlier exponent."""
    if not previous:
        return se
    c = ordmod.ZERO
    for p in previous:
        l = lcp_length(se, p)
        if l > c:
            c = l
    if c.is_zero:
        return se
    out = []
    pos = ordmod.ZERO
    for s, r in se.blocks:
        end = ordmod.ord_add(pos, r)
        if s == PLUS or pos >= c:
            out.append((s, r))
        elif end > c:
            out.append((s, ordmod.ord_left_sub(ordmod.ord_left_sub(pos, c), r)))
        pos = end
    return SignSeq(out)


def _monomial_blocks(reduced: SignSeq) -> Tuple[List[Tuple[int, Ordinal]], Ordinal]:
    """Expansion of w^(a) from the (reduced) expansion of a; returns the
    blocks and the total plus count of a."""
    blocks: List[Tuple[int, Ordinal]] = [(PLUS, ordmod.ONE)]
    p = ordmod.ZERO
    for s, r in reduced.blocks:
        if s == PLUS:
            blocks.append((PLUS, ordmod.ord_pow_omega(ordmod.ord_add(p, r))))
            p = ordmod.ord_add(p, r)
        else:
            unit = ordmod.ord_pow_omega(ordmod.ord_add(p, ordmod.ONE))
            blocks.append((MINUS, ordmod.ord_mul(unit, r)))
    return blocks, p


def _coefficient_blocks(q: Fraction, p: Ordinal) -> List[Tuple[int, Ordinal]]:
    """Signs of |q| (first plus omitted), each repeated w^p times."""
    if q < 0:
        q = -q
    if q == 1:
        return []
    ds = dyadic_to_signseq(q)
    if not ds.blocks or ds.blocks[0][0] != PLUS:
        raise NonDyadicCoefficient(str(q))
    rest = _suffix(ds, ordmod.ONE)
    unit = ordmod.ord_pow_omega(p)
    return [(s, ordmod.ord_mul(unit, r)) for s, r in rest.blocks]


def frag_signexp(v: FragValue) -> SignSeq:
    """Sign expansion of a fragment normal form, by juxtaposition."""
    o = gonshor.frag_to_ordinal(v)
    if o is not None:
        return SignSeq([(PLUS, o)])
    o = gonshor.frag_to_ordinal(gonshor.frag_neg(v))
    if o is not None:
        return SignSeq([(MINUS, o)])
    blocks: List[Tuple[int, Ordinal]] = []
    previous: List[SignSeq] = []
    for q, e in v.view_terms():
        if q.denominator & (q.denominator - 1):
            raise NonDyadicCoefficient(str(q))
        se = frag_signexp(e)
        reduced = _reduce_exponent(se, previous)
        term_blocks, p = _monomial_blocks(reduced)
        term_blocks.extend(_coefficient_blocks(q, p))
        if q < 0:
            term_blocks = [(-s, r) for s, r in term_blocks]
        blocks.extend(term_blocks)
        previous.append(se)
    return SignSeq(blocks)


def frag_length(v: FragValue) -> Ordinal:
    return length(frag_signexp(v))


def from_normal_form(x: Series) -> SignSeq:
    """Sign expansion of an exact kernel series on the convertible fragment."""
    if x.tail is not None:
        raise TruncatedInput("sign expansion needs an exact value")
    terms = gonshor.series_to_omega_terms(x)
    return frag_signexp(gonshor.frag_make(terms))


# ---------------------------------------------------------------------------
# sign expansion -> normal form (fragment inverse)
# ---------------------------------------------------------------------------

def _consume(blocks: List[Tuple[int, Ordinal]], amount: Ordinal):
    """Remove `amount` positions from the front of the first run."""
    if not blocks:
        raise OutsideFragment("nothing left to consume")
    s, r = blocks[0]
    if amount > r:
        raise OutsideFragment("cannot consume past a run")
    rest = ordmod.ord_left_sub(amount, r)
    if rest.is_zero:
        blocks.pop(0)
    else:
        blocks[0] = (s, rest)


def _parse_monomial(blocks: List[Tuple[int, Ordinal]]) -> Tuple[SignSeq, Ordinal]:
    """Parse the w^(a) part; returns (reduced exponent a, its plus count)."""
    _consume(blocks, ordmod.ONE)  # the leading plus
    p = ordmod.ZERO
    exp_blocks: List[Tuple[int, Ordinal]] = []
    while blocks:
        s, r = blocks[0]
        if s == PLUS:
            lead_e, _ = r.leading()
            if lead_e <= p:
                break
            d = ordmod.ord_left_sub(p, lead_e)
            _consume(blocks, ordmod.ord_pow_omega(lead_e))
            exp_blocks.append((PLUS, d))
            p = lead_e
        else:
            unit_exp = ordmod.ord_add(p, ordmod.ONE)
            q, _ = ordmod.ord_div_pow_omega(r, unit_exp)
            if q.is_zero:
                break
            _consume(blocks, ordmod.ord_mul(ordmod.ord_pow_omega(unit_exp), q))
            exp_blocks.append((MINUS, q))
    return SignSeq(exp_blocks), p


_COEFF_RUN_CAP = 32


def _coefficient_candidates(blocks: List[Tuple[int, Ordinal]], p: Ordinal):
    """Possible (|q|, remaining-blocks) coefficient readings.

    Coefficient signs come in w^p sized repeats and alternate like the RLE of
    a dyadic expansion.  A run that only partially consumes its block ends the
    zone (the leftover front sign equals the run sign, and coefficient runs
    alternate), which keeps the backtracking search small.
    """
    unit = ordmod.ord_pow_omega(p)
    readings: List[Tuple[Fraction, List[Tuple[int, Ordinal]]]] = []

    def walk(blks, signs, depth):
        readings.append((_signs_value(signs), blks))
        if not blks or depth <= 0:
            return
        s, r = blks[0]
        q, _ = ordmod.ord_div_pow_omega(r, p)
        k_max = min(q.as_int() if q.is_finite else _COEFF_RUN_CAP,
                    _COEFF_RUN_CAP)
        for k in range(1, k_max + 1):
            nxt = [b for b in blks]
            try:
                _consume(nxt, ordmod.ord_mul(unit, ordmod.from_int(k)))
            except OutsideFragment:
                break
            new_signs = signs + [s] * k
            if nxt and nxt[0][0] == s:
                readings.append((_signs_value(new_signs), nxt))
            else:
                walk(nxt, new_signs, depth - 1)

    walk([b for b in blocks], [PLUS], 8)
    seen = set()
    out = []
    for val, blks in readings:
        key = (val, tuple(blks))
        if key not in seen and val != 0:
            seen.add(key)
            out.append((val, blks))
    return out


def _signs_value(signs) -> Fraction:
    return signseq_to_dyadic(SignSeq((s, ordmod.ONE) for s in signs))


def _unreduce(reduced: SignSeq, previous: Sequence[SignSeq]) -> List[SignSeq]:
    """Candidate original exponents whose reduction against `previous` is
    `reduced`; validated by re-reducing."""
    candidates = {reduced}
    for prev in previous:
        for c in _prefix_cuts(prev, reduced):
            head = prefix(prev, c)
            pluses = plus_count(head)
            # the reduced form must start with exactly the pluses of `head`
            if _leading_plus_run(reduced) < pluses:
                continue
            tail = _drop_leading_pluses(reduced, pluses)
            candidates.add(concat(head, tail))
    out = []
    for cand in candidates:
        if _reduce_exponent(cand, previous) == reduced:
            out.append(cand)
    return out


def _leading_plus_run(x: SignSeq) -> Ordinal:
    if x.blocks and x.blocks[0][0] == PLUS:
        return x.blocks[0][1]
    return ordmod.ZERO


def _drop_leading_pluses(x: SignSeq, n: Ordinal) -> SignSeq:
    if n.is_zero:
        return x
    s, r = x.blocks[0]
    if s != PLUS or r < n:
        raise OutsideFragment("not enough leading pluses")
    return concat(SignSeq([(PLUS, ordmod.ord_left_sub(n, r))]),
                  SignSeq(x.blocks[1:]))


def _prefix_cuts(prev: SignSeq, reduced: SignSeq) -> List[Ordinal]:
    """Cut positions of `prev` at which a divergence below a plus (or the end
    of prev) is possible."""
    cuts = [ordmod.ZERO]
    pos = ordmod.ZERO
    for s, r in prev.blocks:
        end = ordmod.ord_add(pos, r)
        if s == PLUS:
            # any offset within a plus run is a possible divergence point
            if r.is_finite:
                for t in range(1, r.as_int() + 1):
                    cuts.append(ordmod.ord_add(pos, ordmod.from_int(t)))
            else:
                cuts.append(end)
        else:
            cuts.append(end)
        pos = end
    return cuts


def to_normal_form(s: SignSeq) -> Series:
    """Inverse of from_normal_form on its image."""
    for result in _parse_series(list(s.blocks), [], []):
        try:
            kernel = _frag_terms_to_kernel(result)
        except (OutsideFragment, UnsupportedExponent):
            continue
        try:
            if from_normal_form(kernel) == s:
                return kernel
        except (OutsideFragment, UnsupportedExponent, NonDyadicCoefficient):
            continue
    raise OutsideFragment("sign sequence outside the invertible fragment")


def _frag_terms_to_kernel(terms) -> Series:
    out = core.ZERO
    for q, e in terms:
        out = core.add(out, core.from_term(
            Constant(q), gonshor.omega_power_to_kernel(e)))
    return out


def _parse_series(blocks, parsed_terms, previous_exps):
    """Generator of complete parses (lists of (coeff, FragValue))."""
    if not blocks:
        yield list(parsed_terms)
        return
    sign = blocks[0][0]
    work = [b for b in blocks] if sign == PLUS else [(-s, r) for s, r in blocks]
    rest_after_mono = work
    try:
        reduced, p = _parse_monomial(rest_after_mono)
    except (OutsideFragment, DomainError):
        return
    for coeff, rest in _coefficient_candidates(rest_after_mono, p):
        for exponent_seq in _unreduce(reduced, previous_exps):
            try:
                frag_exp = _signexp_to_frag(exponent_seq)
            except (OutsideFragment, UnsupportedExponent, NonDyadicCoefficient):
                continue
            if previous_exps:
                prev_frag = parsed_terms[-1][1]
                if not frag_exp < prev_frag:
                    continue
            q = coeff if sign == PLUS else -coeff
            restored = rest if sign == PLUS else [(-s, r) for s, r in rest]
            yield from _parse_series(restored,
                                     parsed_terms + [(q, frag_exp)],
                                     previous_exps + [exponent_seq])


def _signexp_to_frag(se: SignSeq) -> FragValue:
    """Recursive fragment value of an exponent's sign expansion."""
    if se.is_empty:
        return gonshor.FRAG_ZERO
    inner = to_normal_form(se)
    terms = gonshor.series_to_omega_terms(inner)
    return gonshor.frag_make(terms)


# ---------------------------------------------------------------------------
# lengths
# ---------------------------------------------------------------------------

class LengthInfo:
    __slots__ = ("kind", "value")

    EXACT = "Exact"
    UPPER = "UpperBound"

    def __init__(self, kind, value):
        self.kind = kind
        self.value = value

    def __eq__(self, other):
        return (isinstance(other, LengthInfo) and self.kind == other.kind
                and self.value == other.value)

    def __repr__(self):
        return "%s %s" % (self.kind, ordmod.format_ordinal(self.value))


def surreal_length(x: Series) -> LengthInfo:
    """Exact sign-expansion length when convertible, else a sound bound."""
    try:
        return LengthInfo(LengthInfo.EXACT, length(from_normal_form(x)))
    except (UnsupportedExponent, OutsideFragment, NonDyadicCoefficient):
        pass
    if x.tail is not None:
        raise TruncatedInput("no length bound for truncated series")
    total = ordmod.ZERO
    for c, b in x.terms:
        total = ordmod.ord_add(total, _term_length_bound(b))
    return LengthInfo(LengthInfo.UPPER, total)


def _term_length_bound(b) -> Ordinal:
    w = ordmod.OMEGA
    if isinstance(b, core.TailSum):
        head = core.Mono(atom=b.head_atom())
        return ordmod.ord_mul(_term_length_bound(head),
                              ordmod.ord_pow_omega(ordmod.from_int(2)))
    if isinstance(b, core.KappaBlock):
        head_bound = ordmod.ord_mul(
            ordmod.ord_pow_omega(ordmod.from_int(3)),
            ordmod.ord_add(ordmod.ord_mul(w, b.hi), ordmod.ONE))
        return ordmod.ord_mul(head_bound, ordmod.ord_pow_omega(ordmod.from_int(3)))
    try:
        se = from_normal_form(core.from_term(1, b))
        base = length(se)
    except (UnsupportedExponent, OutsideFragment, NonDyadicCoefficient):
        if b.is_unit:
            base = w
        elif b.atom is not None:
            # positive kappa classes beyond eps_0 have no convertible form
            # and no length bound in this fragment
            raise UnsupportedExponent(repr(b))
        else:
            inner = ordmod.ZERO
            for _, bb in b.exponent.terms:
                inner = ordmod.ord_add(inner, _term_length_bound(bb))
            # len(exp a) <= w^(w^(2 len(a) (+) 3))
            base = ordmod.ord_pow_omega(ordmod.ord_pow_omega(
                ordmod.nat_add(ordmod.nat_mul(ordmod.from_int(2), inner),
                               ordmod.from_int(3))))
    # coefficient slack: finitely many repeats of w^(plus count) pieces
    return ordmod.ord_mul(base, w)


def format_signseq(x: SignSeq) -> str:
    if not x.blocks:
        return "()"
    parts = []
    for s, r in x.blocks:
        sgn = "+" if s == PLUS else "-"
        parts.append(sgn if r == ordmod.ONE else
                     "%s^%s" % (sgn, ordmod.format_ordinal(r)))
    return " ".join(parts)


def parse_signseq(text: str) -> SignSeq:
    """Parse the textual `+^w -^3 +` format."""
    from .parser import parse_ordinal_text
    blocks = []
    for tok in text.replace("(", " ").replace(")", " ").split():
        if tok[0] not in "+-":
            raise DomainError("bad sign token %r" % tok)
        s = PLUS if tok[0] == "+" else MINUS
        if len(tok) == 1:
            blocks.append((s, ordmod.ONE))
        else:
            if not tok[1] == "^":
                raise DomainError("bad sign token %r" % tok)
            blocks.append((s, parse_ordinal_text(tok[2:])))
    return SignSeq(blocks)
