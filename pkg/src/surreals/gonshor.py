"""Bridge between omega-exponent normal forms and the multiplicative kernel.

FragValue is a little hereditary normal form sum q_i * w^(e_i) with rational
coefficients, closed over the fragment this bridge supports: signed ordinals,
dyadic multiples of w^(-b), and finite sums of those.  The g and h maps are
implemented by their closed forms only; everything outside fails loudly with
OutsideFragment.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import List, Optional, Tuple

from . import core, ordinal as ordmod
from .core import KIndex, Mono, Series
from .errors import OutsideFragment, UnsupportedExponent
from .ordinal import Ordinal

LT, EQ, GT = -1, 0, 1


class FragValue:
    """Hereditary omega-normal-form value with rational coefficients."""

    __slots__ = ("eps", "terms", "_hash")

    def __init__(self, terms=(), *, eps: Optional[Ordinal] = None):
        if eps is not None:
            self.eps = eps
            self.terms = None
        else:
            self.eps = None
            self.terms = tuple(terms)
        self._hash = None

    @property
    def is_zero(self):
        return self.eps is None and not self.terms

    def view_terms(self) -> Tuple[Tuple[Fraction, "FragValue"], ...]:
        if self.eps is not None:
            return ((Fraction(1), self),)
        return self.terms

    def _cmp(self, other: "FragValue") -> int:
        a, b = self.view_terms(), other.view_terms()
        if self.eps is not None and other.eps is not None:
            c = ordmod.compare(self.eps, other.eps)
            return c
        i = 0
        while i < len(a) and i < len(b):
            (q1, e1), (q2, e2) = a[i], b[i]
            c = e1._cmp(e2)
            if c == GT:
                return GT if q1 > 0 else LT
            if c == LT:
                return GT if q2 < 0 else LT
            if q1 != q2:
                return GT if q1 > q2 else LT
            i += 1
        if i < len(a):
            return GT if a[i][0] > 0 else LT
        if i < len(b):
            return LT if b[i][0] > 0 else GT
        return EQ

    def __eq__(self, other):
        return isinstance(other, FragValue) and self._cmp(other) == EQ

    def __lt__(self, other):
        return self._cmp(other) == LT

    def __le__(self, other):
        return self._cmp(other) != GT

    def __gt__(self, other):
        return self._cmp(other) == GT

    def __ge__(self, other):
        return self._cmp(other) != LT

    def __hash__(self):
        if self._hash is None:
            if self.eps is not None:
                self._hash = hash(("feps", self.eps))
            else:
                self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        return "FragValue(%s)" % format_frag(self)


FRAG_ZERO = FragValue()


def frag_make(pairs) -> FragValue:
    """Canonical FragValue from (coeff, exponent) pairs."""
    merged = {}
    for q, e in pairs:
        q = Fraction(q)
        if q:
            merged[e] = merged.get(e, Fraction(0)) + q
    live = [(q, e) for e, q in merged.items() if q]
    live.sort(key=functools.cmp_to_key(lambda x, y: x[1]._cmp(y[1])), reverse=True)
    # w^eps(k) is eps(k) itself
    if len(live) == 1 and live[0][0] == 1 and live[0][1].eps is None:
        e = live[0][1]
        o = frag_to_ordinal(e)
        if o is not None and ordmod.is_epsilon(o):
            return FragValue(eps=o)
    return FragValue(tuple(live))


def frag_from_ordinal(o: Ordinal) -> FragValue:
    if o.is_eps_atom:
        return FragValue(eps=o)
    return FragValue(tuple((Fraction(c), frag_from_ordinal(e))
                           for e, c in o.cnf_terms()))


def frag_to_ordinal(v: FragValue) -> Optional[Ordinal]:
    if v.eps is not None:
        return v.eps
    terms = []
    for q, e in v.terms:
        if q.denominator != 1 or q <= 0:
            return None
        eo = frag_to_ordinal(e)
        if eo is None:
            return None
        terms.append((eo, q.numerator))
    try:
        return ordmod.Ordinal(terms)
    except ValueError:
        return None


def frag_neg(v: FragValue) -> FragValue:
    return frag_make((-q, e) for q, e in v.view_terms())


def frag_add(a: FragValue, b: FragValue) -> FragValue:
    return frag_make(list(a.view_terms()) + list(b.view_terms()))


def frag_scale(v: FragValue, q) -> FragValue:
    q = Fraction(q)
    return frag_make((q * q2, e) for q2, e in v.view_terms())


def frag_from_int(n: int) -> FragValue:
    return frag_make([(Fraction(n), FRAG_ZERO)])


def format_frag(v: FragValue) -> str:
    if v.eps is not None:
        return "eps(%s)" % ordmod.format_ordinal(v.eps)
    if not v.terms:
        return "0"
    parts = []
    for q, e in v.terms:
        if e.is_zero:
            parts.append(str(q))
        else:
            base = "w" if e == frag_from_int(1) else "w^(%s)" % format_frag(e)
            parts.append(base if q == 1 else "-%s" % base if q == -1
                         else "%s*%s" % (q, base))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# fragment predicates
# ---------------------------------------------------------------------------

def _as_eps_plus_n(o: Ordinal) -> Optional[Tuple[Ordinal, int]]:
    """o = eps(k) + n exactly (coefficient one on the eps term)."""
    t = o.cnf_terms()
    if not t or not t[0][0].is_eps_atom or t[0][1] != 1:
        return None
    rest = t[1:]
    if not rest:
        return o, 0
    if len(rest) == 1 and rest[0][0].is_zero:
        return ordmod.Ordinal(t[:1]), rest[0][1]
    return None


def _as_dyadic_power(q: Fraction) -> Optional[int]:
    """q = 2^-n; returns n >= 0."""
    if q <= 0 or q.numerator != 1:
        return None
    d = q.denominator
    n = d.bit_length() - 1
    return n if (1 << n) == d else None


def _as_neg_ordinal(v: FragValue) -> Optional[Ordinal]:
    return frag_to_ordinal(frag_neg(v))


def g_closed(a: FragValue) -> FragValue:
    """Gonshor's g on the closed-form fragment: positive ordinals,
    eps + n, and 2^-n * w^-b."""
    if not a > FRAG_ZERO:
        raise OutsideFragment("g needs a > 0")
    o = frag_to_ordinal(a)
    if o is not None:
        if _as_eps_plus_n(o) is not None:
            return frag_from_ordinal(ordmod.ord_add(o, ordmod.ONE))
        return a
    terms = a.view_terms()
    if len(terms) == 1:
        q, e = terms[0]
        n = _as_dyadic_power(q)
        b = _as_neg_ordinal(e)
        if n is not None and b is not None:
            return frag_add(frag_neg(frag_from_ordinal(b)),
                            frag_make([(q, FRAG_ZERO)]))
    raise OutsideFragment("g at %s" % format_frag(a))


def h_closed(b: FragValue) -> FragValue:
    """Inverse of g on the fragment; h(-a) = w^(-a-1) for ordinals a."""
    o = frag_to_ordinal(b)
    if o is not None and not o.is_zero:
        en = _as_eps_plus_n(o)
        if en is not None:
            eps_part, n = en
            if n == 0:
                raise OutsideFragment("h at a bare epsilon number")
            return frag_from_ordinal(ordmod.ord_pred(o))
        return b
    # b = -c + 2^-n with c an ordinal (n possibly 0), covering b <= 0
    terms = b.view_terms()
    infinite_part: List[Tuple[Fraction, FragValue]] = []
    q0 = Fraction(0)
    for q, e in terms:
        if e.is_zero:
            q0 += q
        else:
            infinite_part.append((q, e))
    c0 = _as_neg_ordinal(frag_make(infinite_part))
    if c0 is None:
        raise OutsideFragment("h at %s" % format_frag(b))
    # shift the rational part into (0, 1]: b = -(c0 + k) + q
    k = 1 - q0 if q0.denominator == 1 else -(q0.numerator // q0.denominator)
    k = int(k)
    if k < 0:
        raise OutsideFragment("h at %s" % format_frag(b))
    q = q0 + k
    c = ordmod.ord_add(c0, ordmod.from_int(k))
    if q != 1 and _as_dyadic_power(q) is None:
        raise OutsideFragment("h at %s" % format_frag(b))
    if c.is_zero and q == 1:
        raise OutsideFragment("h at %s" % format_frag(b))
    return frag_make([(q, frag_neg(frag_from_ordinal(c)))])


# ---------------------------------------------------------------------------
# omega form <-> kernel
# ---------------------------------------------------------------------------

class OmegaForm:
    """The monomial w^exponent with the exponent in the fragment."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: FragValue):
        self.exponent = exponent

    def __eq__(self, other):
        return isinstance(other, OmegaForm) and self.exponent == other.exponent

    def __hash__(self):
        return hash(("omegaform", self.exponent))

    def to_kernel(self) -> Series:
        return core.from_term(1, omega_power_to_kernel(self.exponent))

    def __repr__(self):
        return "w^(%s)" % format_frag(self.exponent)


def omega_power_to_kernel(e: FragValue) -> Mono:
    """Kernel monomial equal to w^e for fragment exponents e."""
    if e.is_zero:
        return core.UNIT
    if e.eps is not None:
        if e.eps == ordmod.eps(0):
            return core.atom_mono(1, 0)  # kappa_1 = eps_0
        raise OutsideFragment("w^%s has no kernel form here" % format_frag(e))
    terms = e.view_terms()
    if len(terms) == 1 and terms[0][0] == 1:
        d = _as_neg_ordinal(terms[0][1])
        if d is not None:
            # lambda_{-d} = w^(w^(-d)), with d = w*alpha + n
            alpha, n = ordmod.ord_div_omega(d)
            sigma = KIndex(0) if alpha.is_zero else KIndex(-1, alpha)
            return core.atom_mono(sigma, n)
    # general: ln w^(w^e) per term, through h
    parts = []
    for q, f in terms:
        parts.append(core.from_term(core.Constant(q),
                                    omega_power_to_kernel(h_closed(f))))
    total = core.ZERO
    for p in parts:
        total = core.add(total, p)
    return core.make_mono(total)


def mono_to_omega_exponent(m: Mono) -> FragValue:
    """Inverse bridge: the omega-exponent of a kernel monomial."""
    if m.is_unit:
        return FRAG_ZERO
    if m.atom is not None:
        a = m.atom
        if a.sigma.sign < 0 or a.sigma == core.K0:
            alpha = a.sigma.mag if a.sigma.sign < 0 else ordmod.ZERO
            if a.level >= 0:
                d = ordmod.ord_add(ordmod.ord_mul(ordmod.OMEGA, alpha),
                                   ordmod.from_int(a.level))
                return frag_make([(Fraction(1),
                                   frag_neg(frag_from_ordinal(d)))])
            # exp-tower: iterate g from the kappa level
            e = frag_make([(Fraction(1), frag_neg(frag_from_ordinal(
                ordmod.ord_mul(ordmod.OMEGA, alpha))))])
            for _ in range(-a.level):
                e = frag_make([(Fraction(1), g_closed(e))])
            return e
        if a.sigma == KIndex(1, ordmod.ONE):
            if a.level > 0:
                raise UnsupportedExponent("ln of eps_0 leaves the fragment")
            e = FragValue(eps=ordmod.eps(0))
            for _ in range(-a.level):
                e = frag_make([(Fraction(1), g_closed(e))])
            return e
        raise UnsupportedExponent("kappa index %r" % a.sigma)
    # exp(sum c_k m_k) = w^(sum c_k w^(g(f_k)))
    pairs = []
    for c, b in m.exponent.terms:
        if not isinstance(b, Mono):
            raise UnsupportedExponent("sum blocks have no omega form")
        if not c.is_rational:
            raise UnsupportedExponent("log-bearing coefficient")
        f = mono_to_omega_exponent(b)
        pairs.append((c.q, g_closed(f)))
    return frag_make((q, f) for q, f in pairs)


def series_to_omega_terms(x: Series) -> List[Tuple[Fraction, FragValue]]:
    """Term list (coefficient, omega-exponent) of an exact kernel series."""
    if x.tail is not None:
        raise UnsupportedExponent("truncated series has no finite omega form")
    out = []
    for c, b in x.terms:
        if not isinstance(b, Mono):
            raise UnsupportedExponent("sum blocks have no omega form")
        if not c.is_rational:
            raise UnsupportedExponent("log-bearing coefficient")
        out.append((c.q, mono_to_omega_exponent(b)))
    return out


def exp_omega_form(x: List[Tuple[Fraction, FragValue]]) -> OmegaForm:
    """exp of a purely infinite fragment value sum q_i w^(a_i)."""
    pairs = []
    for q, a in x:
        if not a > FRAG_ZERO:
            raise OutsideFragment("exp_omega_form needs a purely infinite input")
        pairs.append((q, g_closed(a)))
    return OmegaForm(frag_make(pairs))


def ln_omega_form(a: OmegaForm) -> Series:
    """ln of w^exponent, returned as a kernel series."""
    total = core.ZERO
    for q, f in a.exponent.view_terms():
        total = core.add(total, core.from_term(
            core.Constant(q), omega_power_to_kernel(h_closed(f))))
    return total


def kappa_omega_form(alpha: Ordinal) -> OmegaForm:
    """kappa_{-alpha} in omega-power form: w^(w^(-(w*alpha)))."""
    d = ordmod.ord_mul(ordmod.OMEGA, alpha)
    return OmegaForm(frag_make([(Fraction(1), frag_neg(frag_from_ordinal(d)))]))


def omega_form_of_series(x: Series) -> OmegaForm:
    """Whole-series omega form for a single positive monomial series."""
    terms = series_to_omega_terms(x)
    if len(terms) != 1 or terms[0][0] != 1:
        raise OutsideFragment("not a coefficient-one monomial")
    return OmegaForm(terms[0][1])


# ---------------------------------------------------------------------------
# length-bound report (uses signseq lazily to avoid an import cycle)
# ---------------------------------------------------------------------------

def check_length_bounds(a: FragValue) -> List[Tuple[str, Ordinal, Ordinal, bool]]:
    """Evaluate the g/h length bounds at a fragment point.

    Returns (name, bound, actual, holds) rows for
      len(g(a)) <= len(a) + 1,
      len(h(a)) <= w^(len(a)+1)        (at the point g(a), so h applies),
      len(a)    <= len(w^(g(a))) * (w+1).
    """
    from . import signseq

    rows = []
    la = signseq.frag_length(a)
    ga = g_closed(a)
    lga = signseq.frag_length(ga)
    rows.append(("len(g(a)) <= len(a)+1",
                 ordmod.ord_add(la, ordmod.ONE), lga,
                 lga <= ordmod.ord_add(la, ordmod.ONE)))
    ha = h_closed(ga)
    lha = signseq.frag_length(ha)
    bound_h = ordmod.ord_pow_omega(ordmod.ord_add(lga, ordmod.ONE))
    rows.append(("len(h(g(a))) <= w^(len(g(a))+1)", bound_h, lha,
                 lha <= bound_h))
    lwga = signseq.frag_length(frag_make([(Fraction(1), ga)]))
    bound_a = ordmod.ord_mul(lwga, ordmod.ord_add(ordmod.OMEGA, ordmod.ONE))
    rows.append(("len(a) <= len(w^g(a))*(w+1)", bound_a, la, la <= bound_a))
    return rows
