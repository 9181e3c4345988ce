"""Exact ordinal arithmetic in hereditary Cantor normal form with epsilon atoms.

An ordinal is either an epsilon atom eps(k) (k itself an Ordinal) or a CNF
sum  w^e1*c1 + ... + w^en*cn  with strictly descending exponents e_i (again
Ordinals) and positive integer coefficients.  The normalization
w^eps(k) -> eps(k) is applied eagerly so epsilon atoms never appear expanded.

Both the ordinary (non-commutative) operations and the natural (Hessenberg)
operations are provided, together with the order-type bound calculus used by
the rest of the package (hat, union/sum/monoid/finseq bounds, canonical
sequences of epsilon numbers).
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple

from .errors import DomainError, IndexBeyondGamma, NotEpsilon

LT, EQ, GT = -1, 0, 1


class Ordinal:
    """Immutable ordinal value; compare with the usual rich operators."""

    __slots__ = ("_eps", "_terms", "_hash")

    def __init__(self, terms: Iterable[Tuple["Ordinal", int]] = (), *,
                 eps: Optional["Ordinal"] = None):
        if eps is not None:
            self._eps = eps
            self._terms = None
        else:
            terms = tuple(terms)
            for e, c in terms:
                if not (isinstance(e, Ordinal) and isinstance(c, int) and c >= 1):
                    raise ValueError("bad CNF term %r" % ((e, c),))
            for i in range(len(terms) - 1):
                if not terms[i][0] > terms[i + 1][0]:
                    raise ValueError("CNF exponents not strictly descending")
            self._eps = None
            self._terms = terms
        self._hash = None

    # -- structure ---------------------------------------------------------

    @property
    def is_eps_atom(self) -> bool:
        return self._eps is not None

    @property
    def eps_index(self) -> "Ordinal":
        if self._eps is None:
            raise ValueError("not an epsilon atom")
        return self._eps

    def cnf_terms(self) -> Tuple[Tuple["Ordinal", int], ...]:
        """CNF view; an epsilon atom reads as the single term w^eps(k)*1."""
        if self._eps is not None:
            return ((self, 1),)
        return self._terms

    @property
    def is_zero(self) -> bool:
        return self._eps is None and not self._terms

    @property
    def is_finite(self) -> bool:
        t = self.cnf_terms()
        return not t or (len(t) == 1 and t[0][0].is_zero)

    def as_int(self) -> int:
        if not self.is_finite:
            raise ValueError("not a finite ordinal")
        return self._terms[0][1] if self._terms else 0

    @property
    def is_limit(self) -> bool:
        t = self.cnf_terms()
        return bool(t) and not t[-1][0].is_zero

    def leading(self) -> Tuple["Ordinal", int]:
        t = self.cnf_terms()
        if not t:
            raise ValueError("zero ordinal has no leading term")
        return t[0]

    # -- comparisons --------------------------------------------------------

    def _cmp(self, other: "Ordinal") -> int:
        if self is other:
            return EQ
        if self._eps is not None and other._eps is not None:
            return self._eps._cmp(other._eps)
        a, b = self.cnf_terms(), other.cnf_terms()
        for (e1, c1), (e2, c2) in zip(a, b):
            c = e1._cmp(e2)
            if c != EQ:
                return c
            if c1 != c2:
                return LT if c1 < c2 else GT
        if len(a) == len(b):
            return EQ
        return LT if len(a) < len(b) else GT

    def __eq__(self, other):
        return isinstance(other, Ordinal) and self._cmp(other) == EQ

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
            if self._eps is not None:
                self._hash = hash(("eps", self._eps))
            else:
                self._hash = hash(self._terms)
        return self._hash

    def __repr__(self):
        return "Ordinal(%s)" % format_ordinal(self)

    def __str__(self):
        return format_ordinal(self)

    def __bool__(self):
        return not self.is_zero


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return Ordinal(((ZERO, n),)) if n else ZERO


def eps(k) -> Ordinal:
    """The k-th epsilon number as an atom; k may be an int or an Ordinal."""
    if isinstance(k, int):
        k = from_int(k)
    return Ordinal(eps=k)


def _make(terms) -> Ordinal:
    # normalize w^eps(k)*1 -> eps(k)
    terms = tuple(terms)
    if len(terms) == 1 and terms[0][1] == 1 and terms[0][0].is_eps_atom:
        return terms[0][0]
    return Ordinal(terms)


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: one of LT, EQ, GT."""
    return a._cmp(b)


# -- ordinary arithmetic -----------------------------------------------------

def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinary (non-commutative) ordinal sum."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    at, bt = a.cnf_terms(), b.cnf_terms()
    lead = bt[0][0]
    keep = []
    merged = False
    for e, c in at:
        if e > lead:
            keep.append((e, c))
        elif e == lead:
            keep.append((e, c + bt[0][1]))
            merged = True
            break
        else:
            break
    if merged:
        keep.extend(bt[1:])
    else:
        keep.extend(bt)
    return _make(keep)


def ord_sum(items: Iterable[Ordinal]) -> Ordinal:
    acc = ZERO
    for x in items:
        acc = ord_add(acc, x)
    return acc


def ord_left_sub(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique c with a + c == b (requires a <= b)."""
    if a > b:
        raise DomainError("left subtraction needs a <= b")
    at, bt = a.cnf_terms(), b.cnf_terms()
    i = 0
    while i < len(at) and i < len(bt) and at[i] == bt[i]:
        i += 1
    if i == len(at):
        return _make(bt[i:])
    # first difference: either exponents differ or coefficients do
    ea, ca = at[i]
    eb, cb = bt[i]
    if ea == eb and ca < cb:
        return _make(((eb, cb - ca),) + bt[i + 1:])
    # a's term is strictly smaller here, so b's tail from i absorbs the rest
    return _make(bt[i:])


def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinary (non-commutative) ordinal product."""
    if a.is_zero or b.is_zero:
        return ZERO
    at = a.cnf_terms()
    e0, c0 = at[0]
    out = ZERO
    for f, d in b.cnf_terms():
        if f.is_zero:
            piece = _make(((e0, c0 * d),) + at[1:])
        else:
            piece = _make(((ord_add(e0, f), d),))
        out = ord_add(out, piece)
    return out


def ord_pow_omega(a: Ordinal) -> Ordinal:
    """w^a in canonical form (w^eps(k) collapses to eps(k))."""
    if a.is_eps_atom:
        return a
    return _make(((a, 1),))


def ord_pow(base: Ordinal, e: Ordinal) -> Ordinal:
    """base^e for base >= 1; enough for canonical sequences and bounds."""
    if base.is_zero:
        raise DomainError("0^e not supported")
    if e.is_zero:
        return ONE
    if base == ONE:
        return ONE
    if base.is_finite:
        n = base.as_int()
        if e.is_finite:
            return from_int(n ** e.as_int())
        # n^e for infinite e: n^(w^c*k + rest) = w^(w^(c-1)*k...) pattern;
        # only the w-power case is ever needed here.
        raise DomainError("finite^infinite not supported")
    lead_e, lead_c = base.leading()
    if e.is_finite:
        out = ONE
        for _ in range(e.as_int()):
            out = ord_mul(out, base)
        return out
    # base^(lim + n) = w^(g*lim) * base^n where g is base's leading exponent
    fin = e.cnf_terms()[-1][1] if not e.is_limit else 0
    lim = _make(tuple((x, c) for x, c in e.cnf_terms() if not x.is_zero))
    out = ord_pow_omega(ord_mul(lead_e, lim))
    for _ in range(fin):
        out = ord_mul(out, base)
    return out


def ord_pred(a: Ordinal) -> Ordinal:
    """Predecessor of a successor ordinal."""
    t = a.cnf_terms()
    if not t or not t[-1][0].is_zero:
        raise DomainError("not a successor ordinal")
    e, c = t[-1]
    if c > 1:
        return _make(t[:-1] + ((e, c - 1),))
    return _make(t[:-1])


def ord_div_pow_omega(a: Ordinal, k: Ordinal) -> Tuple[Ordinal, Ordinal]:
    """Write a = w^k * q + r with r < w^k; returns (q, r)."""
    q_terms, r_terms = [], []
    for e, c in a.cnf_terms():
        if e >= k:
            q_terms.append((ord_left_sub(k, e), c))
        else:
            r_terms.append((e, c))
    return _make(q_terms), _make(r_terms)


def ord_div_omega(a: Ordinal) -> Tuple[Ordinal, int]:
    """Write a = w*q + n with n finite; returns (q, n)."""
    q_terms = []
    n = 0
    for e, c in a.cnf_terms():
        if e.is_zero:
            n = c
        else:
            # w^e = w * w^e' with 1 + e' = e
            ep = ord_left_sub(ONE, e)
            q_terms.append((ep, c))
    return _make(q_terms), n


# -- natural (Hessenberg) arithmetic ----------------------------------------

def nat_add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Hessenberg sum: merge the CNFs termwise."""
    coeffs = {}
    order = []
    for e, c in a.cnf_terms() + b.cnf_terms():
        if e not in coeffs:
            coeffs[e] = 0
            order.append(e)
        coeffs[e] += c
    order.sort(key=_SortKey, reverse=True)
    return _make(tuple((e, coeffs[e]) for e in order))


def nat_sum(items: Iterable[Ordinal]) -> Ordinal:
    acc = ZERO
    for x in items:
        acc = nat_add(acc, x)
    return acc


def nat_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Hessenberg product: convolve CNFs, adding exponents naturally."""
    if a.is_zero or b.is_zero:
        return ZERO
    coeffs = {}
    for e1, c1 in a.cnf_terms():
        for e2, c2 in b.cnf_terms():
            e = nat_add(e1, e2)
            coeffs[e] = coeffs.get(e, 0) + c1 * c2
    order = sorted(coeffs, key=_SortKey, reverse=True)
    return _make(tuple((e, coeffs[e]) for e in order))


class _SortKey:
    __slots__ = ("o",)

    def __init__(self, o):
        self.o = o

    def __lt__(self, other):
        return self.o < other.o


# -- predicates --------------------------------------------------------------

def is_additive(a: Ordinal) -> bool:
    """a = w^b for some b (additively indecomposable, a > 0)."""
    t = a.cnf_terms()
    return len(t) == 1 and t[0][1] == 1 and not a.is_zero


def is_multiplicative(a: Ordinal) -> bool:
    """a = w^(w^b) and a > 1."""
    if a == ONE or not is_additive(a):
        return False
    return is_additive(a.cnf_terms()[0][0])


def is_epsilon(a: Ordinal) -> bool:
    return not a.is_zero and ord_pow_omega(a) == a


# -- canonical sequences of epsilon numbers ----------------------------------

def gamma_length(lam: Ordinal) -> Ordinal:
    """Length of the canonical sequence defining the epsilon number lam."""
    if not is_epsilon(lam):
        raise NotEpsilon(str(lam))
    k = lam.eps_index
    if k.is_zero:
        return OMEGA
    if k.is_limit:
        return k
    return OMEGA


def canonical_sequence(lam: Ordinal, k: int) -> Ordinal:
    """k-th element of the canonical sequence with supremum lam."""
    if not is_epsilon(lam):
        raise NotEpsilon(str(lam))
    if k < 0:
        raise IndexBeyondGamma(str(k))
    idx = lam.eps_index
    if idx.is_zero:
        e = OMEGA
        for _ in range(k):
            e = ord_pow_omega(e)
        return e
    if idx.is_limit:
        if from_int(k) >= gamma_length(lam):
            raise IndexBeyondGamma(str(k))
        return eps(from_int(k))
    # successor index: towers over the previous epsilon number
    prev = eps(ord_pred(idx))
    e = prev
    for _ in range(k):
        e = ord_pow(prev, e)
    return e


# -- order-type bound calculus (section-2 toolbox) ----------------------------

def _primed(b: Ordinal) -> Ordinal:
    return ord_add(b, ONE) if is_epsilon(b) else b


def hat(a: Ordinal) -> Ordinal:
    """Exponent-wise primed CNF: bump every epsilon-number exponent by one."""
    # priming can collide exponents (eps+1 next to an eps), so merge naturally
    out = ZERO
    for e, c in a.cnf_terms():
        out = nat_add(out, _make(((_primed(e), c),)))
    return out


def union_bound(a: Ordinal, b: Ordinal) -> Ordinal:
    """Order type of A u B is at most a (+) b (natural sum)."""
    return nat_add(a, b)


def sum_bound(a: Ordinal, b: Ordinal) -> Ordinal:
    """Order type of A + B is at most a (x) b (natural product)."""
    return nat_mul(a, b)


def monoid_bound(a: Ordinal) -> Ordinal:
    """Order type of the monoid generated by a positive set of type a."""
    if a.is_zero:
        return ONE
    return ord_pow_omega(hat(a))


def _eps_plus_finite(a: Ordinal) -> bool:
    t = a.cnf_terms()
    if not t or not t[0][0].is_eps_atom or t[0][1] != 1:
        return False
    rest = t[1:]
    return not rest or (len(rest) == 1 and rest[0][0].is_zero)


def finseq_bound(a: Ordinal) -> Ordinal:
    """Bound on the order type of finite sequences over a set of type a >= 1."""
    if a.is_zero:
        raise DomainError("finseq_bound needs a >= 1")
    if a.is_finite:
        return ord_pow_omega(ord_pow_omega(from_int(a.as_int() - 1)))
    if _eps_plus_finite(a) or a.is_eps_atom:
        return ord_pow_omega(ord_pow_omega(ord_add(a, ONE)))
    return ord_pow_omega(ord_pow_omega(a))


# -- printing -----------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if a.is_zero:
        return "0"
    if a.is_eps_atom:
        return "eps(%s)" % format_ordinal(a.eps_index)
    parts = []
    for e, c in a.cnf_terms():
        if e.is_zero:
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite or e.is_eps_atom or e == OMEGA:
            base = "w^%s" % format_ordinal(e)
        else:
            base = "w^(%s)" % format_ordinal(e)
        parts.append(base if c == 1 else "%s*%d" % (base, c))
    return " + ".join(parts)
