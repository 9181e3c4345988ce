"""Exact real constants of the form q + sum_p a_p*log(p), p prime.

Equality is decided symbolically (1 and the log p are linearly independent
over Q), order by refining rational enclosures of log p until the sign of a
nonzero value separates from zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .errors import (DivisionByZero, ExpOfIrrationalConstant,
                     NonRepresentableConstant)


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division; n >= 1."""
    if n < 1:
        raise ValueError("need n >= 1")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _log_bounds(p: int, terms: int) -> Tuple[Fraction, Fraction]:
    """Rational enclosure of log p via 2*artanh((p-1)/(p+1))."""
    t = Fraction(p - 1, p + 1)
    t2 = t * t
    acc = Fraction(0)
    power = t
    for k in range(terms):
        acc += power / (2 * k + 1)
        power *= t2
    lo = 2 * acc
    # geometric tail bound: remaining sum < t^(2K+1)/((2K+1)(1-t^2))
    tail = 2 * power / ((2 * terms + 1) * (1 - t2))
    return lo, lo + tail


class Constant:
    """Immutable exact constant q + sum a_p log p."""

    __slots__ = ("q", "logs", "_hash")

    def __init__(self, q=0, logs=None):
        self.q = Fraction(q)
        clean = {}
        if logs:
            for p, a in logs.items():
                a = Fraction(a)
                if a:
                    clean[int(p)] = a
        self.logs = dict(sorted(clean.items()))
        self._hash = None

    # -- ring-ish structure (products only against rationals) ---------------

    def __add__(self, other):
        other = as_constant(other)
        logs = dict(self.logs)
        for p, a in other.logs.items():
            logs[p] = logs.get(p, 0) + a
        return Constant(self.q + other.q, logs)

    def __neg__(self):
        return Constant(-self.q, {p: -a for p, a in self.logs.items()})

    def __sub__(self, other):
        return self + (-as_constant(other))

    def __mul__(self, other):
        other = as_constant(other)
        if not other.logs:
            r = other.q
            return Constant(self.q * r, {p: a * r for p, a in self.logs.items()})
        if not self.logs:
            return other * self
        raise NonRepresentableConstant("product of two log-bearing constants")

    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self) -> "Constant":
        if self.logs:
            raise NonRepresentableConstant("inverse of a log-bearing constant")
        if not self.q:
            raise DivisionByZero("constant 0 has no inverse")
        return Constant(1 / self.q)

    # -- order ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.q and not self.logs

    @property
    def is_rational(self) -> bool:
        return not self.logs

    def sign(self) -> int:
        """Exact sign; refines log enclosures until 0 is excluded."""
        if not self.logs:
            return (self.q > 0) - (self.q < 0)
        terms = 4
        while True:
            lo = hi = self.q
            for p, a in self.logs.items():
                l, h = _log_bounds(p, terms)
                if a > 0:
                    lo, hi = lo + a * l, hi + a * h
                else:
                    lo, hi = lo + a * h, hi + a * l
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            terms *= 2
            if terms > 1 << 16:
                raise NonRepresentableConstant(
                    "sign refinement did not converge for %r" % self)

    def __eq__(self, other):
        if not isinstance(other, (Constant, int, Fraction)):
            return NotImplemented
        other = as_constant(other)
        return self.q == other.q and self.logs == other.logs

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return self == as_constant(other) or self < other

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return self == as_constant(other) or self > other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, tuple(self.logs.items())))
        return self._hash

    @property
    def is_pm_one(self) -> bool:
        return not self.logs and self.q in (1, -1)

    def float(self) -> float:
        import math
        return float(self.q) + sum(float(a) * math.log(p)
                                   for p, a in self.logs.items())

    # -- exp/ln fragments ------------------------------------------------------

    def exp_exact(self) -> "Constant":
        """exp of the constant when it lands back in the field: q = 0 and all
        log coefficients integral (value prod p^{a_p})."""
        if self.q != 0:
            raise ExpOfIrrationalConstant("nonzero rational part %s" % self.q)
        val = Fraction(1)
        for p, a in self.logs.items():
            if a.denominator != 1:
                raise ExpOfIrrationalConstant("fractional log coefficient")
            val *= Fraction(p) ** a.numerator
        return Constant(val)

    def ln_exact(self) -> "Constant":
        """ln of a positive rational, as a pure log-part constant."""
        if self.logs:
            raise NonRepresentableConstant("ln of a log-bearing constant")
        if self.q <= 0:
            raise NonRepresentableConstant("ln of a non-positive constant")
        logs: Dict[int, Fraction] = {}
        for p, k in factorize(self.q.numerator).items():
            logs[p] = logs.get(p, 0) + k
        for p, k in factorize(self.q.denominator).items():
            logs[p] = logs.get(p, 0) - k
        return Constant(0, logs)

    def pow_rational_exact(self, r: Fraction) -> "Constant":
        """self**r when exactly representable (rational perfect powers)."""
        if self.logs:
            raise NonRepresentableConstant("power of a log-bearing constant")
        if self.q <= 0:
            raise NonRepresentableConstant("power of a non-positive constant")
        r = Fraction(r)
        if r.denominator == 1:
            return Constant(self.q ** r.numerator)
        out = Fraction(1)
        for p, k in list(factorize(self.q.numerator).items()) + \
                [(p, -k) for p, k in factorize(self.q.denominator).items()]:
            e = r * k
            if e.denominator != 1:
                raise NonRepresentableConstant(
                    "%s**%s is not rational" % (self.q, r))
            out *= Fraction(p) ** e.numerator
        return Constant(out)

    def __repr__(self):
        return "Constant(%s)" % format_constant(self)


def as_constant(x) -> Constant:
    if isinstance(x, Constant):
        return x
    return Constant(x)


ZERO = Constant(0)
ONE = Constant(1)


def format_constant(c: Constant) -> str:
    parts = []
    if c.q or not c.logs:
        parts.append(str(c.q))
    for p, a in c.logs.items():
        if a == 1:
            parts.append("log(%d)" % p)
        elif a == -1:
            parts.append("-log(%d)" % p)
        else:
            parts.append("%s*log(%d)" % (a, p))
    out = parts[0]
    for piece in parts[1:]:
        out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return out
