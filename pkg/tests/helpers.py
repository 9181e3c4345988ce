"""Shared test utilities: generators and brute-force oracles."""

import itertools
import random
from fractions import Fraction

from surreals import core, ordinal as ordmod
from surreals.constants import Constant
from surreals.core import Mono, Series, atom_mono, make_mono, make_series


# ---------------------------------------------------------------------------
# random exact series
# ---------------------------------------------------------------------------

def random_exponent(rng, depth, max_terms=2):
    """Random exact purely infinite series (positive leading term)."""
    entries = []
    n = rng.randrange(1, max_terms + 1)
    monos = set()
    while len(entries) < n:
        m = random_infinite_mono(rng, depth - 1)
        if m in monos:
            continue
        monos.add(m)
        c = Fraction(rng.choice([1, -1, 2, -2, 1, 1]))
        entries.append((Constant(c), m))
    s = make_series(entries)
    if not s.terms:
        return core.from_term(1, atom_mono(0, 1))
    if s.terms[0][0].sign() < 0:
        s = core.neg(s)
    return s


def random_infinite_mono(rng, depth):
    if depth <= 0 or rng.random() < 0.5:
        sigma = rng.choice([0, 0, 0, -1])
        level = rng.randrange(0, 3)
        return atom_mono(sigma, level)
    return make_mono(random_exponent(rng, depth))


def random_exact_series(rng, depth=3, max_terms=4, allow_rationals=True):
    entries = []
    n = rng.randrange(1, max_terms + 1)
    monos = set()
    guard = 0
    while len(entries) < n and guard < 50:
        guard += 1
        kind = rng.random()
        if kind < 0.2 and allow_rationals:
            m = core.UNIT
        elif kind < 0.55:
            m = random_infinite_mono(rng, depth - 1)
        else:
            m = make_mono(core.neg(random_exponent(rng, depth - 1))) \
                if rng.random() < 0.5 else random_infinite_mono(rng, depth - 1)
        if m in monos:
            continue
        monos.add(m)
        c = Fraction(rng.choice([1, -1, 2, -3, Fraction(1, 2), 5]))
        entries.append((Constant(c), m))
    s = make_series(entries)
    if s.is_zero:
        return core.omega()
    return s


# ---------------------------------------------------------------------------
# brute-force nested-truncation machinery (sup definition)
# ---------------------------------------------------------------------------

def nested_set(x: Series):
    """All y with y nested-leq x, for exact block-free trees with positive
    purely infinite exponents; includes x and 0."""
    out = {x}
    for k in range(len(x.terms) + 1):
        out.add(Series(x.terms[:k]))
    for k, (c, b) in enumerate(x.terms):
        prefix = x.terms[:k]
        sgn = Constant(1) if c.sign() > 0 else Constant(-1)
        if b.is_unit:
            out.add(Series(prefix + ((sgn, core.UNIT),)))
            continue
        if b.atom is not None:
            # the ln-chain of a log-atomic generator has no proper nested
            # truncations: replacements reproduce the atom itself
            candidates = [core.ln_mono(b)]
        else:
            candidates = [yp for yp in nested_set(core.ln_mono(b))
                          if not yp.is_zero]
        for yp in candidates:
            mono = make_mono(yp)
            out.add(Series(prefix + ((sgn, mono),)))
    return out


def nr_oracle(x: Series, memo=None) -> ordmod.Ordinal:
    """sup{NR(y)+1 : y strictly nested below x, y != 0}."""
    if memo is None:
        memo = {}
    if x in memo:
        return memo[x]
    best = ordmod.ZERO
    for y in nested_set(x):
        if y == x or y.is_zero:
            continue
        v = ordmod.ord_add(nr_oracle(y, memo), ordmod.ONE)
        if v > best:
            best = v
    memo[x] = best
    return best


def enumerate_trees(depth, terms_per_level, coeffs, top=True):
    """All exact term trees of bounded depth/width over the omega atom."""
    if depth == 0:
        yield core.from_term(1, atom_mono(0, 1))
        return
    mono_pool = [atom_mono(0, 1), atom_mono(0, 2)]
    if depth > 1:
        for sub in enumerate_trees(depth - 1, terms_per_level, coeffs, False):
            mono_pool.append(make_mono(sub))
    pool = list(dict.fromkeys(mono_pool))
    for n in range(1, terms_per_level + 1):
        for monos in itertools.combinations(pool, n):
            for cs in itertools.product(coeffs, repeat=n):
                entries = [(Constant(c), m) for c, m in zip(cs, monos)]
                try:
                    s = make_series(entries)
                except Exception:
                    continue
                if s.is_zero:
                    continue
                if not top:
                    # exponents must be purely infinite with positive lead
                    if any(m.is_unit for m in monos):
                        continue
                    if s.terms and s.terms[0][0].sign() < 0:
                        continue
                yield s
