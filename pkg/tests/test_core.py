import random
from fractions import Fraction

import pytest

from surreals import core
from surreals.constants import Constant
from surreals.core import (
    EQ, GT, LT, UNKNOWN, KappaBlock, KIndex, LogAtom, Mono, Series, TailSum,
    add, atom_mono, cmp, cmp_mono, decompose, div, exp, expand, from_rational,
    from_term, inv, is_log_atomic, kappa, kclass_cmp, kindex, lam, ln,
    logclass_cmp, make_mono, make_series, mag_cmp, mul, neg, nu, omega,
    omega_pow, pow_rat, scale, sub,
)
from surreals.errors import (DivisionByZero, ExpOfIrrationalConstant,
                             NonPositiveArgument, PowOfNonPositiveLeading,
                             TruncatedInput)
from surreals import ordinal as ordmod

W = omega()
ONE = from_rational(1)


def series_of(*pairs):
    return make_series([(Constant(c), b) for c, b in pairs])


def test_mono_collapse_and_unit():
    lnw = from_term(1, atom_mono(0, 1))
    assert make_mono(lnw) == atom_mono(0, 0)
    assert make_mono(core.ZERO).is_unit
    assert is_log_atomic(atom_mono(0, -2))
    two_lnw = scale(lnw, 2)
    assert not is_log_atomic(make_mono(two_lnw))


def test_cmp_mono_examples():
    w2 = make_mono(scale(from_term(1, atom_mono(0, 1)), 2))
    assert cmp_mono(atom_mono(0, 0), w2) == LT          # w < w^2
    assert cmp_mono(atom_mono(-1, 0), atom_mono(0, 3)) == LT   # kappa_-1 < ln_3 w
    assert cmp_mono(atom_mono(1, 0), atom_mono(0, -5)) == GT   # kappa_1 > exp_5 w
    assert cmp_mono(atom_mono(0, 2), atom_mono(0, 5)) == GT    # ln_2 w > ln_5 w


def test_cmp_series_examples():
    x = add(ONE, omega_pow(-1))
    assert cmp(x, ONE) == GT
    assert cmp(W, add(W, ONE)) == LT
    assert cmp(W, W) == EQ


def test_add_mul_examples():
    assert add(W, ONE) == series_of((1, atom_mono(0, 0)), (1, core.UNIT))
    prod = mul(add(W, ONE), sub(W, ONE))
    w2 = mul(W, W)
    assert prod == sub(w2, ONE)


def test_mul_against_rational_poly_oracle():
    # polynomials in w with rational coefficients multiply like convolutions
    rng = random.Random(2)
    for _ in range(50):
        xs = {e: Fraction(rng.randrange(-4, 5)) for e in range(4)}
        ys = {e: Fraction(rng.randrange(-4, 5)) for e in range(4)}
        x = series_of(*[(c, make_mono(scale(from_term(1, atom_mono(0, 1)), e)) if e else core.UNIT)
                        for e, c in xs.items() if c])
        y = series_of(*[(c, make_mono(scale(from_term(1, atom_mono(0, 1)), e)) if e else core.UNIT)
                        for e, c in ys.items() if c])
        conv = {}
        for e1, c1 in xs.items():
            for e2, c2 in ys.items():
                conv[e1 + e2] = conv.get(e1 + e2, 0) + c1 * c2
        expected = series_of(*[(c, make_mono(scale(from_term(1, atom_mono(0, 1)), e)) if e else core.UNIT)
                               for e, c in conv.items() if c])
        assert mul(x, y) == expected


def test_inv_geometric():
    x = add(ONE, omega_pow(-1))
    r = inv(x, terms=5)
    # 1 - w^-1 + w^-2 - ... with a tail marker
    expect = core.ZERO
    for k in range(5):
        expect = add(expect, scale(omega_pow(-k), Fraction((-1) ** k)))
    assert r.tail is not None
    for (c1, b1), (c2, b2) in zip(r.terms, expect.terms):
        assert c1 == c2 and b1 == b2
    assert mul(x, inv(x)).terms[0] == (Constant(1), core.UNIT)


def test_inv_exact_monomial():
    assert inv(scale(W, 2)) == scale(omega_pow(-1), Fraction(1, 2))
    with pytest.raises(DivisionByZero):
        inv(core.ZERO)


def test_pow_rat():
    assert pow_rat(W, 2) == mul(W, W)
    assert pow_rat(W, Fraction(1, 2)) == omega_pow(Fraction(1, 2))
    with pytest.raises(PowOfNonPositiveLeading):
        pow_rat(neg(W), Fraction(1, 2))
    r = pow_rat(add(W, ONE), Fraction(1, 2), terms=4)
    sq = mul(r, r)
    # (w+1) recovered on listed terms
    assert sq.terms[0] == (Constant(1), atom_mono(0, 0))
    assert sq.terms[1] == (Constant(1), core.UNIT)


def test_decompose_examples():
    x = add(add(W, from_rational(2)), omega_pow(-1))
    big, const, small = decompose(x)
    assert big == W and const == Constant(2) and small == omega_pow(-1)
    big, const, small = decompose(from_rational(5))
    assert big.is_zero and const == Constant(5) and small.is_zero
    lnw2 = ln(scale(W, 2))
    big, const, small = decompose(lnw2)
    assert big == from_term(1, atom_mono(0, 1))
    assert const == Constant(0, {2: 1})
    assert small.is_zero


def test_exp_examples():
    assert exp(core.ZERO) == ONE
    e = exp(omega_pow(-1), terms=4)
    assert e.terms[0] == (Constant(1), core.UNIT)
    assert e.terms[1] == (Constant(1), omega_pow(-1).terms[0][1])
    assert e.terms[2][0] == Constant(Fraction(1, 2))
    assert exp(ln(W)) == W
    with pytest.raises(ExpOfIrrationalConstant):
        exp(ONE)
    with pytest.raises(TruncatedInput):
        exp(Series((W.terms[0],), tail=W.terms[0][1]))


def test_ln_examples():
    assert ln(W) == from_term(1, atom_mono(0, 1))
    assert ln(scale(W, 2)) == add(from_term(1, atom_mono(0, 1)),
                                  from_term(Constant(0, {2: 1}), core.UNIT))
    r = ln(add(ONE, omega_pow(-1)), terms=4)
    assert r.terms[0] == (Constant(1), omega_pow(-1).terms[0][1])
    assert r.terms[1][0] == Constant(Fraction(-1, 2))
    with pytest.raises(NonPositiveArgument):
        ln(neg(W))


def test_exp_ln_roundtrip_small():
    rng = random.Random(4)
    for _ in range(30):
        coeffs = [Fraction(rng.randrange(-3, 4)) for _ in range(2)]
        x = core.ZERO
        for k, c in enumerate(coeffs):
            if c:
                x = add(x, scale(omega_pow(-(k + 1)), c))
        y = exp(x, terms=6)
        back = ln(y, terms=6)
        for (c1, b1), (c2, b2) in zip(back.terms, x.terms):
            assert c1 == c2 and b1 == b2


def test_mag_and_class_comparisons():
    assert mag_cmp(scale(W, 3), W) == EQ
    assert mag_cmp(W, mul(W, W)) == LT
    assert logclass_cmp(ln(W), W) == LT
    assert logclass_cmp(mul(W, W), W) == EQ
    five = from_term(1, atom_mono(0, 5))
    assert kclass_cmp(five, W) == EQ
    assert kclass_cmp(kappa(-1), W) == LT
    assert logclass_cmp(kappa(-1), W) == LT


def test_kappa_lam():
    assert kappa(0) == W
    assert lam(-1, ordmod.ord_mul(ordmod.OMEGA, ordmod.from_int(2))) == kappa(-2)
    assert lam(-1, ordmod.ord_add(ordmod.OMEGA, ordmod.from_int(3))) == \
        from_term(1, atom_mono(-1, 3))
    assert lam(1, ordmod.from_int(2)) == from_term(1, atom_mono(0, -2))
    assert lam(1, ordmod.ord_add(ordmod.OMEGA, ordmod.ONE)) == \
        from_term(1, atom_mono(1, -1))


def test_nu_and_expand():
    assert nu(add(W, ONE)) == ordmod.from_int(2)
    ts = from_term(1, TailSum(KIndex(0), 1))
    assert nu(ts) == ordmod.OMEGA
    kb = from_term(1, KappaBlock(ordmod.ZERO, ordmod.from_int(2)))
    assert nu(kb) == ordmod.ord_mul(ordmod.OMEGA, ordmod.from_int(2))
    atoms, rest = expand(TailSum(KIndex(0), 1), 2)
    assert [a.level for a in atoms] == [1, 2]
    assert rest == [TailSum(KIndex(0), 3)]
    atoms, rest = expand(KappaBlock(ordmod.ZERO, ordmod.from_int(2)), 2)
    assert [a.level for a in atoms] == [1, 2]
    assert rest[0] == TailSum(KIndex(0), 3)
    assert rest[1] == TailSum(KIndex(-1, ordmod.ONE), 1)


def test_block_normalization():
    # ln w + tail(0,2) fuses into tail(0,1)
    fused = make_series([(Constant(1), Mono(atom=LogAtom(KIndex(0), 1))),
                         (Constant(1), TailSum(KIndex(0), 2))])
    assert fused == make_series([(Constant(1), TailSum(KIndex(0), 1))])
    # tail(0,1) + kblock starting at class 1 fuses into a kblock from 0
    two = ordmod.from_int(2)
    fused2 = make_series([(Constant(1), TailSum(KIndex(0), 1)),
                          (Constant(1), KappaBlock(ordmod.ONE, ordmod.OMEGA))])
    assert fused2 == make_series([(Constant(1), KappaBlock(ordmod.ZERO, ordmod.OMEGA))])
    # overlapping tails with different coefficients split exactly
    mixed = make_series([(Constant(1), TailSum(KIndex(0), 1)),
                         (Constant(2), TailSum(KIndex(0), 3))])
    assert mixed.terms[0] == (Constant(1), Mono(atom=LogAtom(KIndex(0), 1)))
    assert mixed.terms[1] == (Constant(1), Mono(atom=LogAtom(KIndex(0), 2)))
    assert mixed.terms[2] == (Constant(3), TailSum(KIndex(0), 3))
    # subtraction cancels a shared block exactly
    assert sub(fused, fused).is_zero


def test_tailsum_minus_prefix():
    # tail(0,1) - ln w = tail(0,2)
    t = sub(from_term(1, TailSum(KIndex(0), 1)), from_term(1, atom_mono(0, 1)))
    assert t == from_term(1, TailSum(KIndex(0), 2))


def test_field_axioms_random_exact():
    rng = random.Random(9)

    def rnd_series():
        t = []
        for e in rng.sample(range(-3, 4), rng.randrange(1, 4)):
            c = Fraction(rng.randrange(-5, 6))
            if c:
                t.append((c, make_mono(scale(from_term(1, atom_mono(0, 1)), e))
                          if e else core.UNIT))
        return series_of(*t) if t else core.ZERO

    for _ in range(60):
        a, b, c = rnd_series(), rnd_series(), rnd_series()
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert add(a, neg(a)).is_zero


def test_unknown_on_truncated_agreement():
    x = inv(add(ONE, omega_pow(-1)), terms=3)
    y = inv(add(ONE, omega_pow(-1)), terms=3)
    assert cmp(x, y) == UNKNOWN


def test_tail_soundness_shadow():
    # recompute at double precision: every dropped term must sit below the
    # coarse marker
    rng = random.Random(21)
    for _ in range(20):
        c = Fraction(rng.randrange(1, 5))
        x = add(ONE, scale(omega_pow(-1), c))
        coarse = inv(x, terms=4)
        fine = inv(x, terms=8)
        marker = coarse.tail
        listed = {b for _, b in coarse.terms}
        for _, b in fine.terms:
            if b not in listed:
                assert cmp_mono(b, marker) == LT
