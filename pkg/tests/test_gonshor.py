import random
from fractions import Fraction

import pytest

from surreals import core, ordinal as ordmod
from surreals.core import atom_mono, from_term, make_mono, scale
from surreals.errors import OutsideFragment, UnsupportedExponent
from surreals.gonshor import (
    FRAG_ZERO, FragValue, OmegaForm, exp_omega_form, frag_add,
    frag_from_int, frag_from_ordinal, frag_make, frag_neg, frag_scale,
    frag_to_ordinal, g_closed, h_closed, kappa_omega_form, ln_omega_form,
    mono_to_omega_exponent, omega_power_to_kernel, series_to_omega_terms,
)

W = ordmod.OMEGA
ONEo = ordmod.ONE


def frag_int(n):
    return frag_from_int(n)


def neg_ord(o):
    return frag_neg(frag_from_ordinal(o))


def dyadic_mono(q, b):
    """q * w^(-b) as a FragValue."""
    return frag_make([(Fraction(q), neg_ord(b))])


def test_frag_order_and_roundtrip():
    assert frag_from_ordinal(W) > frag_int(5)
    assert frag_int(0) == FRAG_ZERO
    assert neg_ord(W) < frag_int(0)
    assert frag_to_ordinal(frag_from_ordinal(ordmod.eps(0))) == ordmod.eps(0)
    assert frag_to_ordinal(dyadic_mono(Fraction(1, 2), ordmod.ZERO)) is None
    v = frag_add(frag_from_ordinal(W), frag_int(1))
    assert frag_to_ordinal(v) == ordmod.ord_add(W, ONEo)
    # w^(eps0) collapses to eps0
    assert frag_make([(Fraction(1), frag_from_ordinal(ordmod.eps(0)))]) == \
        FragValue(eps=ordmod.eps(0))


def test_g_examples():
    assert g_closed(frag_int(1)) == frag_int(1)
    assert g_closed(frag_from_ordinal(ordmod.eps(0))) == \
        frag_from_ordinal(ordmod.ord_add(ordmod.eps(0), ONEo))
    # g(2^-1 w^-w) = -w + 1/2
    got = g_closed(dyadic_mono(Fraction(1, 2), W))
    assert got == frag_add(neg_ord(W), frag_make([(Fraction(1, 2), FRAG_ZERO)]))
    assert g_closed(frag_from_ordinal(W)) == frag_from_ordinal(W)
    with pytest.raises(OutsideFragment):
        g_closed(frag_make([(Fraction(3), neg_ord(W))]))


def test_h_examples():
    assert h_closed(FRAG_ZERO) == dyadic_mono(1, ONEo)      # h(0) = w^-1
    assert h_closed(neg_ord(W)) == dyadic_mono(1, ordmod.ord_add(W, ONEo))
    e0 = frag_from_ordinal(ordmod.eps(0))
    assert h_closed(g_closed(e0)) == e0
    with pytest.raises(OutsideFragment):
        h_closed(e0)


def test_h_inverts_g_on_fragment_points():
    rng = random.Random(6)
    pts = [frag_int(1), frag_int(7), frag_from_ordinal(W),
           frag_from_ordinal(ordmod.ord_add(W, ONEo)),
           frag_from_ordinal(ordmod.eps(0)),
           frag_add(frag_from_ordinal(ordmod.eps(0)), frag_int(3))]
    for _ in range(20):
        n = rng.randrange(0, 6)
        b = random.choice([ordmod.ZERO, ONEo, W,
                           ordmod.ord_mul(W, ordmod.from_int(2))])
        pts.append(dyadic_mono(Fraction(1, 2 ** n), b))
    for a in pts:
        assert h_closed(g_closed(a)) == a


def test_g_strictly_increasing_on_chains():
    chain = [frag_int(1), frag_int(2), frag_from_ordinal(W),
             frag_from_ordinal(ordmod.eps(0)),
             frag_add(frag_from_ordinal(ordmod.eps(0)), frag_int(1))]
    imgs = [g_closed(a) for a in chain]
    assert all(x < y for x, y in zip(imgs, imgs[1:]))
    small = [dyadic_mono(Fraction(1, 4), W), dyadic_mono(Fraction(1, 2), W),
             dyadic_mono(1, ONEo), frag_int(1)]
    imgs = [g_closed(a) for a in small]
    assert all(x < y for x, y in zip(imgs, imgs[1:]))


def test_kernel_bridge_atoms():
    # w^(w^-1) = ln w
    lnw = omega_power_to_kernel(dyadic_mono(1, ONEo))
    assert lnw == atom_mono(0, 1)
    # kappa_{-1} = w^(w^(-w))
    assert omega_power_to_kernel(dyadic_mono(1, W)) == atom_mono(-1, 0)
    # w^w = exp w
    assert omega_power_to_kernel(frag_from_ordinal(W)) == atom_mono(0, -1)
    # w^(eps0) = kappa_1
    assert omega_power_to_kernel(frag_from_ordinal(ordmod.eps(0))) == \
        atom_mono(1, 0)
    # w^(w+1) = w * w^w -> exp(w + ln w)
    m = omega_power_to_kernel(frag_add(frag_from_ordinal(W), frag_int(1)))
    expect = make_mono(core.add(core.from_term(1, atom_mono(0, 0)),
                                core.from_term(1, atom_mono(0, 1))))
    assert m == expect


def test_kernel_bridge_inverse():
    samples = [
        dyadic_mono(1, ONEo),
        dyadic_mono(1, W),
        frag_from_ordinal(W),
        frag_from_ordinal(ordmod.eps(0)),
        frag_add(frag_from_ordinal(W), frag_int(2)),
        dyadic_mono(Fraction(1, 2), ordmod.from_int(3)),
        frag_int(1),
        FRAG_ZERO,
    ]
    for e in samples:
        m = omega_power_to_kernel(e)
        assert mono_to_omega_exponent(m) == e


def test_exp_ln_omega_form_examples():
    # exp(w) = w^w
    got = exp_omega_form([(Fraction(1), frag_int(1))])
    assert got == OmegaForm(frag_from_ordinal(W))
    assert got.to_kernel() == core.exp(core.omega())
    # ln w = w^(w^-1)
    lnw = ln_omega_form(OmegaForm(frag_int(1)))
    assert lnw == core.ln(core.omega())
    # ln(w^w) = w
    back = ln_omega_form(OmegaForm(frag_from_ordinal(W)))
    assert back == core.omega()


def test_kappa_omega_form():
    for alpha in [ONEo, ordmod.from_int(2), W]:
        of = kappa_omega_form(alpha)
        d = ordmod.ord_mul(W, alpha)
        assert of == OmegaForm(frag_make([(Fraction(1), neg_ord(d))]))
        assert of.to_kernel() == core.kappa(KIndexNeg(alpha))


def KIndexNeg(alpha):
    from surreals.core import KIndex
    return KIndex(-1, alpha)


def test_series_to_omega_terms():
    x = core.add(core.omega(), core.from_rational(1))
    terms = series_to_omega_terms(x)
    assert terms == [(Fraction(1), frag_int(1)), (Fraction(1), FRAG_ZERO)]
    with pytest.raises(UnsupportedExponent):
        series_to_omega_terms(core.from_term(1, core.TailSum(core.KIndex(0), 1)))


def test_commuting_square():
    # w^(g(a)) built directly vs exp(ln w^(g(a))) through the h-translation
    pts = [frag_int(1), frag_from_ordinal(W), dyadic_mono(Fraction(1, 2), W),
           frag_add(frag_from_ordinal(W), frag_int(1))]
    for a in pts:
        of = exp_omega_form([(Fraction(1), a)])
        direct = of.to_kernel()
        via_exp = core.exp(ln_omega_form(of))
        assert direct == via_exp
