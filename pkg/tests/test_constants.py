import math
import random
from fractions import Fraction

import pytest

from surreals.constants import Constant, factorize, format_constant
from surreals.errors import ExpOfIrrationalConstant, NonRepresentableConstant


def test_factorize():
    assert factorize(1) == {}
    assert factorize(12) == {2: 2, 3: 1}
    assert factorize(97) == {97: 1}


def test_zero_iff_symbolically_zero():
    assert Constant(0).is_zero
    assert not Constant(0, {2: Fraction(1, 3)}).is_zero
    c = Constant(0, {2: 1}) - Constant(0, {2: 1})
    assert c.is_zero


def test_sign_matches_float_on_random_values():
    rng = random.Random(5)
    for _ in range(200):
        q = Fraction(rng.randrange(-8, 9), rng.randrange(1, 7))
        logs = {p: Fraction(rng.randrange(-5, 6), rng.randrange(1, 4))
                for p in rng.sample([2, 3, 5, 7], rng.randrange(0, 3))}
        c = Constant(q, logs)
        if c.is_zero:
            continue
        approx = c.float()
        if abs(approx) > 1e-9:
            assert c.sign() == (1 if approx > 0 else -1)


def test_order_examples():
    assert Constant(0, {2: 1}) > Constant(0)            # log 2 > 0
    assert Constant(0, {2: 1}) < Constant(1)            # log 2 < 1
    assert Constant(0, {3: 1}) > Constant(1)            # log 3 > 1
    assert Constant(0, {2: 1}) + Constant(0, {3: 1}) == Constant(0, {6: 0, 2: 1, 3: 1})


def test_exp_ln_roundtrip_exact():
    c = Constant(Fraction(8, 3))
    l = c.ln_exact()
    assert l == Constant(0, {2: 3, 3: -1})
    assert l.exp_exact() == c
    with pytest.raises(ExpOfIrrationalConstant):
        Constant(1).exp_exact()
    with pytest.raises(ExpOfIrrationalConstant):
        Constant(0, {2: Fraction(1, 2)}).exp_exact()


def test_pow_rational():
    assert Constant(4).pow_rational_exact(Fraction(1, 2)) == Constant(2)
    assert Constant(Fraction(8, 27)).pow_rational_exact(Fraction(2, 3)) == \
        Constant(Fraction(4, 9))
    with pytest.raises(NonRepresentableConstant):
        Constant(2).pow_rational_exact(Fraction(1, 2))


def test_mul_guard():
    a = Constant(0, {2: 1})
    with pytest.raises(NonRepresentableConstant):
        a * a
    assert a * 3 == Constant(0, {2: 3})


def test_format():
    assert format_constant(Constant(2)) == "2"
    assert format_constant(Constant(0, {2: 1})) == "log(2)"
    assert format_constant(Constant(1, {2: -1})) == "1 - log(2)"
    assert abs(Constant(0, {5: 1}).float() - math.log(5)) < 1e-12
