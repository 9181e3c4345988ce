import random

import pytest

from helpers import random_exact_series

from surreals import calculus, core, fields, ordinal as ordmod
from surreals.core import KIndex, TailSum
from surreals.fields import FragmentSpec, closure_probe, gamma_member

w = core.omega()


def test_spec_bounds():
    s0 = FragmentSpec(0)
    assert s0.lower == ordmod.OMEGA and s0.upper == ordmod.eps(0)
    s2 = FragmentSpec(2)
    assert s2.lower == ordmod.eps(1) and s2.upper == ordmod.eps(2)


def test_gamma_member_examples():
    # w at level 1: NR(exp w) = 0 < eps_0
    assert gamma_member(w, FragmentSpec(1))
    # the full tail sum has rank w, not < w: fails at level 0
    ts = core.from_term(1, TailSum(KIndex(0), 1))
    assert not gamma_member(ts, FragmentSpec(0))
    assert gamma_member(ts, FragmentSpec(1))
    assert gamma_member(core.ZERO, FragmentSpec(0))


def test_gamma_member_monotone_in_level():
    rng = random.Random(23)
    for _ in range(25):
        x = random_exact_series(rng, depth=2, max_terms=2)
        big, _, _ = core.decompose(x)
        if big.is_zero:
            continue
        results = [bool(gamma_member(big, FragmentSpec(n))) for n in (0, 1, 2)]
        for a, b in zip(results, results[1:]):
            assert (not a) or b


def test_kappa_hypotheses():
    for n in (0, 1, 2):
        rows = fields.kappa_hypotheses_check(FragmentSpec(n))
        assert all(ok for _, ok in rows), rows


def test_closure_probe_examples():
    # ln then derive keeps w well inside level 1+2
    rep = closure_probe(w, FragmentSpec(1), 2, seed=3, words=12)
    assert rep.ok and rep.passed > 0
    # the derivative of kappa_-1 has rank w: fails at level 0, passes at 1
    dk = calculus.derive(core.kappa(-1)).value
    x = core.decompose(core.ln(dk))[0]
    assert not gamma_member(x, FragmentSpec(0))
    assert gamma_member(x, FragmentSpec(1))


def test_closure_probe_seeded_random():
    seeds = [w, core.kappa(-1), core.ln(w), core.exp(core.scale(w, 2))]
    for n in (0, 1):
        for i, s in enumerate(seeds):
            rep = closure_probe(s, FragmentSpec(n), 2, seed=i, words=10)
            assert rep.ok, (n, i, rep.failures)
            assert rep.passed + rep.skipped == 10
