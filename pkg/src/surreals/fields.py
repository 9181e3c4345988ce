"""Desk-scale membership and closure probes for the stable-field example.

The level-n fragment contains the exponents x with NR(exp x) below the
previous epsilon number (eps_{-1} reads as w) and sign-expansion length below
eps_n; stability of the union under exp, ln, derivation and anti-derivation
is probed on random operation words.
"""

from __future__ import annotations

import random
from typing import Callable, List, Optional, Tuple

from . import calculus, core, ordinal as ordmod, rank, signseq
from .core import KIndex, Series
from .errors import DomainError, SurrealError
from .ordinal import Ordinal


class FragmentSpec:
    __slots__ = ("n", "lower", "upper")

    def __init__(self, n: int):
        if n < 0:
            raise DomainError("level must be >= 0")
        self.n = n
        self.lower = ordmod.OMEGA if n == 0 else ordmod.eps(n - 1)
        self.upper = ordmod.eps(n)

    def __repr__(self):
        return "FragmentSpec(n=%d)" % self.n


class MemberWitness:
    __slots__ = ("member", "nr", "length", "reason")

    def __init__(self, member, nr, length, reason=""):
        self.member = member
        self.nr = nr
        self.length = length
        self.reason = reason

    def __bool__(self):
        return self.member

    def __repr__(self):
        return "MemberWitness(%s, NR=%s, len=%r%s)" % (
            self.member, self.nr, self.length,
            ", " + self.reason if self.reason else "")


def gamma_member(x: Series, spec: FragmentSpec) -> MemberWitness:
    """x belongs to the level-n exponent group: NR(exp x) < eps_{n-1} and
    the sign-expansion length of x stays below eps_n."""
    if x.tail is not None:
        x = Series(x.terms)  # judge the listed part of truncated values
    if x.is_zero:
        return MemberWitness(True, ordmod.ZERO,
                             signseq.LengthInfo("Exact", ordmod.ZERO))
    nr = rank.NR(_exp_for_member(x))
    length = signseq.surreal_length(x)
    ok_nr = nr < spec.lower
    ok_len = length.value < spec.upper
    reason = "" if ok_nr and ok_len else \
        ("rank too large" if not ok_nr else "length bound failed")
    return MemberWitness(ok_nr and ok_len, nr, length, reason)


def _exp_for_member(x: Series) -> Series:
    """exp(x) when computable; the rank agrees with the purely infinite part
    otherwise (NR is exp-stable), so fall back to that."""
    try:
        return core.exp(x)
    except SurrealError:
        big, _, _ = core.decompose(x)
        return core.exp(big) if not big.is_zero else core.from_rational(1)


def sample_gammas(spec: FragmentSpec) -> List[Ordinal]:
    """Representable ordinals below eps_n to index kappa generators with."""
    out = [ordmod.ONE, ordmod.from_int(2)]
    if spec.n >= 1:
        out += [ordmod.OMEGA, ordmod.ord_pow_omega(ordmod.OMEGA),
                ordmod.ord_pow_omega(ordmod.ord_pow_omega(ordmod.OMEGA))]
    for k in range(spec.n - 1):
        out.append(ordmod.eps(k))
    return out


def kappa_hypotheses_check(spec: FragmentSpec):
    """The kappa generators below eps_n sit inside the fragment; the one at
    eps_n falls outside and below every member's class."""
    rows = []
    members = []
    for g in sample_gammas(spec):
        x = core.ln(core.kappa(KIndex(-1, g)))
        wit = gamma_member(x, spec)
        rows.append(("kappa(-%s) in level %d" % (g, spec.n), bool(wit)))
        members.append(core.exp(x))
    edge = core.kappa(KIndex(-1, ordmod.eps(spec.n)))
    wit = gamma_member(core.ln(edge), spec)
    rows.append(("kappa(-eps(%d)) outside level %d" % (spec.n, spec.n),
                 not bool(wit)))
    for m in members:
        rows.append(("member class above kappa(-eps(%d))" % spec.n,
                     core.kclass_cmp(m, edge) == core.GT))
    return rows


OPS: List[Tuple[str, Callable[[Series], Series]]] = [
    ("exp", lambda s: core.exp(s)),
    ("ln", lambda s: core.ln(s)),
    ("derive", lambda s: calculus.derive(s).value),
    ("integrate", lambda s: calculus.integrate(s).value),
]


class ProbeReport:
    __slots__ = ("passed", "skipped", "failures")

    def __init__(self):
        self.passed = 0
        self.skipped = 0
        self.failures: List[Tuple[str, str]] = []

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        return "ProbeReport(passed=%d, skipped=%d, failures=%d)" % (
            self.passed, self.skipped, len(self.failures))


def closure_probe(x: Series, spec: FragmentSpec, depth: int,
                  seed: int = 0, words: int = 16) -> ProbeReport:
    """Apply random exp/ln/derive/integrate words and check every
    intermediate stays in the fragment at level n + depth."""
    if depth > 3:
        raise DomainError("probe depth is capped at 3")
    rng = random.Random(seed)
    target = FragmentSpec(spec.n + depth)
    report = ProbeReport()
    for _ in range(words):
        word = [rng.randrange(len(OPS)) for _ in range(rng.randrange(1, depth + 1))]
        cur = x
        desc = "+".join(OPS[i][0] for i in word)
        try:
            for opi in word:
                cur = OPS[opi][1](cur)
                wit = gamma_member(cur, target)
                if not wit:
                    report.failures.append((desc, wit.reason))
                    break
            else:
                report.passed += 1
        except SurrealError:
            report.skipped += 1
    return report
