"""The surreal derivation and its anti-derivation.

The derivative is the sum of path derivatives over the term tree, merged
best-first by magnitude: every frontier entry carries the monomial of the
dominant completion of its unexplored region as an upper bound, siblings
drawn from sum blocks are monotonically decreasing, so a magnitude class can
be emitted exactly once every larger-or-equal entry has been expanded.

The anti-derivation composes the asymptotic term map A (three-case closed
form over u = ln_n kappa_{-alpha}) with the contraction iteration
int = A o sum Phi^i, Phi = id - derive o A.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from . import core, ordinal as ordmod, rank
from .constants import Constant
from .core import KappaBlock, KIndex, LogAtom, Mono, Series, TailSum
from .errors import (ContractionViolated, DomainError, NotLogAtomic,
                     SearchBoundExceeded, TruncatedInput)
from .ordinal import Ordinal

LT, EQ, GT = -1, 0, 1


# ---------------------------------------------------------------------------
# prederivation on log-atomic generators
# ---------------------------------------------------------------------------

def d_logatomic(m: Mono) -> Series:
    """Derivative of a log-atomic generator ln_j kappa_sigma.

    The exponent telescopes to minus the full towers of every kappa class at
    or below sigma's, cut off at level j within sigma's own class.
    """
    if m.atom is None:
        raise NotLogAtomic(repr(m))
    a = m.atom
    entries: List[Tuple[Constant, object]] = []
    if a.sigma.sign > 0:
        # no kappa_{-alpha} lies weakly above a positive class
        if a.level >= 0:
            entries.append((Constant(1), TailSum(a.sigma, a.level + 1)))
        else:
            for i in range(a.level + 1, 1):
                entries.append((Constant(1), Mono(atom=LogAtom(a.sigma, i))))
            entries.append((Constant(1), TailSum(a.sigma, 1)))
    else:
        alpha = a.sigma.mag if a.sigma.sign < 0 else ordmod.ZERO
        if not alpha.is_zero:
            entries.append((Constant(-1), KappaBlock(ordmod.ZERO, alpha)))
        if a.level >= 1:
            for i in range(1, a.level + 1):
                entries.append((Constant(-1), Mono(atom=LogAtom(a.sigma, i))))
        elif a.level < 0:
            for i in range(a.level + 1, 1):
                entries.append((Constant(1), Mono(atom=LogAtom(a.sigma, i))))
    exponent = core.make_series(entries)
    return core.from_term(1, core.make_mono(exponent))


def d_logatomic_mono(atom_mono: Mono) -> Mono:
    return d_logatomic(atom_mono).terms[0][1]


# ---------------------------------------------------------------------------
# path derivatives
# ---------------------------------------------------------------------------

def path_derivative(p: rank.PathHandle) -> Series:
    """The single term P(0)...P(k-1) * D(P(k)), or zero for open paths."""
    if p.terminal != rank.PathHandle.LEAF:
        return core.ZERO
    coeff = Constant(1)
    mono = core.UNIT
    for c, m in p.steps[:-1]:
        coeff = coeff * c
        mono = core.mul_mono(mono, m)
    leaf = p.steps[-1][1]
    mono = core.mul_mono(mono, d_logatomic_mono(leaf))
    return core.from_term(coeff, mono)


def _dominant_tail_mono(c: Constant, m: Mono) -> Optional[Mono]:
    """Monomial of the dominant full completion of a branch entered at the
    term (c, m); None when the branch dies without a log-atomic leaf."""
    prod = core.UNIT
    cur = m
    for _ in range(256):
        if cur.atom is not None:
            return core.mul_mono(prod, d_logatomic_mono(cur))
        if cur.is_unit:
            return None
        level = cur.exponent
        try:
            _, _, child = next(iter(rank.level_terms(level)))
        except StopIteration:
            return None
        prod = core.mul_mono(prod, cur)
        cur = child
    raise DomainError("dominant completion exceeded the depth bound")


class _Done:
    __slots__ = ("ub", "coeff", "mono", "k", "leaf")

    def __init__(self, coeff, mono, k, leaf):
        self.ub = mono
        self.coeff = coeff
        self.mono = mono
        self.k = k
        self.leaf = leaf


class _Node:
    """Unexplored child (peeked) plus the rest of its sibling stream."""

    __slots__ = ("ub", "coeff", "mono", "child", "gen", "depth")

    def __init__(self, coeff, mono, child, gen, depth):
        self.coeff = coeff        # product of coefficients along the prefix
        self.mono = mono          # product of monomials along the prefix
        self.child = child        # (idx, c, m) pending
        self.gen = gen            # iterator over the remaining siblings
        self.depth = depth
        _, c, m = child
        leaf_mono = _dominant_tail_mono(c, m)
        self.ub = None if leaf_mono is None else core.mul_mono(mono, leaf_mono)


class DerivationReport:
    __slots__ = ("value", "paths_used", "bound_checks", "contributions")

    def __init__(self, value, paths_used, bound_checks, contributions):
        self.value = value
        self.paths_used = paths_used
        self.bound_checks = bound_checks
        self.contributions = contributions

    @property
    def holds(self) -> bool:
        return all(ok for _, _, _, ok in self.bound_checks)

    def __repr__(self):
        return "DerivationReport(%r, paths=%d)" % (self.value, self.paths_used)


def _push_node(frontier, coeff, mono, gen, depth):
    child = next(gen, None)
    if child is not None:
        frontier.append(_Node(coeff, mono, child, gen, depth))


_DEPTH_CAP = 64


def derive(x: Series, terms: Optional[int] = None,
           collect_paths: bool = False) -> DerivationReport:
    budget = core._terms_budget(terms)
    frontier: List[object] = []
    _push_node(frontier, Constant(1), core.UNIT, rank.level_terms(x), 0)

    emitted: List[Tuple[Constant, Mono]] = []
    contributions: List[Tuple[Constant, Mono, int]] = []
    paths_used = 0
    leaf_classes: List[KIndex] = []
    max_k = 0
    truncated = False

    while frontier:
        # a dead peeked child (no log-atomic completion) still owns the rest
        # of its sibling stream: skip the child, keep the stream
        dead = [i for i in frontier if i.ub is None]
        if dead:
            for item in dead:
                frontier.remove(item)
                if isinstance(item, _Node):
                    _push_node(frontier, item.coeff, item.mono, item.gen,
                               item.depth)
            continue
        best = None
        for item in frontier:
            if best is None or core.cmp_mono(item.ub, best.ub) == GT or \
                    (core.cmp_mono(item.ub, best.ub) == EQ
                     and isinstance(item, _Node) and isinstance(best, _Done)):
                best = item
        if best is None:
            break
        if isinstance(best, _Node):
            frontier.remove(best)
            idx, c, m = best.child
            # re-arm the sibling stream
            _push_node(frontier, best.coeff, best.mono, best.gen, best.depth)
            coeff = best.coeff * c
            if m.atom is not None and c == Constant(1):
                mono = core.mul_mono(best.mono, d_logatomic_mono(m))
                frontier.append(_Done(coeff, mono, best.depth, m))
                continue
            if best.depth + 1 > _DEPTH_CAP:
                raise DomainError("path depth cap exceeded")
            if m.atom is not None:
                level = core.ln_mono(m)
            elif m.is_unit:
                level = core.ZERO
            else:
                level = m.exponent
            if not level.is_zero:
                _push_node(frontier,
                           coeff, core.mul_mono(best.mono, m),
                           rank.level_terms(level), best.depth + 1)
            continue
        # a complete class: gather every equal-monomial completion
        cls = best.mono
        total = Constant(0)
        for item in list(frontier):
            if isinstance(item, _Done) and item.mono == cls:
                total = total + item.coeff
                frontier.remove(item)
                paths_used += 1
                leaf_classes.append(item.leaf.atom.sigma)
                max_k = max(max_k, item.k)
                if collect_paths:
                    contributions.append((item.coeff, item.mono, item.k))
        if not total.is_zero:
            emitted.append((total, cls))
            if len(emitted) >= budget:
                truncated = True
                break

    marker = emitted[-1][1] if truncated else None
    if x.tail is not None:
        tail_d = _dominant_tail_mono(Constant(1), x.tail)
        if tail_d is None:
            tail_d = x.tail
        marker = core._max_marker(marker, tail_d)
    value = core.make_series(list(emitted), marker)

    bound_checks = _derivative_bounds(x, value, leaf_classes, max_k)
    return DerivationReport(value, paths_used, bound_checks, contributions)


def _min_alpha(leaf_classes: Sequence[KIndex]) -> Ordinal:
    """Least alpha with kappa_{-alpha} strictly below every leaf class."""
    alpha = ordmod.ZERO
    for sigma in leaf_classes:
        if sigma.sign > 0:
            continue
        beta = ordmod.ord_add(sigma.mag if sigma.sign < 0 else ordmod.ZERO,
                              ordmod.ONE)
        if beta > alpha:
            alpha = beta
    return alpha


def _derivative_bounds(x, value, leaf_classes, max_k):
    checks = []
    if x.tail is not None:
        return checks
    nr_x = rank.NR(x)
    if value.tail is None:
        # nu(dx) < w^(w^(w*(NR(x)+1)))
        bound = ordmod.ord_pow_omega(ordmod.ord_pow_omega(
            ordmod.nat_mul(ordmod.OMEGA, ordmod.ord_add(nr_x, ordmod.ONE))))
        actual = core.nu(value)
        checks.append(("nu(dx) < w^w^(w(NR+1))", bound, actual, actual < bound))
    if leaf_classes:
        alpha = _min_alpha(leaf_classes)
        bound = ordmod.nat_add(
            ordmod.nat_mul(ordmod.from_int(max_k),
                           ordmod.nat_add(nr_x, ordmod.ONE)),
            ordmod.nat_mul(ordmod.OMEGA, ordmod.ord_add(alpha, ordmod.ONE)))
        worst = ordmod.ZERO
        for c, b in value.terms:
            if isinstance(b, Mono):
                t = rank.NR(core.Series(((c, b),)))
                if t > worst:
                    worst = t
        checks.append(("NR(dP) <= k(NR+1)+w(alpha+1)", bound, worst,
                       worst <= bound))
    return checks


# ---------------------------------------------------------------------------
# asymptotic anti-derivative
# ---------------------------------------------------------------------------

def _candidate_alphas(m: Mono) -> List[Ordinal]:
    found = {ordmod.ZERO}

    def visit_mono(mm: Mono):
        if mm.atom is not None:
            visit_sigma(mm.atom.sigma)
            return
        if mm.is_unit:
            return
        for _, b in mm.exponent.terms:
            if isinstance(b, TailSum):
                visit_sigma(b.sigma)
            elif isinstance(b, KappaBlock):
                found.add(b.lo)
                found.add(b.hi)
                found.add(ordmod.ord_add(b.hi, ordmod.ONE))
            else:
                visit_mono(b)

    def visit_sigma(sigma: KIndex):
        if sigma.sign > 0:
            return
        beta = sigma.mag if sigma.sign < 0 else ordmod.ZERO
        found.add(beta)
        found.add(ordmod.ord_add(beta, ordmod.ONE))

    visit_mono(m)
    return sorted(found, key=ordmod._SortKey)


def decompose_du_exp_eps(coeff: Constant, m: Mono):
    """Write |term| = d(u) * exp(eps) with u = ln_n kappa_{-alpha} and
    (w*alpha + n) minimal such that eps is not asymptotic to -ln u.

    Returns (alpha, n, eps, u_mono).
    """
    if coeff.sign() < 0:
        coeff = -coeff
    base = core.ln_mono(m)
    if not coeff == Constant(1):
        base = core.add(base, core.from_constant(coeff.ln_exact()
                        if coeff.is_rational else coeff))
    depth_cap = core._tower_depth_mono(m) + 2
    for alpha in _candidate_alphas(m):
        sigma = KIndex(0) if alpha.is_zero else KIndex(-1, alpha)
        for n in range(0, depth_cap + 1):
            u = Mono(atom=LogAtom(sigma, n))
            eps = core.sub(base, core.ln_mono(d_logatomic_mono(u)))
            if not _sim_neg_ln_u(eps, u):
                return alpha, n, eps, u
    raise SearchBoundExceeded(repr(m))


def _sim_neg_ln_u(eps: Series, u: Mono) -> bool:
    """eps ~ -ln u: same leading term with coefficient -1."""
    if not eps.terms:
        return False
    c, b = eps.terms[0]
    if not isinstance(b, Mono):
        b = core.Mono(atom=b.head_atom())
    lnu = Mono(atom=LogAtom(u.atom.sigma, u.atom.level + 1))
    return c == Constant(-1) and b == lnu


def antideriv_term(coeff: Constant, m: Mono,
                   terms: Optional[int] = None) -> Tuple[Constant, Mono]:
    """The asymptotic anti-derivative A on a single term; A(-t) = -A(t)."""
    if coeff.is_zero:
        raise DomainError("A(0) is undefined")
    sign = coeff.sign()
    mag = coeff if sign > 0 else -coeff
    alpha, n, eps, u = decompose_du_exp_eps(mag, m)
    lnu = core.ln_mono(u)
    du = d_logatomic_mono(u)
    cmp_eps = _mag_cmp_series(eps, lnu)
    if cmp_eps == GT:
        # A(t) = t / s with s the leading term of d(eps)
        d_eps = derive(eps, terms=terms)
        if d_eps.value.is_zero or not d_eps.value.terms:
            raise SearchBoundExceeded("d(eps) vanished for %r" % (m,))
        sc, sm = d_eps.value.terms[0]
        out_coeff = mag * sc.inverse()
        out_mono = core.mul_mono(m, core.inv_mono(
            sm if isinstance(sm, Mono) else Mono(atom=sm.head_atom())))
    else:
        r = _coefficient_of(eps, lnu)
        out_coeff = mag * (Constant(1) + r).inverse()
        out_mono = core.mul_mono(core.mul_mono(u, m), core.inv_mono(du))
    if sign < 0:
        out_coeff = -out_coeff
    return out_coeff, out_mono


def _mag_cmp_series(eps: Series, lnu: Series) -> int:
    if not eps.terms:
        return LT
    return core.mag_cmp(eps, lnu)


def _coefficient_of(eps: Series, lnu: Series) -> Constant:
    target = lnu.terms[0][1]
    for c, b in eps.terms:
        if isinstance(b, Mono) and b == target:
            return c
        if isinstance(b, (TailSum, KappaBlock)):
            if Mono(atom=b.head_atom()) == target:
                return c
    return Constant(0)


def A_series(x: Series, terms: Optional[int] = None) -> Series:
    """Strongly linear extension of A, termwise."""
    budget = core._terms_budget(terms)
    if core._has_blocks(x):
        x = core._expand_blocks(x, budget)
    out: List[Tuple[Constant, Mono]] = []
    for c, b in x.terms:
        out.append(antideriv_term(c, b, terms=terms))
    marker = None
    if x.tail is not None:
        _, am = antideriv_term(Constant(1), x.tail, terms=terms)
        marker = am
    return core.make_series(out, marker)


def phi(x: Series, terms: Optional[int] = None) -> Series:
    """Phi = id - derive o A."""
    return core.sub(x, derive(A_series(x, terms=terms), terms=terms).value)


class IntegrationReport:
    __slots__ = ("value", "iterations", "exact")

    def __init__(self, value, iterations, exact):
        self.value = value
        self.iterations = iterations
        self.exact = exact

    def __repr__(self):
        return "IntegrationReport(%r, iters=%d, exact=%r)" % (
            self.value, self.iterations, self.exact)


def integrate(x: Series, max_iter: int = 64,
              terms: Optional[int] = None) -> IntegrationReport:
    """Anti-derivative A(sum Phi^i x); exact when the iteration terminates."""
    budget = core._terms_budget(terms)
    if x.is_zero and x.exact:
        return IntegrationReport(core.ZERO, 0, True)
    acc = core.ZERO
    cur = x
    iterations = 0
    exact = True
    cutoff: Optional[Mono] = None
    while iterations < max_iter:
        acc = core.add(acc, cur)
        distinct = [b for _, b in acc.terms]
        if len(distinct) >= budget:
            cutoff = core._body_head_mono(acc.terms[budget - 1][1])
        nxt = phi(cur, terms=terms)
        iterations += 1
        if (nxt.is_zero and nxt.exact) or (not nxt.terms and nxt.tail is None):
            break
        if not nxt.terms:
            exact = False
            break
        lead_next = core._body_head_mono(nxt.terms[0][1])
        lead_cur = core._body_head_mono(cur.terms[0][1]) if cur.terms else None
        if lead_cur is not None and core.cmp_mono(lead_next, lead_cur) != LT:
            raise ContractionViolated("%r -> %r" % (cur, nxt))
        if cutoff is not None and core.cmp_mono(lead_next, cutoff) == LT:
            exact = False
            acc = core.make_series(list(acc.terms),
                                   core._max_marker(acc.tail, lead_next))
            break
        cur = nxt
    else:
        exact = False
        lead = core._body_head_mono(cur.terms[0][1]) if cur.terms else cur.tail
        acc = core.make_series(list(acc.terms),
                               core._max_marker(acc.tail, lead))
    if acc.tail is not None:
        exact = False
    return IntegrationReport(A_series(acc, terms=terms), iterations, exact)
