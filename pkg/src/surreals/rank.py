"""Nested truncation relation, nested truncation rank, and term-tree paths.

NR is computed by folding terms in descending order: a new smallest term
r*w^a contributes 1 (+) NR(w^a) (+) [r != +-1 and a != 0] naturally, except
that a limit NR(w^a) is never attained by a nested truncation and therefore
enters by ordinary addition; symbolic sum blocks contribute their term count
the same way.  The sup-style definition is kept in the test suite as a
brute-force oracle for small trees.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple

from . import core, ordinal as ordmod
from .constants import Constant
from .core import KappaBlock, Mono, Series, TailSum
from .errors import (DomainError, InfiniteTree, NoLogAtomicLeaf,
                     TruncatedInput, ZeroArgument)
from .ordinal import Ordinal

LT, EQ, GT = -1, 0, 1


def ell(x: Series) -> Series:
    """Purely infinite part of ln|x|."""
    if x.is_zero:
        raise ZeroArgument("ell(0)")
    if core.series_sign(x) < 0:
        x = core.neg(x)
    big, _, _ = core.decompose(core.ln(x))
    return big


def _term_ell(c: Constant, b) -> Series:
    """ell of a single term; avoids the Mercator tail of a general ln."""
    if isinstance(b, Mono):
        if b.is_unit:
            return core.ZERO
        big, _, _ = core.decompose(core.ln_mono(b))
        return big
    raise InfiniteTree("sum blocks must be expanded before walking")


# ---------------------------------------------------------------------------
# nested truncation relation
# ---------------------------------------------------------------------------

def _require_finite_tree(x: Series):
    if x.tail is not None:
        raise TruncatedInput("nested truncation needs exact input")
    for _, b in x.terms:
        if not isinstance(b, Mono):
            raise InfiniteTree("sum blocks in term tree")
        if b.atom is None and not b.is_unit:
            _require_finite_tree(b.exponent)


def nested_leq(y: Series, x: Series) -> bool:
    """y is a nested truncation of x (non-strict)."""
    _require_finite_tree(x)
    _require_finite_tree(y)
    return _nested_leq(y, x)


def _nested_leq(y: Series, x: Series) -> bool:
    ny, nx = len(y.terms), len(x.terms)
    if ny <= nx and y.terms == x.terms[:ny]:
        return True
    if ny == 0 or ny > nx:
        return False
    k = ny - 1
    if y.terms[:k] != x.terms[:k]:
        return False
    cy, by = y.terms[k]
    cx, bx = x.terms[k]
    if not isinstance(bx, Mono) or bx.is_unit:
        return False
    if not cy.is_pm_one or cy.sign() != cx.sign():
        return False
    if not isinstance(by, Mono):
        return False
    if bx.atom is not None:
        # the ln chain of a log-atomic generator admits no proper truncation
        return by == bx
    return _nested_leq(core.ln_mono(by), core.ln_mono(bx))


def nested_lt(y: Series, x: Series) -> bool:
    return y != x and nested_leq(y, x)


# ---------------------------------------------------------------------------
# nested truncation rank
# ---------------------------------------------------------------------------

def _block_span(b) -> Ordinal:
    if isinstance(b, TailSum):
        return ordmod.OMEGA
    return ordmod.ord_mul(ordmod.OMEGA, ordmod.ord_left_sub(b.lo, b.hi))


def nr_mono(m: Mono) -> Ordinal:
    """NR of a monomial: NR(exp gamma) = NR(gamma)."""
    if m.is_unit or m.atom is not None:
        return ordmod.ZERO
    return NR(m.exponent)


def NR(x: Series) -> Ordinal:
    if x.tail is not None:
        raise TruncatedInput("NR of a truncated series")
    acc: Optional[Ordinal] = None
    for c, b in x.terms:
        if not isinstance(b, Mono):
            span = _block_span(b)
            acc = span if acc is None else ordmod.ord_add(acc, span)
            continue
        r = nr_mono(b)
        ind = ordmod.ZERO if (c.is_pm_one or b.is_unit) else ordmod.ONE
        if acc is None:
            acc = ordmod.nat_add(r, ind)
        elif r.is_limit:
            # a limit rank below is approached, never attained
            acc = ordmod.ord_add(ordmod.ord_add(acc, r), ind)
        else:
            acc = ordmod.nat_add(ordmod.nat_add(acc, ordmod.ONE),
                                 ordmod.nat_add(r, ind))
    return acc if acc is not None else ordmod.ZERO


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

class PathHandle:
    """Finite path prefix through the term tree.

    steps[i] is the term P(i); indices[i] its ordinal position among the
    terms of the parent level, giving the lexicographic order.
    """

    __slots__ = ("steps", "indices", "terminal")

    LEAF = "leaf"
    OPEN = "open"

    def __init__(self, steps, indices, terminal):
        self.steps = tuple(steps)
        self.indices = tuple(indices)
        self.terminal = terminal

    @property
    def k(self) -> int:
        return len(self.steps) - 1

    def leaf_atom(self) -> Mono:
        if self.terminal != PathHandle.LEAF:
            raise DomainError("open path has no leaf")
        return self.steps[-1][1]

    def __repr__(self):
        inner = ", ".join(repr(s) for s in self.steps)
        return "Path[%s|%s]" % (inner, self.terminal)


def _is_leaf_term(c: Constant, b) -> bool:
    return isinstance(b, Mono) and b.atom is not None and c == Constant(1)


def level_terms(parent: Series) -> Iterator[Tuple[Ordinal, Constant, Mono]]:
    """Terms of a level in descending order with ordinal indices; sum blocks
    are expanded lazily."""
    base = ordmod.ZERO
    for c, b in parent.terms:
        if isinstance(b, Mono):
            yield base, c, b
            base = ordmod.ord_add(base, ordmod.ONE)
        else:
            blocks = [b]
            while blocks:
                blk = blocks.pop(0)
                if isinstance(blk, KappaBlock):
                    atoms, rest = core.expand(blk, 1)
                    for a in atoms:
                        yield base, c, Mono(atom=a)
                        base = ordmod.ord_add(base, ordmod.ONE)
                    blocks = rest + blocks
                    continue
                lvl = blk.start
                while True:
                    yield base, c, Mono(atom=core.LogAtom(blk.sigma, lvl))
                    base = ordmod.ord_add(base, ordmod.ONE)
                    lvl += 1


def _children(term: Tuple[Constant, Mono]) -> Series:
    c, b = term
    if b.is_unit:
        return core.ZERO
    return _term_ell(c, b)


def paths(x: Series, limit: Optional[int] = None) -> Iterator[PathHandle]:
    """Enumerate the log-atomic-leaf paths of x in lexicographic order.

    With sum blocks present the enumeration is infinite; pass a limit or
    consume lazily.
    """
    if x.is_zero:
        return
    count = 0

    def dfs(parent: Series, steps, indices):
        nonlocal count
        for idx, c, m in level_terms(parent):
            term = (c, m)
            if _is_leaf_term(c, m):
                yield PathHandle(steps + [term], indices + [idx],
                                 PathHandle.LEAF)
                continue
            child_level = _children(term)
            if child_level.is_zero:
                continue  # dead branch: never reaches a log-atomic leaf
            yield from dfs(child_level, steps + [term], indices + [idx])

    for p in dfs(x, [], []):
        yield p
        count += 1
        if limit is not None and count >= limit:
            return


def dominant_path(x: Series) -> PathHandle:
    """Follow leading terms to a log-atomic leaf."""
    if x.is_zero:
        raise ZeroArgument("dominant path of 0")
    steps: List[Tuple[Constant, Mono]] = []
    indices: List[Ordinal] = []
    level = x
    for _ in range(256):
        idx, c, m = next(iter(level_terms(level)))
        steps.append((c, m))
        indices.append(idx)
        if _is_leaf_term(c, m):
            return PathHandle(steps, indices, PathHandle.LEAF)
        level = _children((c, m))
        if level.is_zero:
            raise NoLogAtomicLeaf("dominant path dies at %r" % (m,))
    raise NoLogAtomicLeaf("dominant path exceeded the depth bound")


def path_lex_cmp(p: PathHandle, q: PathHandle) -> int:
    a, b = p.indices, q.indices
    for x, y in zip(a, b):
        if x != y:
            return LT if x < y else GT
    if len(a) == len(b):
        return EQ
    return LT if len(a) < len(b) else GT
