"""Strictification of the span bicategory by paths.

A 1-cell of the strict structure is a path of composable spans; composition is
concatenation, so it is associative and unital as an equality of tuples.
Evaluation sends a path to its left-bracketed weak composite.  A bracketing is
a binary tree over leaf indices: ``(L, R)`` denotes ``eval(R) . eval(L)``, so
the apex elements of an evaluated term have the same nesting as the term.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..errors import FeetMismatch
from ..report import LawReport
from ..setlogic import Context
from .spans import (
    SpanCell,
    SpanMorphism,
    associator,
    horizontal,
    identity_cell,
    identity_span,
    left_unitor,
    random_span,
    right_unitor,
    span_compose,
    vertical,
)


@dataclass(frozen=True)
class PathCell:
    foot: Context  # source foot; needed for the empty path
    cells: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        at = self.foot
        for i, c in enumerate(self.cells):
            if c.left != at:
                raise FeetMismatch(f"generator {i} does not start where the path is")
            at = c.right

    @property
    def end(self) -> Context:
        return self.cells[-1].right if self.cells else self.foot

    def __len__(self):
        return len(self.cells)


def identity_path(foot: Context) -> PathCell:
    return PathCell(foot)


def concat(p: PathCell, q: PathCell) -> PathCell:
    """``p`` then ``q``."""
    if p.end != q.foot:
        raise FeetMismatch("paths are not composable")
    return PathCell(p.foot, p.cells + q.cells)


def left_comb(lo: int, hi: int):
    t = lo
    for i in range(lo + 1, hi):
        t = (t, i)
    return t


def evaluate_term(term, cells) -> SpanCell:
    if isinstance(term, int):
        return cells[term]
    left, right = term
    return span_compose(evaluate_term(right, cells), evaluate_term(left, cells))


def evaluate(p: PathCell) -> SpanCell:
    if not p.cells:
        return identity_span(p.foot)
    return evaluate_term(left_comb(0, len(p.cells)), p.cells)


def bracketings(lo: int, hi: int) -> list:
    if hi - lo == 1:
        return [lo]
    out = []
    for mid in range(lo + 1, hi):
        for a in bracketings(lo, mid):
            for b in bracketings(mid, hi):
                out.append((a, b))
    return out


def _steps(term, cells, assoc=associator):
    """Every single re-association ``(A, (B, C)) -> ((A, B), C)`` inside ``term``,
    as ``(new_term, 2-cell eval(term) => eval(new_term))``."""
    if isinstance(term, int):
        return
    left, right = term
    if not isinstance(right, int):
        b, c = right
        yield ((left, b), c), assoc(evaluate_term(c, cells), evaluate_term(b, cells), evaluate_term(left, cells))
    for new, cell in _steps(left, cells, assoc):
        yield (new, right), horizontal(identity_cell(evaluate_term(right, cells)), cell)
    for new, cell in _steps(right, cells, assoc):
        yield (left, new), horizontal(cell, identity_cell(evaluate_term(left, cells)))


def coherence_routes(term, cells, assoc=associator) -> list:
    """The composite 2-cell of every maximal re-association route from
    ``term`` to the left comb."""
    out = []

    def go(t, acc: SpanMorphism):
        moved = False
        for new, cell in _steps(t, cells, assoc):
            moved = True
            go(new, vertical(cell, acc))
        if not moved:
            out.append((t, acc))

    go(term, identity_cell(evaluate_term(term, cells)))
    return out


def check_routes(p: PathCell, assoc=associator) -> LawReport:
    """For every bracketing of ``p``: all routes end at the left comb, each is
    invertible, and all of them are the same 2-cell."""
    rep = LawReport("bracketing coherence")
    n = len(p.cells)
    if n == 0:
        return rep
    comb = left_comb(0, n)
    for term in bracketings(0, n):
        routes = coherence_routes(term, p.cells, assoc)
        rep.tick("routes", len(routes))
        for end, cell in routes:
            rep.tick("route_reaches_normal_form")
            if end != comb:
                rep.fail("route_reaches_normal_form", term)
            rep.tick("route_invertible")
            if not cell.is_invertible():
                rep.fail("route_invertible", term)
        rep.tick("routes_agree")
        if len({cell for _, cell in routes}) != 1:
            rep.fail("routes_agree", term, f"{len({c for _, c in routes})} distinct cells")
    return rep


def canonical_cell(term, cells) -> SpanMorphism:
    """The coherence 2-cell from ``term`` to the left comb (first route)."""
    return coherence_routes(term, cells)[0][1]


def _shift(term, k: int):
    if isinstance(term, int):
        return term + k
    return (_shift(term[0], k), _shift(term[1], k))


def check_strict_laws(p: PathCell, q: PathCell, r: PathCell) -> LawReport:
    """Syntactic associativity/unitality of concatenation, and evaluation of a
    concatenation against the pairwise weak composite."""
    rep = LawReport("strict paths")
    rep.tick("associative")
    if concat(concat(p, q), r) != concat(p, concat(q, r)):
        rep.fail("associative", (p, q, r))
    rep.tick("unital")
    if concat(identity_path(p.foot), p) != p or concat(p, identity_path(p.end)) != p:
        rep.fail("unital", p)
    pq = concat(p, q)
    rep.tick("evaluation_vs_weak_composite")
    weak = span_compose(evaluate(q), evaluate(p))
    if p.cells and q.cells:
        term = (left_comb(0, len(p)), _shift(left_comb(0, len(q)), len(p)))
        cell = canonical_cell(term, pq.cells)
        if cell.source != weak or cell.target != evaluate(pq) or not cell.is_invertible():
            rep.fail("evaluation_vs_weak_composite", (p, q))
    else:
        # one side is empty: the unitor is the canonical cell
        cell = left_unitor(evaluate(p)) if not q.cells else right_unitor(evaluate(q))
        if cell.source != weak or cell.target != evaluate(pq) or not cell.is_invertible():
            rep.fail("evaluation_vs_weak_composite", (p, q))
    return rep


def random_path(rng: random.Random, n: int, max_foot: int = 2, max_apex: int = 2) -> PathCell:
    feet = [Context(tuple(range(rng.randint(1, max_foot)))) for _ in range(n + 1)]
    return PathCell(feet[0], [random_span(rng, feet[i], feet[i + 1], max_apex) for i in range(n)])
