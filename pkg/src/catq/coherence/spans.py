"""The bicategory of spans of finite sets.

A span ``X <- S -> Y`` is a 1-cell X -> Y.  ``span_compose(s, t)`` is ``s . t``
(t first): its apex is the set of pairs ``(t_elem, s_elem)`` whose middle legs
agree, in lexicographic order.  2-cells are maps of apexes commuting with both
legs.  Associators and unitors re-nest apex tuples; the laws are checked by
evaluating both sides as explicit maps.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from ..errors import FeetMismatch, GridMismatch, MalformedInput
from ..report import LawReport
from ..setlogic import Context


@dataclass(frozen=True, eq=False)
class SpanCell:
    left: Context
    right: Context
    apex: Context
    lleg: dict
    rleg: dict

    def __post_init__(self):
        for leg, foot, side in ((self.lleg, self.left, "left"), (self.rleg, self.right, "right")):
            if set(leg) != set(self.apex.elements):
                raise MalformedInput(f"{side} leg is not total on the apex")
            for x, v in leg.items():
                if v not in foot.index:
                    raise MalformedInput(f"{side} leg sends {x!r} outside its foot")

    @property
    def feet(self) -> tuple:
        return self.left, self.right

    def key(self) -> tuple:
        a = self.apex.elements
        return (
            self.left.elements,
            self.right.elements,
            a,
            tuple(self.lleg[x] for x in a),
            tuple(self.rleg[x] for x in a),
        )

    def __eq__(self, other):
        return isinstance(other, SpanCell) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        pairs = ", ".join(f"{x!r}:{self.lleg[x]!r}->{self.rleg[x]!r}" for x in self.apex.elements)
        return f"Span({pairs})"


@dataclass(frozen=True, eq=False)
class SpanMorphism:
    """A 2-cell ``source => target``: an apex map commuting with both legs."""

    source: SpanCell
    target: SpanCell
    mapping: dict

    def __post_init__(self):
        if self.source.feet != self.target.feet:
            raise FeetMismatch("2-cell between spans with different feet")
        s, t = self.source, self.target
        if set(self.mapping) != set(s.apex.elements):
            raise MalformedInput("2-cell is not total on the source apex")
        for x, y in self.mapping.items():
            if y not in t.lleg:
                raise MalformedInput(f"2-cell sends {x!r} outside the target apex")
            if t.lleg[y] != s.lleg[x] or t.rleg[y] != s.rleg[x]:
                raise MalformedInput(f"2-cell does not commute with the legs at {x!r}")

    def key(self) -> tuple:
        return self.source.key(), self.target.key(), tuple(self.mapping[x] for x in self.source.apex.elements)

    def __eq__(self, other):
        return isinstance(other, SpanMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_invertible(self) -> bool:
        return len(set(self.mapping.values())) == len(self.target.apex) == len(self.source.apex)

    def inverse(self) -> SpanMorphism:
        if not self.is_invertible():
            raise MalformedInput("2-cell is not invertible")
        return SpanMorphism(self.target, self.source, {y: x for x, y in self.mapping.items()})


def span(left: Context, right: Context, legs) -> SpanCell:
    """Span whose apex is ``range(len(legs))`` with the given ``(l, r)`` legs."""
    apex = Context(tuple(range(len(legs))))
    return SpanCell(left, right, apex, {i: lr[0] for i, lr in enumerate(legs)}, {i: lr[1] for i, lr in enumerate(legs)})


@lru_cache(maxsize=200_000)
def identity_span(x: Context) -> SpanCell:
    return SpanCell(x, x, x, {e: e for e in x.elements}, {e: e for e in x.elements})


@lru_cache(maxsize=200_000)
def span_compose(s: SpanCell, t: SpanCell) -> SpanCell:
    """``s . t`` for ``t: X -> Y`` and ``s: Y -> Z``."""
    if t.right != s.left:
        raise FeetMismatch("t's right foot differs from s's left foot")
    by_foot: dict = {}
    for b in s.apex.elements:
        by_foot.setdefault(s.lleg[b], []).append(b)
    pairs = tuple((a, b) for a in t.apex.elements for b in by_foot.get(t.rleg[a], ()))
    return SpanCell(
        t.left,
        s.right,
        Context(pairs),
        {p: t.lleg[p[0]] for p in pairs},
        {p: s.rleg[p[1]] for p in pairs},
    )


@lru_cache(maxsize=200_000)
def identity_cell(s: SpanCell) -> SpanMorphism:
    return SpanMorphism(s, s, {x: x for x in s.apex.elements})


def vertical(beta: SpanMorphism, alpha: SpanMorphism) -> SpanMorphism:
    """``beta . alpha``."""
    if alpha.target != beta.source:
        raise GridMismatch("2-cells are not vertically composable")
    return SpanMorphism(alpha.source, beta.target, {x: beta.mapping[y] for x, y in alpha.mapping.items()})


def horizontal(beta: SpanMorphism, alpha: SpanMorphism) -> SpanMorphism:
    """``beta * alpha: s . t => s' . t'`` for ``alpha: t => t'`` and ``beta: s => s'``."""
    if alpha.source.right != beta.source.left:
        raise GridMismatch("2-cells are not horizontally composable")
    src = span_compose(beta.source, alpha.source)
    tgt = span_compose(beta.target, alpha.target)
    return SpanMorphism(src, tgt, {(a, b): (alpha.mapping[a], beta.mapping[b]) for (a, b) in src.apex.elements})


@lru_cache(maxsize=200_000)
def associator(h: SpanCell, g: SpanCell, f: SpanCell) -> SpanMorphism:
    """``(h . g) . f => h . (g . f)``: ``(a, (b, c)) |-> ((a, b), c)``."""
    src = span_compose(span_compose(h, g), f)
    tgt = span_compose(h, span_compose(g, f))
    return SpanMorphism(src, tgt, {(a, (b, c)): ((a, b), c) for (a, (b, c)) in src.apex.elements})


@lru_cache(maxsize=200_000)
def left_unitor(s: SpanCell) -> SpanMorphism:
    """``id . s => s``."""
    src = span_compose(identity_span(s.right), s)
    return SpanMorphism(src, s, {(a, _): a for (a, _) in src.apex.elements})


@lru_cache(maxsize=200_000)
def right_unitor(s: SpanCell) -> SpanMorphism:
    """``s . id => s``."""
    src = span_compose(s, identity_span(s.left))
    return SpanMorphism(src, s, {(_, b): b for (_, b) in src.apex.elements})


def pentagon_sides(k: SpanCell, h: SpanCell, g: SpanCell, f: SpanCell, assoc=associator) -> tuple:
    """The two composite 2-cells ``((k.h).g).f => k.(h.(g.f))``."""
    top = vertical(assoc(k, h, span_compose(g, f)), assoc(span_compose(k, h), g, f))
    bottom = vertical(
        horizontal(identity_cell(k), assoc(h, g, f)),
        vertical(
            assoc(k, span_compose(h, g), f),
            horizontal(assoc(k, h, g), identity_cell(f)),
        ),
    )
    return top, bottom


def triangle_sides(g: SpanCell, f: SpanCell, assoc=associator) -> tuple:
    """``(g * λ_f) . a_{g,id,f}`` and ``ρ_g * f`` as 2-cells ``(g.id).f => g.f``."""
    i = identity_span(f.right)
    lhs = vertical(horizontal(identity_cell(g), left_unitor(f)), assoc(g, i, f))
    rhs = horizontal(right_unitor(g), identity_cell(f))
    return lhs, rhs


# -- exhaustive enumeration ----------------------------------------------------


def spans_up_to_iso(x: Context, y: Context, max_apex: int) -> list:
    """One span per isomorphism class: apexes are sorted multisets of leg pairs."""
    pairs = list(itertools.product(x.elements, y.elements))
    return [span(x, y, combo) for k in range(max_apex + 1) for combo in itertools.combinations_with_replacement(pairs, k)]


def check_coherence(foot_sizes=(1, 2), max_apex: int = 2, assoc=associator) -> LawReport:
    """Pentagon for every composable quadruple and triangle for every pair.

    ``assoc`` replaces the associator (fault injection).
    """
    rep = LawReport("span coherence")
    feet = [Context(tuple(range(n))) for n in foot_sizes]
    table = {(a, b): spans_up_to_iso(feet[a], feet[b], max_apex) for a in range(len(feet)) for b in range(len(feet))}
    idx = range(len(feet))
    for x0, x1, x2 in itertools.product(idx, repeat=3):
        for f in table[(x0, x1)]:
            for g in table[(x1, x2)]:
                rep.tick("triangle")
                lhs, rhs = triangle_sides(g, f, assoc)
                if lhs != rhs:
                    rep.fail("triangle", (g, f))
    for x0, x1, x2, x3, x4 in itertools.product(idx, repeat=5):
        for f in table[(x0, x1)]:
            for g in table[(x1, x2)]:
                for h in table[(x2, x3)]:
                    for k in table[(x3, x4)]:
                        rep.tick("pentagon")
                        top, bottom = pentagon_sides(k, h, g, f, assoc)
                        if top != bottom:
                            rep.fail("pentagon", (k, h, g, f))
    return rep


# -- interchange -----------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """``alpha: t => t'``, ``alpha2: t' => t''`` (X -> Y) and
    ``beta: s => s'``, ``beta2: s' => s''`` (Y -> Z)."""

    alpha: SpanMorphism
    alpha2: SpanMorphism
    beta: SpanMorphism
    beta2: SpanMorphism


def interchange_sides(grid: Grid, hcomp=horizontal) -> tuple:
    if grid.alpha.target != grid.alpha2.source or grid.beta.target != grid.beta2.source:
        raise GridMismatch("columns are not vertically composable")
    if grid.alpha.source.right != grid.beta.source.left:
        raise GridMismatch("rows are not horizontally composable")
    lhs = vertical(hcomp(grid.beta2, grid.alpha2), hcomp(grid.beta, grid.alpha))
    rhs = hcomp(vertical(grid.beta2, grid.beta), vertical(grid.alpha2, grid.alpha))
    return lhs, rhs


def interchange_check(grid: Grid, hcomp=horizontal) -> bool:
    lhs, rhs = interchange_sides(grid, hcomp)
    return lhs == rhs


def random_span(rng: random.Random, x: Context, y: Context, max_apex: int = 3) -> SpanCell:
    n = rng.randint(0, max_apex) if x.elements and y.elements else 0
    return span(x, y, [(rng.choice(x.elements), rng.choice(y.elements)) for _ in range(n)])


def random_cell_into(rng: random.Random, target: SpanCell, max_apex: int = 3) -> SpanMorphism:
    """A random 2-cell ``s => target`` with ``s`` built by pulling legs back."""
    if not target.apex.elements:
        n = 0
    else:
        n = rng.randint(0, max_apex)
    img = [rng.choice(target.apex.elements) for _ in range(n)]
    src = span(target.left, target.right, [(target.lleg[v], target.rleg[v]) for v in img])
    return SpanMorphism(src, target, dict(enumerate(img)))


def random_grid(rng: random.Random, max_foot: int = 2, max_apex: int = 3) -> Grid:
    x, y, z = (Context(tuple(range(rng.randint(1, max_foot)))) for _ in range(3))
    t2 = random_span(rng, x, y, max_apex)
    s2 = random_span(rng, y, z, max_apex)
    alpha2 = random_cell_into(rng, t2, max_apex)
    beta2 = random_cell_into(rng, s2, max_apex)
    alpha = random_cell_into(rng, alpha2.source, max_apex)
    beta = random_cell_into(rng, beta2.source, max_apex)
    return Grid(alpha, alpha2, beta, beta2)


def check_interchange(rng: random.Random, n: int = 100, hcomp=horizontal) -> LawReport:
    rep = LawReport("interchange")
    for i in range(n):
        grid = random_grid(rng)
        rep.tick("interchange")
        if not interchange_check(grid, hcomp):
            rep.fail("interchange", i)
    return rep
