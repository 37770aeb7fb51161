"""Quantifiers over finite sets: predicates are subsets, reindexing along the
projection Gamma x A -> Gamma is S |-> S x A, and exists/forall are its left and
right adjoints.  The fibers are also materialized as powerset posets so the
generic adjunction engine can check them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable

from .adjunction import Adjunction, LiftedSquare
from .errors import ContextMismatch, MalformedInput, SizeCapExceeded
from .fincat import FinCategory, FinFunctor, Morphism, NatTransform, compose_functors, identity_functor

POWERSET_CAP = 10


@dataclass(frozen=True)
class Context:
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise MalformedInput(f"duplicate atoms in context {self.elements!r}")

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def mask(self, subset: Iterable) -> int:
        m = 0
        for e in subset:
            try:
                m |= 1 << self.index[e]
            except KeyError:
                raise ContextMismatch(f"{e!r} is not in the context") from None
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def ordered(self, subset) -> list:
        return [e for e in self.elements if e in subset]


@dataclass(frozen=True)
class ExtendedContext:
    """``base x fiber`` with its first projection; pairs in lexicographic order."""

    base: Context
    fiber: Context

    @cached_property
    def context(self) -> Context:
        return Context(tuple(itertools.product(self.base.elements, self.fiber.elements)))

    @property
    def elements(self) -> tuple:
        return self.context.elements

    @cached_property
    def projection(self) -> dict:
        return {p: p[0] for p in self.elements}

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Predicate:
    over: object  # Context or ExtendedContext
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        universe = set(self.over.elements)
        stray = [m for m in self.members if m not in universe]
        if stray:
            raise ContextMismatch(f"{stray[0]!r} is not an element of the context")

    def sorted(self) -> list:
        return [e for e in self.over.elements if e in self.members]

    def __repr__(self):
        return "{" + ", ".join(map(_fmt, self.sorted())) + "}"


def _fmt(e):
    if isinstance(e, tuple):
        return "(" + ",".join(map(str, e)) + ")"
    return str(e)


def extend_context(gamma: Context, a: Context) -> ExtendedContext:
    return ExtendedContext(gamma, a)


def pairing(ext: ExtendedContext, f: dict, g: dict) -> dict:
    """The unique ``h`` with both projections of ``h`` equal to ``f`` and ``g``."""
    if set(f) != set(g):
        raise ContextMismatch("pairing needs maps with a common domain")
    return {x: (f[x], g[x]) for x in f}


def reindex(psi: Predicate, ext: ExtendedContext) -> Predicate:
    if psi.over != ext.base:
        raise ContextMismatch("predicate does not live over the base of the extension")
    return Predicate(ext, frozenset((x, a) for x in psi.members for a in ext.fiber.elements))


def _check_over_extension(phi: Predicate) -> ExtendedContext:
    if not isinstance(phi.over, ExtendedContext):
        raise ContextMismatch("quantifiers need a predicate over an extended context")
    return phi.over


def forall(phi: Predicate) -> Predicate:
    ext = _check_over_extension(phi)
    return Predicate(
        ext.base, frozenset(x for x in ext.base.elements if all((x, a) in phi.members for a in ext.fiber.elements))
    )


def exists(phi: Predicate) -> Predicate:
    ext = _check_over_extension(phi)
    return Predicate(
        ext.base, frozenset(x for x in ext.base.elements if any((x, a) in phi.members for a in ext.fiber.elements))
    )


# -- materialized fibers -----------------------------------------------------


@lru_cache(maxsize=32)
def powerset_poset(n: int) -> FinCategory:
    """Subsets of an ``n``-element set as bitmasks ordered by inclusion.

    Morphism ids follow (source mask, target mask) order.
    """
    full = (1 << n) - 1
    mid: dict = {}
    morphisms = []
    ups: list = []
    for s in range(1 << n):
        comp = full & ~s
        sups = []
        sub = comp
        # all submasks of the complement, ascending
        subs = []
        while True:
            subs.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & comp
        for t in reversed(subs):
            i = len(morphisms)
            mid[(s, s | t)] = i
            morphisms.append(Morphism(i, s, s | t))
            sups.append(s | t)
        ups.append(sups)
    compose = {}
    for (s, t), f in mid.items():
        for u in ups[t]:
            compose[(mid[(t, u)], f)] = mid[(s, u)]
    objs = tuple(range(1 << n))
    return FinCategory(objs, tuple(morphisms), {s: mid[(s, s)] for s in objs}, compose, name=f"P({n})")


def inclusion(c: FinCategory, s: int, t: int):
    """The morphism ``s <= t`` of a poset category."""
    hom = c.homs.get((s, t))
    if not hom:
        raise MalformedInput(f"{s!r} is not below {t!r}")
    return hom[0]


def monotone_functor(c: FinCategory, d: FinCategory, fn: Callable[[int], int], name: str = "") -> FinFunctor:
    om = {x: fn(x) for x in c.objects}
    homs = d.homs
    mm = {m.id: homs[(om[m.src], om[m.tgt])][0] for m in c.morphisms}
    return FinFunctor(c, d, om, mm, name=name)


def poset_transform(F: FinFunctor, G: FinFunctor, name: str = "") -> NatTransform:
    d = F.target
    return NatTransform(F, G, {x: inclusion(d, F.object_map[x], G.object_map[x]) for x in F.source.objects}, name=name)


def _check_cap(gamma: Context, a: Context, cap: int):
    if len(gamma) * len(a) > cap or len(gamma) > cap:
        raise SizeCapExceeded(f"|Gamma|*|A| = {len(gamma) * len(a)} exceeds powerset cap {cap}")


class SetModel:
    """Bitmask versions of reindex/forall/exists on one ``(Gamma, A)`` instance."""

    def __init__(self, gamma: Context, a: Context, cap: int = POWERSET_CAP):
        _check_cap(gamma, a, cap)
        self.gamma, self.a = gamma, a
        self.ext = ExtendedContext(gamma, a)
        n, k = len(gamma), len(a)
        self.n, self.k = n, k
        row = (1 << k) - 1
        self._rows = [row << (i * k) for i in range(n)]

    def pullback(self, s: int) -> int:
        out = 0
        for i, row in enumerate(self._rows):
            if s >> i & 1:
                out |= row
        return out

    def forall(self, phi: int) -> int:
        return sum(1 << i for i, row in enumerate(self._rows) if phi & row == row)

    def exists(self, phi: int) -> int:
        return sum(1 << i for i, row in enumerate(self._rows) if phi & row)

    @cached_property
    def base_fiber(self) -> FinCategory:
        return powerset_poset(self.n)

    @cached_property
    def ext_fiber(self) -> FinCategory:
        return powerset_poset(self.n * self.k)

    @cached_property
    def pullback_functor(self) -> FinFunctor:
        return monotone_functor(self.base_fiber, self.ext_fiber, self.pullback, "pi*")

    @cached_property
    def forall_functor(self) -> FinFunctor:
        return monotone_functor(self.ext_fiber, self.base_fiber, self.forall, "forall")

    @cached_property
    def exists_functor(self) -> FinFunctor:
        return monotone_functor(self.ext_fiber, self.base_fiber, self.exists, "exists")

    def to_mask(self, p: Predicate) -> int:
        ctx = p.over.context if isinstance(p.over, ExtendedContext) else p.over
        return ctx.mask(p.members)


def as_adjunction_forall(gamma: Context, a: Context, cap: int = POWERSET_CAP) -> Adjunction:
    """``pi* -| forall`` between the subset posets of Gamma and Gamma x A."""
    m = SetModel(gamma, a, cap)
    L, R = m.pullback_functor, m.forall_functor
    return Adjunction(
        L,
        R,
        poset_transform(identity_functor(m.base_fiber), compose_functors(R, L), "unit"),
        poset_transform(compose_functors(L, R), identity_functor(m.ext_fiber), "counit"),
        name=f"pi* -| forall ({len(gamma)}x{len(a)})",
    )


def as_adjunction_exists(gamma: Context, a: Context, cap: int = POWERSET_CAP) -> Adjunction:
    """``exists -| pi*``."""
    m = SetModel(gamma, a, cap)
    L, R = m.exists_functor, m.pullback_functor
    return Adjunction(
        L,
        R,
        poset_transform(identity_functor(m.ext_fiber), compose_functors(R, L), "unit"),
        poset_transform(compose_functors(L, R), identity_functor(m.base_fiber), "counit"),
        name=f"exists -| pi* ({len(gamma)}x{len(a)})",
    )


def lifted_family(gamma: Context, delta: Context, a: Context, f: dict, cap: int = POWERSET_CAP) -> LiftedSquare:
    """Base change of ``pi* -| forall`` along ``f: Gamma -> Delta``.

    Both comparison cells are identities: reindexing along f x A commutes with
    pi* and with forall on the nose.
    """
    src = SetModel(gamma, a, cap)
    tgt = SetModel(delta, a, cap)
    if set(f) != set(gamma.elements) or any(v not in delta.index for v in f.values()):
        raise ContextMismatch("f is not a map Gamma -> Delta")
    img = [delta.index[f[x]] for x in gamma.elements]
    k = len(a)

    def fstar(s):
        return sum(1 << i for i, j in enumerate(img) if s >> j & 1)

    def fstar_ext(s):
        out = 0
        for i, j in enumerate(img):
            out |= ((s >> (j * k)) & ((1 << k) - 1)) << (i * k)
        return out

    rf = monotone_functor(tgt.base_fiber, src.base_fiber, fstar, "f*")
    rfe = monotone_functor(tgt.ext_fiber, src.ext_fiber, fstar_ext, "(f x A)*")
    s_adj = as_adjunction_forall(gamma, a, cap)
    t_adj = as_adjunction_forall(delta, a, cap)
    lam = poset_transform(compose_functors(rfe, t_adj.left), compose_functors(s_adj.left, rf), "left comparison")
    rho = poset_transform(compose_functors(rf, t_adj.right), compose_functors(s_adj.right, rfe), "right comparison")
    return LiftedSquare(tuple(f[x] for x in gamma.elements), rf, rfe, s_adj, t_adj, lam, rho)


def quantify_via_transposes(phi: Predicate, op: str, cap: int = POWERSET_CAP) -> Predicate:
    """Compute ``forall``/``exists`` from the materialized adjunction alone.

    Every morphism ``pi* ψ -> φ`` transposes to ``ψ -> forall φ``, so the
    common codomain of the transposes is ``forall φ``.  Dually every
    ``φ -> pi* ψ`` transposes to ``exists φ -> ψ``.
    """
    from .adjunction import transpose_backward, transpose_forward

    ext = _check_over_extension(phi)
    target = SetModel(ext.base, ext.fiber, cap).to_mask(phi)
    ends = set()
    if op == "forall":
        adj = as_adjunction_forall(ext.base, ext.fiber, cap)
        for psi in adj.lower.objects:
            for h in adj.upper.hom(adj.left.object_map[psi], target):
                ends.add(adj.lower.tgt[transpose_backward(adj, h, psi)])
    elif op == "exists":
        adj = as_adjunction_exists(ext.base, ext.fiber, cap)
        for psi in adj.upper.objects:
            for h in adj.lower.hom(target, adj.right.object_map[psi]):
                ends.add(adj.upper.src[transpose_forward(adj, h, psi)])
    else:
        raise MalformedInput(f"unknown quantifier {op!r}")
    if len(ends) != 1:
        raise MalformedInput(f"transposes do not determine {op}: {sorted(ends)}")
    return Predicate(ext.base, ext.base.subset(ends.pop()))
