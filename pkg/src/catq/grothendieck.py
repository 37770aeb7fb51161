"""Strict indexed categories over a finite base and their Grothendieck construction.

An object of the total category is ``(c, x)`` with ``x`` in ``fiber(c)``; a
morphism ``(c, x) -> (d, y)`` is ``(f, a)`` with ``f: c -> d`` in the base and
``a: x -> f*(y)`` in ``fiber(c)``.  Composition is
``(g, b) . (f, a) = (g . f, f*(b) . a)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import MalformedInput
from .fincat import (
    FinCategory,
    FinFunctor,
    Morphism,
    check_category,
    check_functor,
    compose_functors,
    discrete,
    generated_with_functions,
    random_category,
)
from .report import LawReport
from .setlogic import monotone_functor, powerset_poset


@dataclass(frozen=True)
class IndexedModel:
    base: FinCategory
    fiber: dict  # base object -> FinCategory
    reindex: dict  # base morphism f: c -> d  ->  FinFunctor fiber(d) -> fiber(c)


@dataclass(frozen=True)
class TotalCategory:
    category: FinCategory
    projection: FinFunctor
    pairs: dict  # total morphism id -> (base morphism, fiber morphism)


def _same_table(f: FinFunctor, g: FinFunctor) -> bool:
    return f.object_map == g.object_map and f.morphism_map == g.morphism_map


def check_indexed_model(m: IndexedModel) -> LawReport:
    rep = LawReport("indexed model")
    b = m.base
    rep.absorb(check_category(b), "base.")
    for c in b.objects:
        if c not in m.fiber:
            raise MalformedInput(f"no fiber over {c!r}")
        rep.absorb(check_category(m.fiber[c]), f"fiber[{c!r}].")
    for f in b.morphisms:
        if f.id not in m.reindex:
            raise MalformedInput(f"no reindexing functor for {f.id!r}")
        r = m.reindex[f.id]
        rep.tick("reindex_typing")
        if r.source is not m.fiber[f.tgt] or r.target is not m.fiber[f.src]:
            if r.source != m.fiber[f.tgt] or r.target != m.fiber[f.src]:
                rep.fail("reindex_typing", f.id)
                continue
        rep.absorb(check_functor(r), "reindex.")
    if not rep.ok:
        return rep
    for c in b.objects:
        rep.tick("reindex_identity")
        r = m.reindex[b.identity[c]]
        fib = m.fiber[c]
        if any(r.object_map[x] != x for x in fib.objects) or any(r.morphism_map[a.id] != a.id for a in fib.morphisms):
            rep.fail("reindex_identity", c)
    for (g, f), gf in b.compose.items():
        rep.tick("reindex_composition")
        # (g . f)* = f* . g*
        if not _same_table(m.reindex[gf], compose_functors(m.reindex[f], m.reindex[g])):
            rep.fail("reindex_composition", (g, f))
    return rep


def build_total(m: IndexedModel) -> TotalCategory:
    rep = check_indexed_model(m)
    if not rep.ok:
        raise MalformedInput(f"indexed model fails its laws: {rep.violations[0].law} at {rep.violations[0].witness!r}")
    b = m.base
    objects = [(c, x) for c in b.objects for x in m.fiber[c].objects]
    morphisms = []
    key_to_id = {}
    pairs = {}
    for c in b.objects:
        for x in m.fiber[c].objects:
            for f in b.outgoing[c]:
                d = b.tgt[f]
                r = m.reindex[f]
                for y in m.fiber[d].objects:
                    for a in m.fiber[c].hom(x, r.object_map[y]):
                        i = len(morphisms)
                        morphisms.append(Morphism(i, (c, x), (d, y)))
                        key_to_id[(f, a, y)] = i
                        pairs[i] = (f, a)
    identity = {(c, x): key_to_id[(b.identity[c], m.fiber[c].identity[x], x)] for (c, x) in objects}
    compose = {}
    by_src: dict = {}
    for mm in morphisms:
        by_src.setdefault(mm.src, []).append(mm)
    for fm in morphisms:
        f, a = pairs[fm.id]
        c = fm.src[0]
        for gm in by_src[fm.tgt]:
            g, bb = pairs[gm.id]
            fb = m.fiber[c].compose[(m.reindex[f].morphism_map[bb], a)]
            compose[(gm.id, fm.id)] = key_to_id[(b.compose[(g, f)], fb, gm.tgt[1])]
    total = FinCategory(tuple(objects), tuple(morphisms), identity, compose, name="total")
    proj = FinFunctor(
        total,
        b,
        {o: o[0] for o in objects},
        {i: pairs[i][0] for i in pairs},
        name="p",
    )
    return TotalCategory(total, proj, pairs)


def check_total(t: TotalCategory) -> LawReport:
    rep = LawReport("total category")
    rep.absorb(check_category(t.category), "total.")
    rep.absorb(check_functor(t.projection), "projection.")
    return rep


def check_cartesian_lifts(t: TotalCategory, m: IndexedModel) -> LawReport:
    """Every canonical lift ``(f, id): (c, f*y) -> (d, y)`` is cartesian.

    For each ``(h, g): (e, z) -> (d, y)`` and each base ``k: e -> c`` with
    ``f . k = h`` there must be exactly one total morphism over ``k`` whose
    composite with the lift is ``(h, g)``.
    """
    rep = LawReport("cartesian lifts")
    b, tc = m.base, t.category
    ids = {}
    for i, (f, a) in t.pairs.items():
        ids[(f, a, tc.tgt[i])] = i
    over: dict = {}
    for i, (f, _) in t.pairs.items():
        over.setdefault((tc.src[i], f), []).append(i)
    for f in b.morphisms:
        r = m.reindex[f.id]
        for y in m.fiber[f.tgt].objects:
            rep.tick("lift_exists")
            fy = r.object_map[y]
            lift = ids.get((f.id, m.fiber[f.src].identity[fy], (f.tgt, y)))
            if lift is None:
                rep.fail("lift_exists", (f.id, y))
                continue
            for hm in tc.incoming[(f.tgt, y)]:
                h = t.pairs[hm][0]
                e = b.src[h]
                for k in b.hom(e, f.src):
                    if b.compose[(f.id, k)] != h:
                        continue
                    rep.tick("unique_factorization")
                    hits = [
                        u for u in over.get((tc.src[hm], k), []) if tc.tgt[u] == (f.src, fy) and tc.compose[(lift, u)] == hm
                    ]
                    if len(hits) != 1:
                        rep.fail("unique_factorization", (f.id, y, hm, k), f"{len(hits)} factorizations")
    return rep


def check_fiber_recovery(t: TotalCategory, m: IndexedModel) -> LawReport:
    """The morphisms over ``id_c`` form a copy of ``fiber(c)`` via ``(id, a) |-> a``."""
    rep = LawReport("fiber recovery")
    b, tc = m.base, t.category
    for c in b.objects:
        fib = m.fiber[c]
        idc = b.identity[c]
        sub = {i: a for i, (f, a) in t.pairs.items() if f == idc}
        rep.tick("bijective_on_objects")
        if sorted(fib.object_order[x] for (cc, x) in tc.objects if cc == c) != list(range(len(fib.objects))):
            rep.fail("bijective_on_objects", c)
        rep.tick("bijective_on_morphisms")
        if sorted(fib.order[a] for a in sub.values()) != list(range(len(fib.morphisms))):
            rep.fail("bijective_on_morphisms", c)
        for i, a in sub.items():
            rep.tick("endpoints")
            if tc.src[i] != (c, fib.src[a]) or tc.tgt[i] != (c, fib.tgt[a]):
                rep.fail("endpoints", (c, i))
            for j, bb in sub.items():
                if tc.src[j] != tc.tgt[i]:
                    continue
                rep.tick("composition")
                expected = fib.compose.get((bb, a))
                if expected is None or sub.get(tc.compose.get((j, i))) != expected:
                    rep.fail("composition", (c, j, i))
    return rep


# -- generators ---------------------------------------------------------------


def inverse_image_model(base: FinCategory, carrier: dict, images: dict, thin: bool = True) -> IndexedModel:
    """Indexed poset of subsets: ``fiber(c) = P(carrier[c])``, ``f* = f^-1``.

    ``images[f]`` is the function ``carrier[src f] -> carrier[tgt f]`` as a
    tuple; it must be functorial.  With ``thin=False`` the fibers are the
    discrete categories on the same subsets.
    """
    fibers = {}
    for c in base.objects:
        p = powerset_poset(carrier[c])
        fibers[c] = p if thin else discrete(p.objects)
    reindex = {}
    for f in base.morphisms:
        img = images[f.id]

        def pre(s, img=img):
            return sum(1 << i for i, j in enumerate(img) if s >> j & 1)

        reindex[f.id] = monotone_functor(fibers[f.tgt], fibers[f.src], pre)
    return IndexedModel(base, fibers, reindex)


def random_indexed_model(rng: random.Random, max_objects: int = 3, max_morphisms: int = 8) -> IndexedModel:
    """Random strict indexed category from a concrete base category.

    The base is generated by random functions between sets of size <= 2 and
    its own carriers give the fibers, so reindexing is strictly functorial.
    """
    while True:
        n = rng.randint(1, max_objects)
        sizes = {i: rng.randint(0, 2) for i in range(n)}
        gens = []
        for _ in range(rng.randint(0, 3)):
            s, t = rng.randrange(n), rng.randrange(n)
            if sizes[t] == 0 and sizes[s] > 0:
                continue
            gens.append((s, t, tuple(rng.randrange(sizes[t]) for _ in range(sizes[s]))))
        try:
            base, funcs = generated_with_functions(sizes, gens, cap=max_morphisms)
        except MalformedInput:
            continue
        break
    images = {i: img for i, (_, _, img) in funcs.items()}
    return inverse_image_model(base, sizes, images, thin=rng.random() < 0.7)


def random_base_model(rng: random.Random) -> IndexedModel:
    """Alternative generator over an arbitrary random category: constant fibers.

    Every fiber is the same small poset and every reindexing is the identity,
    which is a strict indexed category for any base.
    """
    base = random_category(rng, max_objects=3, max_morphisms=8)
    p = powerset_poset(rng.randint(0, 2))
    ident = FinFunctor(p, p, {x: x for x in p.objects}, {a.id: a.id for a in p.morphisms})
    return IndexedModel(base, {c: p for c in base.objects}, {f.id: ident for f in base.morphisms})
