"""Small-instance searches: functors, natural isomorphisms, equivalences."""
from __future__ import annotations

import itertools
from typing import Iterator

from .errors import SearchCapExceeded
from .fincat import (
    FinCategory,
    FinFunctor,
    NatTransform,
    compose_functors,
    identity_functor,
)


def enumerate_functors(c: FinCategory, d: FinCategory, cap: int = 100_000) -> Iterator[FinFunctor]:
    """All functors ``c -> d``, by backtracking over objects then morphisms.

    ``cap`` bounds the number of partial assignments explored.
    """
    objs = list(c.objects)
    non_id = [m for m in c.morphisms if m.id not in c.identities]
    budget = [cap]

    def spend():
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchCapExceeded(f"functor search {c!r} -> {d!r} exceeded {cap} steps")

    for images in itertools.product(d.objects, repeat=len(objs)):
        spend()
        om = dict(zip(objs, images))
        mm = {c.identity[x]: d.identity[om[x]] for x in objs}

        def extend(k):
            if k == len(non_id):
                # composition among already-assigned non-identity morphisms
                for (g, f), gf in c.compose.items():
                    if d.compose.get((mm[g], mm[f])) != mm[gf]:
                        return
                yield FinFunctor(c, d, dict(om), dict(mm))
                return
            m = non_id[k]
            for n in d.hom(om[m.src], om[m.tgt]):
                spend()
                mm[m.id] = n
                if _consistent(c, d, mm, m.id):
                    yield from extend(k + 1)
                del mm[m.id]

        yield from extend(0)


def _consistent(c, d, mm, new) -> bool:
    for g in c.outgoing[c.tgt[new]]:
        gf = c.compose[(g, new)]
        if g in mm and gf in mm and d.compose.get((mm[g], mm[new])) != mm[gf]:
            return False
    for f in c.incoming[c.src[new]]:
        gf = c.compose[(new, f)]
        if f in mm and gf in mm and d.compose.get((mm[new], mm[f])) != mm[gf]:
            return False
    return True


def find_natural_isos(F: FinFunctor, G: FinFunctor, limit: int | None = None, cap: int = 100_000):
    """Natural isomorphisms ``F => G`` (all of them, or the first ``limit``)."""
    c, d = F.source, F.target
    objs = list(c.objects)
    found = []
    budget = [cap]
    comps: dict = {}

    def ok_so_far(x):
        for m in c.outgoing[x] + c.incoming[x]:
            s, t = c.src[m], c.tgt[m]
            if s in comps and t in comps:
                if d.compose[(comps[t], F.morphism_map[m])] != d.compose[(G.morphism_map[m], comps[s])]:
                    return False
        return True

    def go(k):
        if limit is not None and len(found) >= limit:
            return
        if k == len(objs):
            found.append(NatTransform(F, G, dict(comps)))
            return
        x = objs[k]
        for a in d.isos(F.object_map[x], G.object_map[x]):
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchCapExceeded("natural isomorphism search exceeded cap")
            comps[x] = a
            if ok_so_far(x):
                go(k + 1)
            del comps[x]

    go(0)
    return found


def find_natural_iso(F: FinFunctor, G: FinFunctor, cap: int = 100_000):
    hits = find_natural_isos(F, G, limit=1, cap=cap)
    return hits[0] if hits else None


def find_equivalence(c: FinCategory, d: FinCategory, cap: int = 100_000):
    """Search for ``F: c -> d``, ``G: d -> c`` with ``G F ~ Id`` and ``F G ~ Id``.

    Returns ``(F, G, unit_iso, counit_iso)`` or None.
    """
    gs = list(enumerate_functors(d, c, cap=cap))
    for F in enumerate_functors(c, d, cap=cap):
        for G in gs:
            a = find_natural_iso(identity_functor(c), compose_functors(G, F), cap=cap)
            if a is None:
                continue
            b = find_natural_iso(compose_functors(F, G), identity_functor(d), cap=cap)
            if b is not None:
                return F, G, a, b
    return None


def is_equivalence(F: FinFunctor) -> bool:
    """Fully faithful and essentially surjective."""
    c, d = F.source, F.target
    for x in c.objects:
        for y in c.objects:
            images = [F.morphism_map[h] for h in c.hom(x, y)]
            if len(set(images)) != len(images):
                return False
            if len(images) != len(d.hom(F.object_map[x], F.object_map[y])):
                return False
    hit = set(F.object_map.values())
    return all(any(d.isos(x, y) for x in hit) for y in d.objects)
