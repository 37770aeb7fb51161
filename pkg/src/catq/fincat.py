"""Finite categories, functors and natural transformations with total law checks.

Morphisms are identified by hashable ids (ints for everything built here) and
composition is a dense table ``compose[(g, f)] = g . f`` defined exactly on
composable pairs.  Witnesses are always the first failure in list order of the
morphisms, so reports are deterministic.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, NamedTuple, Sequence

from .errors import MalformedInput, PathMismatch
from .report import LawReport


class Morphism(NamedTuple):
    id: Hashable
    src: Hashable
    tgt: Hashable


@dataclass(frozen=True)
class FinCategory:
    objects: tuple
    morphisms: tuple  # of Morphism
    identity: dict
    compose: dict
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(Morphism(*m) for m in self.morphisms))
        obs = set(self.objects)
        if len(obs) != len(self.objects):
            raise MalformedInput(f"{self.name or 'category'}: duplicate object ids")
        ids = set()
        for m in self.morphisms:
            if m.id in ids:
                raise MalformedInput(f"duplicate morphism id {m.id!r}")
            ids.add(m.id)
            if m.src not in obs or m.tgt not in obs:
                raise MalformedInput(f"morphism {m.id!r} has dangling endpoint")
        for x, i in self.identity.items():
            if x not in obs:
                raise MalformedInput(f"identity given for unknown object {x!r}")
            if i not in ids:
                raise MalformedInput(f"identity of {x!r} is unknown morphism {i!r}")
        missing = [x for x in self.objects if x not in self.identity]
        if missing:
            raise MalformedInput(f"no identity for object {missing[0]!r}")
        for (g, f), gf in self.compose.items():
            if g not in ids or f not in ids or gf not in ids:
                raise MalformedInput(f"compose entry ({g!r}, {f!r}) -> {gf!r} references unknown morphism")

    # -- indexes ---------------------------------------------------------
    @cached_property
    def src(self) -> dict:
        return {m.id: m.src for m in self.morphisms}

    @cached_property
    def tgt(self) -> dict:
        return {m.id: m.tgt for m in self.morphisms}

    @cached_property
    def order(self) -> dict:
        return {m.id: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def object_order(self) -> dict:
        return {x: i for i, x in enumerate(self.objects)}

    @cached_property
    def homs(self) -> dict:
        out: dict = {}
        for m in self.morphisms:
            out.setdefault((m.src, m.tgt), []).append(m.id)
        return out

    @cached_property
    def outgoing(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for m in self.morphisms:
            out[m.src].append(m.id)
        return out

    @cached_property
    def incoming(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for m in self.morphisms:
            out[m.tgt].append(m.id)
        return out

    @cached_property
    def identities(self) -> frozenset:
        return frozenset(self.identity.values())

    def hom(self, x, y) -> list:
        return self.homs.get((x, y), [])

    def comp(self, g, f):
        """``g . f``; raises MalformedInput when the pair is not in the table."""
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise MalformedInput(f"({g!r}, {f!r}) not composable") from None

    def is_identity(self, f) -> bool:
        return f in self.identities

    def inverse(self, f):
        """Two-sided inverse of ``f`` or None."""
        x, y = self.src[f], self.tgt[f]
        for g in self.hom(y, x):
            if self.compose.get((g, f)) == self.identity[x] and self.compose.get((f, g)) == self.identity[y]:
                return g
        return None

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def isos(self, x, y) -> list:
        return [f for f in self.hom(x, y) if self.is_iso(f)]

    def __len__(self):
        return len(self.morphisms)

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def composite(c: FinCategory, path: Sequence):
    """Compose ``path`` given in diagrammatic order (first arrow first)."""
    if not path:
        raise PathMismatch("empty path has no determined endpoint")
    acc = path[0]
    for f in path[1:]:
        if c.tgt[acc] != c.src[f]:
            raise PathMismatch(f"path not composable at {acc!r} then {f!r}")
        acc = c.compose[(f, acc)]
    return acc


# -- functors and transformations ----------------------------------------


@dataclass(frozen=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    object_map: dict
    morphism_map: dict
    name: str = field(default="", compare=False)

    def ob(self, x):
        return self.object_map[x]

    def mor(self, f):
        return self.morphism_map[f]

    def __repr__(self):
        return f"<FinFunctor {self.name or ''} {self.source!r} -> {self.target!r}>"


@dataclass(frozen=True)
class NatTransform:
    source_functor: FinFunctor
    target_functor: FinFunctor
    components: dict
    name: str = field(default="", compare=False)

    def __getitem__(self, x):
        return self.components[x]

    @property
    def category(self) -> FinCategory:
        return self.source_functor.target


@dataclass(frozen=True)
class Diagram:
    shape: FinCategory
    labeling: FinFunctor


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {m.id: m.id for m in c.morphisms}, name="Id")


def constant_functor(c: FinCategory, d: FinCategory, obj) -> FinFunctor:
    i = d.identity[obj]
    return FinFunctor(c, d, {x: obj for x in c.objects}, {m.id: i for m in c.morphisms}, name=f"const {obj!r}")


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """``g . f`` (apply ``f`` first)."""
    return FinFunctor(
        f.source,
        g.target,
        {x: g.object_map[y] for x, y in f.object_map.items()},
        {m: g.morphism_map[n] for m, n in f.morphism_map.items()},
        name=f"{g.name}{f.name}" if g.name and f.name else "",
    )


def identity_transform(f: FinFunctor) -> NatTransform:
    d = f.target
    return NatTransform(f, f, {x: d.identity[f.object_map[x]] for x in f.source.objects})


def vertical(beta: NatTransform, alpha: NatTransform) -> NatTransform:
    """``beta . alpha`` for alpha: F => G, beta: G => H."""
    d = alpha.category
    return NatTransform(
        alpha.source_functor,
        beta.target_functor,
        {x: d.compose[(beta.components[x], alpha.components[x])] for x in alpha.components},
    )


def whisker_right(h: FinFunctor, alpha: NatTransform) -> NatTransform:
    """``H alpha``: H.F => H.G."""
    return NatTransform(
        compose_functors(h, alpha.source_functor),
        compose_functors(h, alpha.target_functor),
        {x: h.morphism_map[a] for x, a in alpha.components.items()},
    )


def whisker_left(alpha: NatTransform, k: FinFunctor) -> NatTransform:
    """``alpha K``: F.K => G.K."""
    return NatTransform(
        compose_functors(alpha.source_functor, k),
        compose_functors(alpha.target_functor, k),
        {x: alpha.components[k.object_map[x]] for x in k.source.objects},
    )


def is_invertible(t: NatTransform) -> bool:
    d = t.category
    return all(d.is_iso(a) for a in t.components.values())


def invert(t: NatTransform) -> NatTransform:
    d = t.category
    comps = {}
    for x, a in t.components.items():
        b = d.inverse(a)
        if b is None:
            raise MalformedInput(f"component at {x!r} is not invertible")
        comps[x] = b
    return NatTransform(t.target_functor, t.source_functor, comps)


# -- law checks ------------------------------------------------------------


def check_category(c: FinCategory) -> LawReport:
    """Check totality, typing, identity, associativity and identity uniqueness."""
    rep = LawReport(c.name or "category")
    C, src, tgt, ident = c.compose, c.src, c.tgt, c.identity
    for x in c.objects:
        i = ident[x]
        rep.tick("identity_typing")
        if src[i] != x or tgt[i] != x:
            rep.fail("identity_typing", x, f"identity {i!r} is not an endomorphism of {x!r}")

    for f in c.morphisms:
        for g in c.outgoing[f.tgt]:
            rep.tick("totality")
            gf = C.get((g, f.id))
            if gf is None:
                rep.fail("totality", (g, f.id), "missing compose entry for composable pair")
                continue
            rep.tick("compose_typing")
            if src[gf] != f.src or tgt[gf] != tgt[g]:
                rep.fail("compose_typing", (g, f.id), f"composite {gf!r} has wrong endpoints")
    for (g, f) in C:
        if tgt[f] != src[g]:
            rep.tick("totality")
            rep.fail("totality", (g, f), "compose entry for non-composable pair")

    for f in c.morphisms:
        rep.tick("identity")
        if C.get((ident[f.tgt], f.id)) != f.id or C.get((f.id, ident[f.src])) != f.id:
            rep.fail("identity", f.id, "identity law fails")

    for f in c.morphisms:
        for g in c.outgoing[f.tgt]:
            gf = C.get((g, f.id))
            if gf is None:
                continue
            for h in c.outgoing[tgt[g]]:
                hg = C.get((h, g))
                if hg is None:
                    continue
                rep.tick("associativity")
                left, right = C.get((h, gf)), C.get((hg, f.id))
                if left != right:
                    rep.fail("associativity", (h, g, f.id), f"{left!r} != {right!r}")

    for x in c.objects:
        for e in c.hom(x, x):
            if e == ident[x]:
                continue
            rep.tick("identity_uniqueness")
            if all(C.get((e, f)) == f for f in c.incoming[x]) and all(
                C.get((g, e)) == g for g in c.outgoing[x]
            ):
                rep.fail("identity_uniqueness", (x, e), "second two-sided unit")
    return rep


def _require_functor_tables(f: FinFunctor):
    s, t = f.source, f.target
    tobs = set(t.objects)
    for x in s.objects:
        if x not in f.object_map:
            raise MalformedInput(f"functor object map missing {x!r}")
        if f.object_map[x] not in tobs:
            raise MalformedInput(f"functor sends {x!r} to unknown object {f.object_map[x]!r}")
    for m in s.morphisms:
        if m.id not in f.morphism_map:
            raise MalformedInput(f"functor morphism map missing {m.id!r}")
        if f.morphism_map[m.id] not in t.src:
            raise MalformedInput(f"functor sends {m.id!r} to unknown morphism {f.morphism_map[m.id]!r}")


def check_functor(F: FinFunctor) -> LawReport:
    _require_functor_tables(F)
    s, t = F.source, F.target
    om, mm = F.object_map, F.morphism_map
    rep = LawReport(F.name or "functor")
    for m in s.morphisms:
        rep.tick("preserves_endpoints")
        n = mm[m.id]
        if t.src[n] != om[m.src] or t.tgt[n] != om[m.tgt]:
            rep.fail("preserves_endpoints", m.id)
    for x in s.objects:
        rep.tick("preserves_identity")
        if mm[s.identity[x]] != t.identity[om[x]]:
            rep.fail("preserves_identity", x)
    for (g, f), gf in s.compose.items():
        rep.tick("preserves_composition")
        if t.compose.get((mm[g], mm[f])) != mm[gf]:
            rep.fail("preserves_composition", (g, f))
    return rep


def check_natural(tr: NatTransform) -> LawReport:
    F, G = tr.source_functor, tr.target_functor
    if F.source is not G.source and F.source != G.source:
        raise MalformedInput("transformation between functors with different sources")
    if F.target is not G.target and F.target != G.target:
        raise MalformedInput("transformation between functors with different targets")
    c, d = F.source, F.target
    for x in c.objects:
        if x not in tr.components:
            raise MalformedInput(f"missing component at {x!r}")
        if tr.components[x] not in d.src:
            raise MalformedInput(f"component at {x!r} is unknown morphism")
    rep = LawReport(tr.name or "natural transformation")
    comp = tr.components
    for x in c.objects:
        rep.tick("component_typing")
        a = comp[x]
        if d.src[a] != F.object_map[x] or d.tgt[a] != G.object_map[x]:
            rep.fail("component_typing", x)
    if rep.violations:
        return rep
    for m in c.morphisms:
        rep.tick("naturality")
        lhs = d.compose.get((comp[m.tgt], F.morphism_map[m.id]))
        rhs = d.compose.get((G.morphism_map[m.id], comp[m.src]))
        if lhs != rhs:
            rep.fail("naturality", m.id)
    return rep


def check_diagram_commutes(d: Diagram, path_a: Sequence, path_b: Sequence) -> bool:
    """Whether the labeled composites of two shape paths agree."""
    shape, lab = d.shape, d.labeling
    ends = []
    for p in (path_a, path_b):
        if not p:
            raise PathMismatch("empty path")
        for f, g in zip(p, p[1:]):
            if shape.tgt[f] != shape.src[g]:
                raise PathMismatch(f"{f!r} then {g!r} is not composable")
        ends.append((shape.src[p[0]], shape.tgt[p[-1]]))
    if ends[0] != ends[1]:
        raise PathMismatch(f"paths have different endpoints {ends[0]!r} vs {ends[1]!r}")
    t = lab.target
    return composite(t, [lab.morphism_map[f] for f in path_a]) == composite(
        t, [lab.morphism_map[f] for f in path_b]
    )


def commutes(c: FinCategory, path_a: Sequence, path_b: Sequence) -> bool:
    """``check_diagram_commutes`` for paths drawn directly in ``c``."""
    return check_diagram_commutes(Diagram(c, identity_functor(c)), path_a, path_b)


def opposite(c: FinCategory) -> FinCategory:
    return FinCategory(
        c.objects,
        tuple(Morphism(m.id, m.tgt, m.src) for m in c.morphisms),
        dict(c.identity),
        {(f, g): gf for (g, f), gf in c.compose.items()},
        name=f"{c.name}^op" if c.name else "",
    )


# -- builders ----------------------------------------------------------------


def terminal() -> FinCategory:
    return FinCategory((0,), (Morphism(0, 0, 0),), {0: 0}, {(0, 0): 0}, name="1")


def discrete(objects: Iterable) -> FinCategory:
    objs = tuple(objects)
    return FinCategory(
        objs,
        tuple(Morphism(i, x, x) for i, x in enumerate(objs)),
        {x: i for i, x in enumerate(objs)},
        {(i, i): i for i in range(len(objs))},
        name="discrete",
    )


def poset(elements: Sequence, leq: Callable[[Any, Any], bool], name: str = "poset") -> FinCategory:
    """Thin category with a morphism x -> y iff ``leq(x, y)``.

    Morphism ids are assigned in (source, target) order of ``elements``.
    """
    elements = tuple(elements)
    mid: dict = {}
    morphisms = []
    up: dict = {x: [] for x in elements}
    for x in elements:
        for y in elements:
            if leq(x, y):
                i = len(morphisms)
                mid[(x, y)] = i
                morphisms.append(Morphism(i, x, y))
                up[x].append(y)
    compose = {}
    for (x, y), f in mid.items():
        for z in up[y]:
            compose[(mid[(y, z)], f)] = mid[(x, z)]
    return FinCategory(elements, tuple(morphisms), {x: mid[(x, x)] for x in elements}, compose, name=name)


def codiscrete(objects: Iterable) -> FinCategory:
    """Exactly one morphism between any two objects (a contractible groupoid)."""
    return poset(tuple(objects), lambda x, y: True, name="codiscrete")


def chain(n: int) -> FinCategory:
    return poset(range(n), lambda x, y: x <= y, name=f"[{n}]")


def arrow() -> FinCategory:
    """The walking arrow 0 -> 1."""
    return poset((0, 1), lambda x, y: x <= y, name="arrow")


def generated_category(sizes: dict, generators: Iterable, cap: int = 60) -> FinCategory:
    return generated_with_functions(sizes, generators, cap)[0]


def generated_with_functions(sizes: dict, generators: Iterable, cap: int = 60):
    """Concrete category of functions between finite sets closed under composition.

    ``sizes`` maps object -> cardinality; each generator is ``(src, tgt, images)``
    with ``images`` a tuple of length ``sizes[src]``.  Identities are added.
    Raises MalformedInput if the closure exceeds ``cap`` morphisms.  Returns
    the category and, per morphism id, its ``(src, tgt, images)`` function.
    """
    objs = tuple(sizes)
    elems: list = []
    index: dict = {}

    def add(key):
        if key not in index:
            if len(elems) >= cap:
                raise MalformedInput(f"closure exceeds {cap} morphisms")
            index[key] = len(elems)
            elems.append(key)

    for x in objs:
        add((x, x, tuple(range(sizes[x]))))
    for s, t, img in generators:
        img = tuple(img)
        if len(img) != sizes[s] or any(not 0 <= v < sizes[t] for v in img):
            raise MalformedInput(f"generator {s!r}->{t!r} {img!r} is not a function")
        add((s, t, img))
    compose = {}
    while True:
        n = len(elems)
        for i in range(n):
            for j in range(n):
                if (i, j) in compose:
                    continue
                gs, gt, gimg = elems[i]
                fs, ft, fimg = elems[j]
                if ft != gs:
                    continue
                key = (fs, gt, tuple(gimg[v] for v in fimg))
                add(key)
                compose[(i, j)] = index[key]
        if len(elems) == n:
            break
    morphisms = tuple(Morphism(i, s, t) for i, (s, t, _) in enumerate(elems))
    identity = {x: index[(x, x, tuple(range(sizes[x])))] for x in objs}
    return FinCategory(objs, morphisms, identity, compose, name="generated"), dict(enumerate(elems))


def random_category(rng: random.Random, max_objects: int = 6, max_morphisms: int = 30) -> FinCategory:
    """A random valid category: either a random poset or a generated concrete one."""
    while True:
        n = rng.randint(1, max_objects)
        if rng.random() < 0.4:
            rel = {(i, j) for i in range(n) for j in range(n) if i < j and rng.random() < 0.5}
            # transitive closure keeps it a preorder
            changed = True
            while changed:
                changed = False
                for (a, b), (c2, d) in itertools.product(list(rel), list(rel)):
                    if b == c2 and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
            c = poset(range(n), lambda x, y: x == y or (x, y) in rel, name="random poset")
        else:
            sizes = {i: rng.randint(1, 3) for i in range(n)}
            gens = []
            for _ in range(rng.randint(0, 4)):
                s, t = rng.randrange(n), rng.randrange(n)
                gens.append((s, t, tuple(rng.randrange(sizes[t]) for _ in range(sizes[s]))))
            try:
                c = generated_category(sizes, gens, cap=max_morphisms)
            except MalformedInput:
                continue
        if len(c.morphisms) <= max_morphisms:
            return c
