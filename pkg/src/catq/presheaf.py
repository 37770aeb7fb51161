"""Finite presheaves over a finite base and quantifiers along a projection.

A presheaf assigns a finite set to each base object and, to each base morphism
``f: c -> c'``, an action ``sets(c') -> sets(c)``.  Predicates are
sub-presheaves (pointwise subsets closed under the actions).  Existential and
universal quantification along ``Gamma x A -> Gamma`` are computed object by
object as a colimit / limit over the comma data at that object.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .adjunction import Adjunction, verify_adjunction
from .errors import BaseMismatch, NotSubpresheaf, SizeCapExceeded
from .fincat import FinCategory, FinFunctor, NatTransform, compose_functors, identity_functor, poset
from .report import LawReport

DEFAULT_CAPS = {"objects": 4, "morphisms": 10, "set_size": 3, "lattice": 1 << 16}


@dataclass(frozen=True)
class Presheaf:
    base: FinCategory
    sets: dict
    actions: dict

    def elements(self):
        """``(object, element)`` pairs in base-object order."""
        return [(c, x) for c in self.base.objects for x in self.sets[c]]

    def act(self, f, x):
        return self.actions[f][x]


@dataclass(frozen=True)
class PresheafMorphism:
    source: Presheaf
    target: Presheaf
    components: dict


@dataclass(frozen=True)
class SubPresheaf:
    of: Presheaf
    members: dict  # base object -> frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", {c: frozenset(self.members.get(c, ())) for c in self.of.base.objects})

    def __le__(self, other: SubPresheaf) -> bool:
        return all(self.members[c] <= other.members[c] for c in self.of.base.objects)

    def key(self) -> tuple:
        return tuple(frozenset(self.members[c]) for c in self.of.base.objects)

    def __eq__(self, other):
        return isinstance(other, SubPresheaf) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_closed(self) -> bool:
        return _closure_violation(self) is None

    def __repr__(self):
        parts = []
        for c in self.of.base.objects:
            elems = [x for x in self.of.sets[c] if x in self.members[c]]
            parts.append(f"{c}: {elems}")
        return "{" + "; ".join(parts) + "}"


@dataclass
class CommaFiber:
    """Comma data used at one element ``x`` of ``Gamma(c)``.

    ``objects`` are pairs ``(u, e)`` with ``u`` a base morphism out of ``c``
    (for the colimit) or into ``c`` (for the limit) and ``e`` an element of the
    extended presheaf lying over the transported ``x``.  ``classes`` is the
    number of connected components among the objects where the predicate
    holds (the size of the colimit); ``holds`` the resulting truth value.
    """

    obj: object
    element: object
    objects: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    classes: int = 0
    holds: bool = False


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]

    def classes(self) -> int:
        return sum(1 for x in self.parent if self.parent[x] == x)


# -- law checks --------------------------------------------------------------


def check_presheaf(p: Presheaf) -> LawReport:
    rep = LawReport("presheaf")
    b = p.base
    for m in b.morphisms:
        rep.tick("action_typing")
        act = p.actions.get(m.id)
        if act is None or set(act) != set(p.sets[m.tgt]) or any(v not in p.sets[m.src] for v in act.values()):
            rep.fail("action_typing", m.id)
    if not rep.ok:
        return rep
    for c in b.objects:
        rep.tick("identity")
        act = p.actions[b.identity[c]]
        if any(act[x] != x for x in p.sets[c]):
            rep.fail("identity", c)
    for (g, f), gf in b.compose.items():
        rep.tick("contravariance")
        ag, af, agf = p.actions[g], p.actions[f], p.actions[gf]
        if any(agf[x] != af[ag[x]] for x in p.sets[b.tgt[g]]):
            rep.fail("contravariance", (g, f))
    return rep


def check_morphism(m: PresheafMorphism) -> LawReport:
    rep = LawReport("presheaf morphism")
    s, t = m.source, m.target
    for f in s.base.morphisms:
        for x in s.sets[f.tgt]:
            rep.tick("naturality")
            if m.components[f.src][s.actions[f.id][x]] != t.actions[f.id][m.components[f.tgt][x]]:
                rep.fail("naturality", (f.id, x))
    return rep


def _closure_violation(sp: SubPresheaf):
    p = sp.of
    for m in p.base.morphisms:
        for x in sp.members[m.tgt]:
            if p.actions[m.id][x] not in sp.members[m.src]:
                return (m.id, x)
    return None


def _require_closed(sp: SubPresheaf, what: str):
    bad = _closure_violation(sp)
    if bad is not None:
        raise NotSubpresheaf(f"{what} is not closed under the action of {bad[0]!r} at {bad[1]!r}")


def _same_base(a: Presheaf, b: Presheaf):
    if a.base is not b.base and a.base != b.base:
        raise BaseMismatch("presheaves live over different base categories")


# -- constructions -------------------------------------------------------------


def extend_presheaf(gamma: Presheaf, a: Presheaf):
    """Pointwise product ``Gamma x A`` with its projection to ``Gamma``."""
    _same_base(gamma, a)
    b = gamma.base
    sets = {c: tuple(itertools.product(gamma.sets[c], a.sets[c])) for c in b.objects}
    actions = {
        m.id: {(x, y): (gamma.actions[m.id][x], a.actions[m.id][y]) for (x, y) in sets[m.tgt]}
        for m in b.morphisms
    }
    prod = Presheaf(b, sets, actions)
    proj = PresheafMorphism(prod, gamma, {c: {e: e[0] for e in sets[c]} for c in b.objects})
    return prod, proj


def full(p: Presheaf) -> SubPresheaf:
    return SubPresheaf(p, {c: frozenset(p.sets[c]) for c in p.base.objects})


def empty(p: Presheaf) -> SubPresheaf:
    return SubPresheaf(p, {})


def reindex_presheaf(psi: SubPresheaf, pi: PresheafMorphism) -> SubPresheaf:
    if psi.of is not pi.target and psi.of != pi.target:
        raise NotSubpresheaf("predicate does not live over the projection's target")
    _require_closed(psi, "predicate")
    src = pi.source
    return SubPresheaf(
        src, {c: frozenset(e for e in src.sets[c] if pi.components[c][e] in psi.members[c]) for c in src.base.objects}
    )


def comma_colimit(phi: SubPresheaf, pi: PresheafMorphism, c, x) -> CommaFiber:
    """Colimit of the predicate over the comma data at ``x`` in ``Gamma(c)``.

    Objects are ``(u: c -> c', e)`` with ``e`` in ``Gamma[A](c')`` and
    ``u`` carrying ``pi(e)`` back to ``x``.  A base morphism ``w: c' -> c''``
    with ``w . u = u'`` and ``w`` acting ``e' |-> e`` links ``(u', e')`` to
    ``(u, e)``; classes are computed with a union-find.
    """
    src, tgt, b = pi.source, pi.target, pi.source.base
    fiber = CommaFiber(c, x)
    for u in b.outgoing[c]:
        c2 = b.tgt[u]
        for e in src.sets[c2]:
            if tgt.actions[u][pi.components[c2][e]] == x:
                fiber.objects.append((u, e))
    uf = UnionFind()
    live = [o for o in fiber.objects if o[1] in phi.members[b.tgt[o[0]]]]
    for o in live:
        uf.add(o)
    live_set = set(live)
    for (u, e) in fiber.objects:
        c1 = b.tgt[u]
        for w in b.outgoing[c1]:
            u2 = b.compose[(w, u)]
            for e2 in src.sets[b.tgt[w]]:
                if src.actions[w][e2] == e and (u2, e2) in live_set:
                    fiber.edges.append(((u2, e2), (u, e)))
                    # closure makes (u, e) live too; the edge identifies them
                    if (u, e) in live_set:
                        uf.union((u2, e2), (u, e))
    fiber.classes = uf.classes()
    fiber.holds = fiber.classes > 0
    return fiber


def comma_limit(phi: SubPresheaf, pi: PresheafMorphism, c, x) -> CommaFiber:
    """Limit of the predicate over pairs ``(u: c' -> c, e)`` with ``pi(e)`` the
    transport of ``x`` along ``u``: a singleton iff the predicate holds on all."""
    src, tgt, b = pi.source, pi.target, pi.source.base
    fiber = CommaFiber(c, x)
    for u in b.incoming[c]:
        c2 = b.src[u]
        xu = tgt.actions[u][x]
        for e in src.sets[c2]:
            if pi.components[c2][e] == xu:
                fiber.objects.append((u, e))
    fiber.holds = all(e in phi.members[b.src[u]] for u, e in fiber.objects)
    fiber.classes = 1 if fiber.holds else 0
    return fiber


def _check_predicate(phi: SubPresheaf, pi: PresheafMorphism):
    if phi.of is not pi.source and phi.of != pi.source:
        raise NotSubpresheaf("predicate does not live over the projection's source")
    _require_closed(phi, "predicate")


def lan(phi: SubPresheaf, pi: PresheafMorphism) -> SubPresheaf:
    """Existential quantifier: pointwise colimit over the comma data."""
    _check_predicate(phi, pi)
    gamma = pi.target
    members = {
        c: frozenset(x for x in gamma.sets[c] if comma_colimit(phi, pi, c, x).holds) for c in gamma.base.objects
    }
    return SubPresheaf(gamma, members)


def ran(phi: SubPresheaf, pi: PresheafMorphism) -> SubPresheaf:
    """Universal quantifier: pointwise limit over the comma data."""
    _check_predicate(phi, pi)
    gamma = pi.target
    members = {
        c: frozenset(x for x in gamma.sets[c] if comma_limit(phi, pi, c, x).holds) for c in gamma.base.objects
    }
    return SubPresheaf(gamma, members)


# -- lattices of sub-presheaves ------------------------------------------------


def subpresheaves(p: Presheaf, cap: int = DEFAULT_CAPS["lattice"]) -> list:
    """All sub-presheaves, ordered by the bitmask over ``p.elements()``."""
    elems = p.elements()
    if 1 << len(elems) > cap:
        raise SizeCapExceeded(f"{len(elems)} elements give more than {cap} candidate sub-presheaves")
    out = []
    for mask in range(1 << len(elems)):
        members: dict = {}
        for i, (c, x) in enumerate(elems):
            if mask >> i & 1:
                members.setdefault(c, set()).add(x)
        sp = SubPresheaf(p, members)
        if sp.is_closed():
            out.append(sp)
    return out


def lattice_category(subs: list, name: str = "Sub") -> FinCategory:
    return poset(range(len(subs)), lambda i, j: subs[i] <= subs[j], name=name)


def _check_caps(p: Presheaf, caps: dict):
    b = p.base
    if len(b.objects) > caps["objects"] or len(b.morphisms) > caps["morphisms"]:
        raise SizeCapExceeded(f"base {b!r} exceeds caps")
    if any(len(s) > caps["set_size"] for s in p.sets.values()):
        raise SizeCapExceeded("pointwise set exceeds cap")


def _monotone(cat_src, cat_tgt, subs_src, index_tgt, fn, rep: LawReport, law: str):
    om = {}
    for i, sp in enumerate(subs_src):
        image = fn(sp)
        j = index_tgt.get(image)
        if j is None:
            rep.fail(law, sp, "result is not a sub-presheaf")
            return None
        om[i] = j
    mm = {}
    for m in cat_src.morphisms:
        hom = cat_tgt.homs.get((om[m.src], om[m.tgt]))
        if not hom:
            rep.fail(law, (subs_src[m.src], subs_src[m.tgt]), "not monotone")
            return None
        mm[m.id] = hom[0]
    return FinFunctor(cat_src, cat_tgt, om, mm)


def _poset_nat(F, G):
    d = F.target
    comps = {}
    for x in F.source.objects:
        hom = d.homs.get((F.object_map[x], G.object_map[x]))
        if not hom:
            return None
        comps[x] = hom[0]
    return NatTransform(F, G, comps)


def kan_adjunctions(gamma: Presheaf, a: Presheaf, caps: dict | None = None, lan_fn=None, ran_fn=None):
    """Materialize ``lan -| reindex -| ran`` on the sub-presheaf lattices.

    Returns ``(exists_adj, forall_adj, report)``; the adjunctions are None when
    an operation fails to be a monotone map of lattices (recorded in the
    report).  ``lan_fn``/``ran_fn`` replace the quantifiers, for mutation tests.
    """
    caps = {**DEFAULT_CAPS, **(caps or {})}
    _check_caps(gamma, caps)
    _check_caps(a, caps)
    prod, pi = extend_presheaf(gamma, a)
    lan_fn = lan_fn or (lambda sp: lan(sp, pi))
    ran_fn = ran_fn or (lambda sp: ran(sp, pi))
    base_subs = subpresheaves(gamma, caps["lattice"])
    ext_subs = subpresheaves(prod, caps["lattice"])
    base_cat = lattice_category(base_subs, "Sub(Gamma)")
    ext_cat = lattice_category(ext_subs, "Sub(Gamma[A])")
    base_ix = {sp: i for i, sp in enumerate(base_subs)}
    ext_ix = {sp: i for i, sp in enumerate(ext_subs)}
    rep = LawReport("kan adjunctions")
    E = _monotone(ext_cat, base_cat, ext_subs, base_ix, lan_fn, rep, "exists.monotone")
    P = _monotone(base_cat, ext_cat, base_subs, ext_ix, lambda sp: reindex_presheaf(sp, pi), rep, "reindex.monotone")
    A = _monotone(ext_cat, base_cat, ext_subs, base_ix, ran_fn, rep, "forall.monotone")
    adjs = []
    for left, right, lo, hi, label in ((E, P, ext_cat, base_cat, "exists"), (P, A, base_cat, ext_cat, "forall")):
        if left is None or right is None:
            adjs.append(None)
            continue
        unit = _poset_nat(identity_functor(lo), compose_functors(right, left))
        counit = _poset_nat(compose_functors(left, right), identity_functor(hi))
        if unit is None or counit is None:
            bad = "unit" if unit is None else "counit"
            rep.fail(f"{label}.{bad}_exists", label, f"no {bad} inclusion")
            adjs.append(None)
            continue
        adjs.append(Adjunction(left, right, unit, counit, name=label))
    return adjs[0], adjs[1], rep


def verify_kan_adjunctions(gamma: Presheaf, a: Presheaf, caps: dict | None = None, lan_fn=None, ran_fn=None) -> LawReport:
    ex, fa, rep = kan_adjunctions(gamma, a, caps, lan_fn, ran_fn)
    for adj, label in ((ex, "exists."), (fa, "forall.")):
        if adj is not None:
            rep.absorb(verify_adjunction(adj), label)
    return rep


# -- brute-force oracles ---------------------------------------------------------


def lan_bruteforce(phi: SubPresheaf, pi: PresheafMorphism) -> SubPresheaf:
    """Least action-closed sub-presheaf of Gamma containing the pointwise image."""
    gamma = pi.target
    image = {c: {pi.components[c][e] for e in phi.members[c]} for c in gamma.base.objects}
    candidates = [sp for sp in subpresheaves(gamma) if all(image[c] <= sp.members[c] for c in gamma.base.objects)]
    least = [sp for sp in candidates if all(sp <= other for other in candidates)]
    assert len(least) == 1
    return least[0]


def ran_bruteforce(phi: SubPresheaf, pi: PresheafMorphism) -> SubPresheaf:
    """Greatest sub-presheaf of Gamma whose reindexing lies inside ``phi``."""
    candidates = [sp for sp in subpresheaves(pi.target) if reindex_presheaf(sp, pi) <= phi]
    greatest = [sp for sp in candidates if all(other <= sp for other in candidates)]
    assert len(greatest) == 1
    return greatest[0]


def terminal_presheaf(base: FinCategory, elements) -> Presheaf:
    """A presheaf over a one-object base with trivial actions."""
    (c,) = base.objects
    elements = tuple(elements)
    return Presheaf(base, {c: elements}, {m.id: {x: x for x in elements} for m in base.morphisms})


def enumerate_presheaves(base: FinCategory, max_size: int) -> list:
    """Every presheaf on ``base`` with carriers ``range(k)``, ``k <= max_size``.

    Actions are enumerated freely and filtered by the presheaf laws.
    """
    out = []
    objs = base.objects
    non_id = [m for m in base.morphisms if m.id not in base.identities]
    for sizes in itertools.product(range(max_size + 1), repeat=len(objs)):
        sets = {c: tuple(range(n)) for c, n in zip(objs, sizes)}
        choices = [list(itertools.product(sets[m.src], repeat=len(sets[m.tgt]))) for m in non_id]
        for pick in itertools.product(*choices):
            actions = {base.identity[c]: {x: x for x in sets[c]} for c in objs}
            for m, img in zip(non_id, pick):
                actions[m.id] = dict(zip(sets[m.tgt], img))
            p = Presheaf(base, sets, actions)
            if check_presheaf(p).ok:
                out.append(p)
    return out
