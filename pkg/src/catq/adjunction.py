"""Adjunctions F -| G between finite categories.

Conventions: ``left = F: C -> D``, ``right = G: D -> C``, unit ``Id_C => G F``,
counit ``F G => Id_D``.  The transpose bijection is

    forward:  Hom_C(X, G Y) -> Hom_D(F X, Y),   h |-> counit_Y . F(h)
    backward: Hom_D(F X, Y) -> Hom_C(X, G Y),   the unique preimage of forward
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import EndpointMismatch, MalformedInput, MissingComparisonCell, NotFound, SizeCapExceeded
from .fincat import (
    FinCategory,
    FinFunctor,
    NatTransform,
    check_functor,
    check_natural,
    compose_functors,
    identity_functor,
    is_invertible,
)
from .report import LawReport

DEFAULT_CAPS = {"objects": 7, "morphisms": 60}


@dataclass(frozen=True)
class Adjunction:
    left: FinFunctor
    right: FinFunctor
    unit: NatTransform
    counit: NatTransform
    name: str = field(default="", compare=False)

    @property
    def lower(self) -> FinCategory:
        """Source category of the left adjoint."""
        return self.left.source

    @property
    def upper(self) -> FinCategory:
        return self.left.target


@dataclass
class HomBijectionWitness:
    forward: dict
    backward: dict
    natural_in: dict = field(default_factory=dict)


def _preimages(functor: FinFunctor) -> dict:
    out: dict = {}
    for y, x in functor.object_map.items():
        out.setdefault(x, []).append(y)
    return out


def _unique(candidates, what):
    if len(candidates) != 1:
        raise EndpointMismatch(f"{what}: {len(candidates)} candidates, pass it explicitly")
    return candidates[0]


def transpose_forward(adj: Adjunction, h, target=None):
    """``counit_Y . F(h)`` for ``h: X -> G(Y)``.

    ``target`` is Y; it may be omitted when G hits ``tgt(h)`` exactly once.
    """
    c, d = adj.lower, adj.upper
    w = c.tgt[h]
    if target is None:
        target = _unique(_preimages(adj.right).get(w, []), f"object Y with G(Y) = {w!r}")
    elif adj.right.object_map[target] != w:
        raise EndpointMismatch(f"{h!r} does not land in G({target!r})")
    return d.compose[(adj.counit.components[target], adj.left.morphism_map[h])]


def transpose_backward(adj: Adjunction, g, source=None):
    """Unique ``h: X -> G(Y)`` whose forward transpose is ``g: F(X) -> Y``.

    Found by exhaustive search of the hom-set; raises EndpointMismatch if the
    preimage is missing or not unique.
    """
    c, d = adj.lower, adj.upper
    fx, y = d.src[g], d.tgt[g]
    if source is None:
        source = _unique(_preimages(adj.left).get(fx, []), f"object X with F(X) = {fx!r}")
    elif adj.left.object_map[source] != fx:
        raise EndpointMismatch(f"{g!r} does not start at F({source!r})")
    hits = [h for h in c.hom(source, adj.right.object_map[y]) if transpose_forward(adj, h, y) == g]
    if len(hits) != 1:
        raise EndpointMismatch(f"{g!r} has {len(hits)} preimages under the transpose")
    return hits[0]


def transpose_backward_formula(adj: Adjunction, g, source):
    """``G(g) . unit_X``, the closed form of the backward transpose."""
    c = adj.lower
    return c.compose[(adj.right.morphism_map[g], adj.unit.components[source])]


def hom_bijection(adj: Adjunction, x, y) -> HomBijectionWitness:
    c, d = adj.lower, adj.upper
    fwd = {h: transpose_forward(adj, h, y) for h in c.hom(x, adj.right.object_map[y])}
    bwd = {g: transpose_backward(adj, g, x) for g in d.hom(adj.left.object_map[x], y)}
    return HomBijectionWitness(fwd, bwd, {"pair": (x, y)})


def verify_adjunction(adj: Adjunction) -> LawReport:
    """Exhaustively check an adjunction.

    Covers functor laws, unit/counit typing and naturality, both triangle
    identities, both round trips of the transpose bijection on every hom-pair,
    and naturality of the bijection in each variable.
    """
    F, G, eta, eps = adj.left, adj.right, adj.unit, adj.counit
    c, d = F.source, F.target
    if G.source is not d and G.source != d or G.target is not c and G.target != c:
        raise MalformedInput("left and right functors are not opposed")
    rep = LawReport(adj.name or "adjunction")
    rep.absorb(check_functor(F), "left.")
    rep.absorb(check_functor(G), "right.")
    if not rep.ok:
        return rep
    Fo, Fm, Go, Gm = F.object_map, F.morphism_map, G.object_map, G.morphism_map
    ueta, ueps = eta.components, eps.components
    for x in c.objects:
        if x not in ueta:
            raise MalformedInput(f"unit has no component at {x!r}")
    for y in d.objects:
        if y not in ueps:
            raise MalformedInput(f"counit has no component at {y!r}")

    for x in c.objects:
        rep.tick("unit_typing")
        a = ueta[x]
        if c.src[a] != x or c.tgt[a] != Go[Fo[x]]:
            rep.fail("unit_typing", x)
    for y in d.objects:
        rep.tick("counit_typing")
        a = ueps[y]
        if d.src[a] != Fo[Go[y]] or d.tgt[a] != y:
            rep.fail("counit_typing", y)
    if not rep.ok:
        return rep

    C, D = c.compose, d.compose
    for m in c.morphisms:
        rep.tick("unit_naturality")
        if C[(ueta[m.tgt], m.id)] != C[(Gm[Fm[m.id]], ueta[m.src])]:
            rep.fail("unit_naturality", m.id)
    for m in d.morphisms:
        rep.tick("counit_naturality")
        if D[(ueps[m.tgt], Fm[Gm[m.id]])] != D[(m.id, ueps[m.src])]:
            rep.fail("counit_naturality", m.id)

    for x in c.objects:
        rep.tick("triangle_1")
        if D[(ueps[Fo[x]], Fm[ueta[x]])] != d.identity[Fo[x]]:
            rep.fail("triangle_1", x, "counit_F(X) . F(unit_X) != id")
    for y in d.objects:
        rep.tick("triangle_2")
        if C[(Gm[ueps[y]], ueta[Go[y]])] != c.identity[Go[y]]:
            rep.fail("triangle_2", y, "G(counit_Y) . unit_G(Y) != id")

    g_pre = _preimages(G)

    def fwd(h, y):
        return D[(ueps[y], Fm[h])]

    def bwd(g, x):
        return C[(Gm[g], ueta[x])]

    # round trips: every h: X -> GY, and every g: FX -> Y
    for h_m in c.morphisms:
        h, x = h_m.id, h_m.src
        for y in g_pre.get(h_m.tgt, ()):
            rep.tick("round_trip_forward")
            g = fwd(h, y)
            if d.src[g] != Fo[x] or d.tgt[g] != y or bwd(g, x) != h:
                rep.fail("round_trip_forward", (h, y))
            for u in c.incoming[x]:
                rep.tick("natural_in_source")
                if fwd(C[(h, u)], y) != D[(g, Fm[u])]:
                    rep.fail("natural_in_source", (u, h, y))
            for v in d.outgoing[y]:
                rep.tick("natural_in_target")
                if fwd(C[(Gm[v], h)], d.tgt[v]) != D[(v, g)]:
                    rep.fail("natural_in_target", (h, y, v))
    f_pre = _preimages(F)
    for g_m in d.morphisms:
        for x in f_pre.get(g_m.src, ()):
            rep.tick("round_trip_backward")
            h = bwd(g_m.id, x)
            if c.src[h] != x or c.tgt[h] != Go[g_m.tgt] or fwd(h, g_m.tgt) != g_m.id:
                rep.fail("round_trip_backward", (g_m.id, x))
    return rep


def _check_caps(cat: FinCategory, caps: dict):
    if len(cat.objects) > caps["objects"] or len(cat.morphisms) > caps["morphisms"]:
        raise SizeCapExceeded(
            f"{cat!r} exceeds caps ({caps['objects']} objects, {caps['morphisms']} morphisms)"
        )


def _is_universal(F: FinFunctor, z, e) -> bool:
    """Whether ``e: F(z) -> y`` is a universal arrow from F to ``y``."""
    c, d = F.source, F.target
    y = d.tgt[e]
    for x in c.objects:
        fx = F.object_map[x]
        hits = {}
        for h in c.hom(x, z):
            g = d.compose[(e, F.morphism_map[h])]
            if g in hits:
                return False
            hits[g] = h
        if len(hits) != len(d.hom(fx, y)):
            return False
    return True


def _factor(F: FinFunctor, x, z, e, g):
    """The unique ``h: x -> z`` with ``e . F(h) = g``."""
    c, d = F.source, F.target
    for h in c.hom(x, z):
        if d.compose[(e, F.morphism_map[h])] == g:
            return h
    raise NotFound(f"{g!r} does not factor through {e!r}")


def find_right_adjoint(F: FinFunctor, caps: dict | None = None) -> Adjunction:
    """Build a right adjoint of ``F`` from universal arrows, or raise NotFound.

    Candidates are scanned in object then morphism order, so the result is
    deterministic.
    """
    caps = {**DEFAULT_CAPS, **(caps or {})}
    c, d = F.source, F.target
    _check_caps(c, caps)
    _check_caps(d, caps)
    choice = {}
    for y in d.objects:
        found = None
        for z in c.objects:
            for e in d.hom(F.object_map[z], y):
                if _is_universal(F, z, e):
                    found = (z, e)
                    break
            if found:
                break
        if found is None:
            raise NotFound(f"no universal arrow from F to {y!r}", witness=y)
        choice[y] = found
    g_obj = {y: z for y, (z, _) in choice.items()}
    counit = {y: e for y, (_, e) in choice.items()}
    g_mor = {}
    for v in d.morphisms:
        z, e = choice[v.src]
        z2, e2 = choice[v.tgt]
        g_mor[v.id] = _factor(F, z, z2, e2, d.compose[(v.id, e)])
    G = FinFunctor(d, c, g_obj, g_mor, name="G")
    unit = {x: _factor(F, x, g_obj[F.object_map[x]], counit[F.object_map[x]], d.identity[F.object_map[x]]) for x in c.objects}
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    return Adjunction(
        F,
        G,
        NatTransform(identity_functor(c), GF, unit, name="unit"),
        NatTransform(FG, identity_functor(d), counit, name="counit"),
        name="found adjunction",
    )


# -- lifted (fiberwise) adjunction data --------------------------------------


@dataclass(frozen=True)
class LiftedSquare:
    """Fiber adjunctions over the two ends of a base map ``f: src -> tgt``.

    ``reindex`` is f* on the fibers of the right adjoint's target (the base
    fibers), ``reindex_ext`` is f* on the fibers the left adjoint lands in.
    ``left_cell: reindex_ext . L_tgt => L_src . reindex`` and
    ``right_cell: reindex . R_tgt => R_src . reindex_ext`` are the supplied
    invertible comparison 2-cells.
    """

    base_morphism: object
    reindex: FinFunctor
    reindex_ext: FinFunctor
    source_adj: Adjunction
    target_adj: Adjunction
    left_cell: NatTransform | None = None
    right_cell: NatTransform | None = None


def _same(f: FinFunctor, g: FinFunctor) -> bool:
    return f.object_map == g.object_map and f.morphism_map == g.morphism_map


def check_lifted_naturality(family: Sequence[LiftedSquare]) -> LawReport:
    """Check the unit/counit base-change squares of a family of fiber adjunctions.

    For each base map: both comparison cells are natural, correctly typed and
    invertible; the unit square
        R_s(lambda) . rho_{L_t} . f*(unit^t) = unit^s_{f*}
    and the counit square
        counit^s_{f*} . L_s(rho) . lambda_{R_t} = f*(counit^t)
    commute componentwise; and the transported unit comparison is itself
    natural in the 2-cells of the base fiber.
    """
    rep = LawReport("lifted adjunction family")
    for k, sq in enumerate(family):
        if sq.left_cell is None or sq.right_cell is None:
            raise MissingComparisonCell(f"square {k} ({sq.base_morphism!r}) lacks a comparison cell")
        s, t = sq.source_adj, sq.target_adj
        fstar, fext = sq.reindex, sq.reindex_ext
        lam, rho = sq.left_cell, sq.right_cell
        tag = sq.base_morphism

        rep.tick("cell_typing", 2)
        lam_ok = _same(lam.source_functor, compose_functors(fext, t.left)) and _same(
            lam.target_functor, compose_functors(s.left, fstar)
        )
        rho_ok = _same(rho.source_functor, compose_functors(fstar, t.right)) and _same(
            rho.target_functor, compose_functors(s.right, fext)
        )
        if not lam_ok:
            rep.fail("cell_typing", (tag, "left"))
        if not rho_ok:
            rep.fail("cell_typing", (tag, "right"))
        if not (lam_ok and rho_ok):
            continue
        for cell, label in ((lam, "left"), (rho, "right")):
            nat = check_natural(cell)
            rep.tick("cell_natural")
            if not nat.ok:
                rep.fail("cell_natural", (tag, label, nat.witness()))
                continue
            rep.tick("cell_invertible")
            if not is_invertible(cell):
                bad = next(x for x, a in cell.components.items() if not cell.category.is_iso(a))
                rep.fail("cell_invertible", (tag, label, bad))
        if not rep.ok:
            continue

        base_s, base_t = s.lower, t.lower  # fibers of the base contexts
        ext_s = s.upper
        Cs, Es = base_s.compose, ext_s.compose
        kappa = {}
        for psi in base_t.objects:
            rep.tick("unit_square")
            lpsi = t.left.object_map[psi]
            fpsi = fstar.object_map[psi]
            via = Cs[(s.right.morphism_map[lam[psi]], Cs[(rho[lpsi], fstar.morphism_map[t.unit[psi]])])]
            kappa[psi] = Cs[(s.right.morphism_map[lam[psi]], rho[lpsi])]
            if via != s.unit[fpsi]:
                rep.fail("unit_square", (tag, psi))
        for phi in t.upper.objects:
            rep.tick("counit_square")
            rphi = t.right.object_map[phi]
            fphi = fext.object_map[phi]
            via = Es[(s.counit[fphi], Es[(s.left.morphism_map[rho[phi]], lam[rphi])])]
            if via != fext.morphism_map[t.counit[phi]]:
                rep.fail("counit_square", (tag, phi))
        # the composite comparison kappa: f* R_t L_t => R_s L_s f* must be natural
        two_cell = NatTransform(
            compose_functors(fstar, compose_functors(t.right, t.left)),
            compose_functors(compose_functors(s.right, s.left), fstar),
            kappa,
        )
        nat = check_natural(two_cell)
        rep.tick("two_naturality", nat.checks.get("naturality", 0))
        if not nat.ok:
            rep.fail("two_naturality", (tag, nat.witness()))
    return rep
