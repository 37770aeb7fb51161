"""Pseudo-limits of small diagrams of finite categories.

A diagram assigns a category ``D(j)`` to each shape object and a functor
``D(e): D(j) -> D(k)`` to each non-identity shape morphism; identities act as
identity functors.  Composition is respected up to invertible comparison
cells ``φ_{g,f}: D(g) D(f) => D(g.f)``.

An object of the pseudo-limit is ``(xs, isos)``: one object ``x_j`` per node
and one isomorphism ``a_e: D(e)(x_j) -> x_k`` per non-identity edge, with
``a_{g.f} . φ_{g,f}(x_j) = a_g . D(g)(a_f)``.  A morphism is a tuple of
components ``u_j`` with ``u_k . a_e = b_e . D(e)(u_j)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import MalformedInput, SearchCapExceeded, ShapeCapExceeded, SizeCapExceeded
from ..fincat import (
    FinCategory,
    FinFunctor,
    Morphism,
    NatTransform,
    check_category,
    check_functor,
    check_natural,
    compose_functors,
    identity_functor,
)
from ..report import LawReport

SHAPE_CAP = {"nodes": 3, "edges": 3}
OBJECT_CAP = 5000


@dataclass(frozen=True)
class PseudoDiagram:
    shape: FinCategory
    nodes: dict  # shape object -> FinCategory
    edges: dict  # non-identity shape morphism -> FinFunctor
    comparisons: dict = field(default_factory=dict)  # (g, f) -> NatTransform D(g)D(f) => D(g.f)

    def functor(self, e) -> FinFunctor:
        if e in self.shape.identities:
            return identity_functor(self.nodes[self.shape.src[e]])
        return self.edges[e]

    @property
    def edge_ids(self) -> list:
        return [m.id for m in self.shape.morphisms if m.id not in self.shape.identities]

    def composable_pairs(self) -> list:
        """Non-identity ``(g, f)`` with ``g . f`` defined, in table order."""
        ids = self.shape.identities
        return [(g, f) for (g, f) in self.shape.compose if g not in ids and f not in ids]

    def phi(self, g, f, x):
        """Component at ``x`` of ``φ_{g,f}``; identity when g or f is an identity."""
        ids = self.shape.identities
        k = self.shape.tgt[g]
        if g in ids or f in ids:
            return self.nodes[k].identity[self.functor(g).object_map[self.functor(f).object_map[x]]]
        return self.comparisons[(g, f)].components[x]


@dataclass(frozen=True)
class PseudoLimit:
    diagram: PseudoDiagram
    category: FinCategory
    projections: dict  # shape object -> FinFunctor L -> D(j)
    cells: dict  # edge -> NatTransform D(e) π_j => π_k
    components: dict  # L morphism id -> tuple of components


@dataclass(frozen=True)
class PseudoCone:
    probe: FinCategory
    functors: dict  # shape object -> FinFunctor probe -> D(j)
    cells: dict  # edge -> NatTransform D(e) F_j => F_k


def _same(f: FinFunctor, g: FinFunctor) -> bool:
    return f.object_map == g.object_map and f.morphism_map == g.morphism_map


def validate_diagram(d: PseudoDiagram) -> PseudoDiagram:
    """Checks caps, typing, and comparison cells; fills in identity cells for
    pairs that compose strictly.  Raises ShapeCapExceeded / MalformedInput."""
    s = d.shape
    if len(s.objects) > SHAPE_CAP["nodes"] or len(d.edge_ids) > SHAPE_CAP["edges"]:
        raise ShapeCapExceeded(
            f"shape has {len(s.objects)} nodes and {len(d.edge_ids)} edges "
            f"(caps {SHAPE_CAP['nodes']}, {SHAPE_CAP['edges']})"
        )
    if not check_category(s).ok:
        raise MalformedInput("shape is not a category")
    for j in s.objects:
        if j not in d.nodes:
            raise MalformedInput(f"no category at node {j!r}")
    for e in d.edge_ids:
        F = d.edges.get(e)
        if F is None:
            raise MalformedInput(f"no functor on edge {e!r}")
        if F.source != d.nodes[s.src[e]] or F.target != d.nodes[s.tgt[e]]:
            raise MalformedInput(f"functor on edge {e!r} has the wrong endpoints")
        if not check_functor(F).ok:
            raise MalformedInput(f"edge {e!r} is not a functor")
    comps = dict(d.comparisons)
    for g, f in d.composable_pairs():
        gf = s.compose[(g, f)]
        lhs = compose_functors(d.functor(g), d.functor(f))
        rhs = d.functor(gf)
        cell = comps.get((g, f))
        if cell is None:
            if not _same(lhs, rhs):
                raise MalformedInput(f"edges ({g!r}, {f!r}) need a comparison cell")
            cell = NatTransform(lhs, rhs, {x: rhs.target.identity[rhs.object_map[x]] for x in rhs.source.objects})
            comps[(g, f)] = cell
        if not _same(cell.source_functor, lhs) or not _same(cell.target_functor, rhs):
            raise MalformedInput(f"comparison cell ({g!r}, {f!r}) has the wrong functors")
        if not check_natural(cell).ok:
            raise MalformedInput(f"comparison cell ({g!r}, {f!r}) is not natural")
        if not all(rhs.target.is_iso(a) for a in cell.components.values()):
            raise MalformedInput(f"comparison cell ({g!r}, {f!r}) is not invertible")
    out = PseudoDiagram(s, d.nodes, d.edges, comps)
    # associativity of the comparison cells on composable triples
    for (h, g) in out.composable_pairs():
        for (g2, f) in out.composable_pairs():
            if g2 != g:
                continue
            hg, gf = s.compose[(h, g)], s.compose[(g, f)]
            dk = d.nodes[s.tgt[h]]
            for x in d.nodes[s.src[f]].objects:
                left = dk.compose[(out.phi(h, gf, x), out.functor(h).morphism_map[out.phi(g, f, x)])]
                right = dk.compose[(out.phi(hg, f, x), out.phi(h, g, out.functor(f).object_map[x]))]
                if left != right:
                    raise MalformedInput(f"comparison cells are not associative at ({h!r}, {g!r}, {f!r}) on {x!r}")
    return out


def pseudo_limit(d: PseudoDiagram, object_cap: int = OBJECT_CAP) -> PseudoLimit:
    d = validate_diagram(d)
    s = d.shape
    nodes = list(s.objects)
    edges = d.edge_ids
    pos = {j: i for i, j in enumerate(nodes)}
    epos = {e: i for i, e in enumerate(edges)}
    pairs = d.composable_pairs()

    def iso_of(e, isos):
        if e in s.identities:
            return None
        return isos[epos[e]]

    def coherent(xs, isos) -> bool:
        for g, f in pairs:
            h = s.compose[(g, f)]
            j, k = s.src[f], s.tgt[g]
            dk = d.nodes[k]
            x = xs[pos[j]]
            a_h = iso_of(h, isos)
            if a_h is None:
                a_h = dk.identity[x]
            lhs = dk.compose[(a_h, d.phi(g, f, x))]
            rhs = dk.compose[(isos[epos[g]], d.functor(g).morphism_map[isos[epos[f]]])]
            if lhs != rhs:
                return False
        return True

    objects = []
    for xs in itertools.product(*(d.nodes[j].objects for j in nodes)):
        options = []
        for e in edges:
            j, k = s.src[e], s.tgt[e]
            options.append(d.nodes[k].isos(d.functor(e).object_map[xs[pos[j]]], xs[pos[k]]))
        for isos in itertools.product(*options):
            if coherent(xs, isos):
                objects.append((xs, isos))
                if len(objects) > object_cap:
                    raise SizeCapExceeded(f"pseudo-limit exceeds {object_cap} objects")

    def is_morphism(src, tgt, us) -> bool:
        for e in edges:
            j, k = s.src[e], s.tgt[e]
            dk = d.nodes[k]
            if dk.compose[(us[pos[k]], src[1][epos[e]])] != dk.compose[
                (tgt[1][epos[e]], d.functor(e).morphism_map[us[pos[j]]])
            ]:
                return False
        return True

    morphisms = []
    components = {}
    index = {}
    for src in objects:
        for tgt in objects:
            homs = [d.nodes[j].hom(src[0][pos[j]], tgt[0][pos[j]]) for j in nodes]
            for us in itertools.product(*homs):
                if is_morphism(src, tgt, us):
                    i = len(morphisms)
                    morphisms.append(Morphism(i, src, tgt))
                    components[i] = us
                    index[(src, tgt, us)] = i
    identity = {o: index[(o, o, tuple(d.nodes[j].identity[o[0][pos[j]]] for j in nodes))] for o in objects}
    compose = {}
    out_of: dict = {}
    for m in morphisms:
        out_of.setdefault(m.src, []).append(m)
    for f in morphisms:
        for g in out_of.get(f.tgt, ()):
            us = tuple(d.nodes[j].compose[(components[g.id][pos[j]], components[f.id][pos[j]])] for j in nodes)
            compose[(g.id, f.id)] = index[(f.src, g.tgt, us)]
    L = FinCategory(tuple(objects), tuple(morphisms), identity, compose, name="pseudo-limit")
    projections = {
        j: FinFunctor(
            L,
            d.nodes[j],
            {o: o[0][pos[j]] for o in objects},
            {i: components[i][pos[j]] for i in components},
            name=f"pi_{j}",
        )
        for j in nodes
    }
    cells = {
        e: NatTransform(
            compose_functors(d.functor(e), projections[s.src[e]]),
            projections[s.tgt[e]],
            {o: o[1][epos[e]] for o in objects},
            name=f"alpha_{e}",
        )
        for e in edges
    }
    return PseudoLimit(d, L, projections, cells, components)


def check_pseudo_limit(pl: PseudoLimit) -> LawReport:
    rep = LawReport("pseudo-limit")
    rep.absorb(check_category(pl.category), "limit.")
    for j, p in pl.projections.items():
        rep.absorb(check_functor(p), "projection.")
    for e, cell in pl.cells.items():
        rep.absorb(check_natural(cell), "cell.")
        rep.tick("cell_invertible")
        if not all(cell.category.is_iso(a) for a in cell.components.values()):
            rep.fail("cell_invertible", e)
    return rep


def limit_cone(pl: PseudoLimit) -> PseudoCone:
    return PseudoCone(pl.category, dict(pl.projections), dict(pl.cells))


def validate_cone(d: PseudoDiagram, cone: PseudoCone) -> None:
    """Raises MalformedInput unless ``cone`` is a pseudo-cone over ``d``."""
    s = d.shape
    for j in s.objects:
        F = cone.functors.get(j)
        if F is None or F.source != cone.probe or F.target != d.nodes[j]:
            raise MalformedInput(f"cone functor at node {j!r} is missing or mistyped")
        if not check_functor(F).ok:
            raise MalformedInput(f"cone leg at node {j!r} is not a functor")
    for e in d.edge_ids:
        cell = cone.cells.get(e)
        if cell is None:
            raise MalformedInput(f"cone has no cell on edge {e!r}")
        want_src = compose_functors(d.functor(e), cone.functors[s.src[e]])
        if not _same(cell.source_functor, want_src) or not _same(cell.target_functor, cone.functors[s.tgt[e]]):
            raise MalformedInput(f"cone cell on edge {e!r} has the wrong functors")
        if not check_natural(cell).ok:
            raise MalformedInput(f"cone cell on edge {e!r} is not natural")
        dk = d.nodes[s.tgt[e]]
        for m, a in cell.components.items():
            if not dk.is_iso(a):
                raise MalformedInput(f"cone cell on edge {e!r} is not invertible at {m!r}")
    for g, f in d.composable_pairs():
        h = s.compose[(g, f)]
        j, k = s.src[f], s.tgt[g]
        dk = d.nodes[k]
        for m in cone.probe.objects:
            Fm = cone.functors[j].object_map[m]
            b_h = dk.identity[Fm] if h in s.identities else cone.cells[h].components[m]
            lhs = dk.compose[(b_h, d.phi(g, f, Fm))]
            rhs = dk.compose[(cone.cells[g].components[m], d.functor(g).morphism_map[cone.cells[f].components[m]])]
            if lhs != rhs:
                raise MalformedInput(f"cone cells violate the cocycle condition at ({g!r}, {f!r}) on {m!r}")


def _candidates(pl: PseudoLimit, cone: PseudoCone, m, budget: list) -> list:
    """All ``(X, γ)`` with ``X`` in L and ``γ_j: x_j -> F_j(m)`` invertible,
    satisfying ``γ_k . a_e = β_e(m) . D(e)(γ_j)`` for every edge."""
    d = pl.diagram
    s = d.shape
    nodes = list(s.objects)
    pos = {j: i for i, j in enumerate(nodes)}
    epos = {e: i for i, e in enumerate(d.edge_ids)}
    out = []
    for X in pl.category.objects:
        options = [d.nodes[j].isos(X[0][pos[j]], cone.functors[j].object_map[m]) for j in nodes]
        for gammas in itertools.product(*options):
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchCapExceeded("mediator search exceeded its cap")
            good = True
            for e in d.edge_ids:
                j, k = s.src[e], s.tgt[e]
                dk = d.nodes[k]
                lhs = dk.compose[(gammas[pos[k]], X[1][epos[e]])]
                rhs = dk.compose[(cone.cells[e].components[m], d.functor(e).morphism_map[gammas[pos[j]]])]
                if lhs != rhs:
                    good = False
                    break
            if good:
                out.append((X, gammas))
    return out


@dataclass(frozen=True)
class Mediator:
    functor: FinFunctor  # probe -> L
    gammas: dict  # probe object -> tuple of γ_j(m)


def _assemble(pl: PseudoLimit, cone: PseudoCone, choice: dict) -> Mediator | None:
    """Build U from per-object choices, forcing it on morphisms.

    Returns None if some forced tuple is not a morphism of L.
    """
    d = pl.diagram
    nodes = list(d.shape.objects)
    L = pl.category
    lookup = {(L.src[i], L.tgt[i], us): i for i, us in pl.components.items()}
    mm = {}
    for u in cone.probe.morphisms:
        (X, gs), (Y, hs) = choice[u.src], choice[u.tgt]
        us = []
        for p, j in enumerate(nodes):
            dj = d.nodes[j]
            inv = dj.inverse(hs[p])
            us.append(dj.compose[(inv, dj.compose[(cone.functors[j].morphism_map[u.id], gs[p])])])
        i = lookup.get((X, Y, tuple(us)))
        if i is None:
            return None
        mm[u.id] = i
    U = FinFunctor(cone.probe, L, {m: choice[m][0] for m in cone.probe.objects}, mm, name="U")
    return Mediator(U, {m: choice[m][1] for m in cone.probe.objects})


def find_mediators(pl: PseudoLimit, cone: PseudoCone, limit: int = 50, cap: int = 200_000) -> tuple:
    """Up to ``limit`` mediators and the per-object candidate lists."""
    validate_cone(pl.diagram, cone)
    budget = [cap]
    cands = {m: _candidates(pl, cone, m, budget) for m in cone.probe.objects}
    found = []
    objs = list(cone.probe.objects)
    for combo in itertools.product(*(cands[m] for m in objs)):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchCapExceeded("mediator search exceeded its cap")
        med = _assemble(pl, cone, dict(zip(objs, combo)))
        if med is not None:
            found.append(med)
            if len(found) >= limit:
                break
    return found, cands


def connecting_cells(pl: PseudoLimit, a: Mediator, b: Mediator, m) -> list:
    """Morphisms ``θ_m: U(m) -> U'(m)`` of L with ``γ'_j(m) . π_j(θ_m) = γ_j(m)``."""
    d = pl.diagram
    nodes = list(d.shape.objects)
    L = pl.category
    out = []
    for t in L.hom(a.functor.object_map[m], b.functor.object_map[m]):
        us = pl.components[t]
        if all(
            d.nodes[j].compose[(b.gammas[m][p], us[p])] == a.gammas[m][p] for p, j in enumerate(nodes)
        ):
            out.append(t)
    return out


def verify_pseudo_universal(pl: PseudoLimit, cone: PseudoCone, limit: int = 50, cap: int = 200_000) -> LawReport:
    """Existence of a mediator ``(U, γ)`` and uniqueness up to a unique
    invertible 2-cell θ compatible with the γ's.

    Uniqueness is checked between the first mediator and up to ``limit``
    others, plus, object by object, against every candidate value.
    """
    rep = LawReport("pseudo-limit universal property")
    d = pl.diagram
    s = d.shape
    nodes = list(s.objects)
    L = pl.category
    mediators, cands = find_mediators(pl, cone, limit, cap)
    rep.tick("mediator_exists")
    if not mediators:
        rep.fail("mediator_exists", cone.probe.name or "probe")
        return rep
    base = mediators[0]
    for med in mediators:
        rep.absorb(check_functor(med.functor), "mediator.")
        for p, j in enumerate(nodes):
            for m in cone.probe.objects:
                rep.tick("gamma_invertible")
                if not d.nodes[j].is_iso(med.gammas[m][p]):
                    rep.fail("gamma_invertible", (j, m))
        # γ_j: π_j U => F_j natural
        for p, j in enumerate(nodes):
            dj = d.nodes[j]
            for u in cone.probe.morphisms:
                rep.tick("gamma_natural")
                lhs = dj.compose[(med.gammas[u.tgt][p], pl.projections[j].morphism_map[med.functor.morphism_map[u.id]])]
                rhs = dj.compose[(cone.functors[j].morphism_map[u.id], med.gammas[u.src][p])]
                if lhs != rhs:
                    rep.fail("gamma_natural", (j, u.id))
        # compatibility with the cone cells
        epos = {e: i for i, e in enumerate(d.edge_ids)}
        pos = {j: i for i, j in enumerate(nodes)}
        for e in d.edge_ids:
            j, k = s.src[e], s.tgt[e]
            dk = d.nodes[k]
            for m in cone.probe.objects:
                rep.tick("compatibility")
                X = med.functor.object_map[m]
                g = med.gammas[m]
                lhs = dk.compose[(g[pos[k]], X[1][epos[e]])]
                rhs = dk.compose[(cone.cells[e].components[m], d.functor(e).morphism_map[g[pos[j]]])]
                if lhs != rhs:
                    rep.fail("compatibility", (e, m))
        # uniqueness: a unique invertible θ, natural in m
        thetas = {}
        for m in cone.probe.objects:
            rep.tick("theta_unique")
            ts = connecting_cells(pl, base, med, m)
            if len(ts) != 1:
                rep.fail("theta_unique", m, f"{len(ts)} connecting cells")
                continue
            thetas[m] = ts[0]
            rep.tick("theta_invertible")
            if not L.is_iso(ts[0]):
                rep.fail("theta_invertible", m)
        if len(thetas) == len(cone.probe.objects):
            for u in cone.probe.morphisms:
                rep.tick("theta_natural")
                lhs = L.compose[(thetas[u.tgt], base.functor.morphism_map[u.id])]
                rhs = L.compose[(med.functor.morphism_map[u.id], thetas[u.src])]
                if lhs != rhs:
                    rep.fail("theta_natural", u.id)
    # every per-object candidate is connected to the base choice
    for m, options in cands.items():
        for X, gs in options:
            rep.tick("candidate_connected")
            # only the value at m matters to connecting_cells
            alt = Mediator(
                FinFunctor(cone.probe, L, {**base.functor.object_map, m: X}, base.functor.morphism_map),
                {**base.gammas, m: gs},
            )
            ts = connecting_cells(pl, base, alt, m)
            if len(ts) != 1 or not L.is_iso(ts[0]):
                rep.fail("candidate_connected", (m, X))
    return rep


# -- builders --------------------------------------------------------------------


def single_node(c: FinCategory) -> PseudoDiagram:
    shape = FinCategory(("j",), (Morphism("id_j", "j", "j"),), {"j": "id_j"}, {("id_j", "id_j"): "id_j"})
    return PseudoDiagram(shape, {"j": c}, {})


def single_edge(F: FinFunctor) -> PseudoDiagram:
    from ..fincat import arrow

    s = arrow()
    (e,) = [m.id for m in s.morphisms if m.id not in s.identities]
    return PseudoDiagram(s, {s.src[e]: F.source, s.tgt[e]: F.target}, {e: F})


def discrete_pair(c: FinCategory, d: FinCategory) -> PseudoDiagram:
    from ..fincat import discrete

    s = discrete((0, 1))
    return PseudoDiagram(s, {0: c, 1: d}, {})


def named_object_cone(pl: PseudoLimit, obj) -> PseudoCone:
    """The cone from the terminal category picking out ``obj`` of L."""
    from ..fincat import terminal

    t = terminal()
    (x,) = t.objects
    (i,) = [m.id for m in t.morphisms]
    L = pl.category
    K = FinFunctor(t, L, {x: obj}, {i: L.identity[obj]}, name=f"name {obj!r}")
    return precompose_cone(pl, K)


def precompose_cone(pl: PseudoLimit, K: FinFunctor) -> PseudoCone:
    """The limit cone restricted along ``K: M -> L``."""
    from ..fincat import whisker_left

    functors = {j: compose_functors(p, K) for j, p in pl.projections.items()}
    cells = {e: whisker_left(c, K) for e, c in pl.cells.items()}
    return PseudoCone(K.source, functors, cells)
