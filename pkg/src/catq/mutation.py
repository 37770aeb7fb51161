"""Single-fault mutants for every suite.

Each mutant alters exactly one table entry, one component, or one map of an
otherwise valid structure and runs the suite's own checker on the result.
A mutant is detected when the checker reports a violation carrying a witness.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from . import grothendieck
from .adjunction import verify_adjunction
from .coherence import beck, dtt, pseudolimit
from .coherence.spans import (
    Grid,
    SpanMorphism,
    associator,
    check_coherence,
    horizontal,
    identity_cell,
    interchange_check,
    span,
)
from .coherence.strictify import PathCell, check_routes, evaluate_term
from .errors import CatqError
from .fincat import FinCategory, FinFunctor, NatTransform, arrow, check_category, check_functor, check_natural, generated_category
from .presheaf import Presheaf, SubPresheaf, extend_presheaf, lan, ran, verify_kan_adjunctions
from .report import LawReport
from .setlogic import Context, as_adjunction_exists, as_adjunction_forall
from .slice import FinMap, families_over, verify_slice_adjunctions

SENTINEL = "<mutant>"


@dataclass(frozen=True)
class Mutant:
    suite: str
    description: str
    report: LawReport

    @property
    def detected(self) -> bool:
        return not self.report.ok and self.report.witness() is not None


def _run(fn) -> LawReport:
    """Checkers may also reject a mutant outright; that counts as a witness."""
    try:
        return fn()
    except CatqError as e:
        rep = LawReport("rejected")
        rep.fail("rejected", getattr(e, "witness", None) or str(e), type(e).__name__)
        return rep


def _other(current, candidates):
    for c in candidates:
        if c != current:
            return c
    return SENTINEL


def _set(table: dict, key, value) -> dict:
    out = dict(table)
    out[key] = value
    return out


# -- structure-level edits -------------------------------------------------------


def mutate_compose(c: FinCategory, k: int = 0) -> FinCategory:
    """Change the k-th non-identity composite, preferring a parallel morphism."""
    ids = c.identities
    pairs = [p for p in c.compose if p[0] not in ids and p[1] not in ids] or list(c.compose)
    g, f = pairs[k % len(pairs)]
    gf = c.compose[(g, f)]
    alt = _other(gf, c.hom(c.src[f], c.tgt[g]) + [m.id for m in c.morphisms])
    return replace(c, compose=_set(c.compose, (g, f), alt))


def mutate_identity(c: FinCategory, k: int = 0) -> FinCategory:
    x = c.objects[k % len(c.objects)]
    alt = _other(c.identity[x], c.hom(x, x) + [m.id for m in c.morphisms])
    return replace(c, identity=_set(c.identity, x, alt))


def mutate_functor_morphism(F: FinFunctor, k: int = 0) -> FinFunctor:
    m = F.source.morphisms[k % len(F.source.morphisms)].id
    cur = F.morphism_map[m]
    alt = _other(cur, F.target.hom(F.target.src[cur], F.target.tgt[cur]) + [x.id for x in F.target.morphisms])
    return replace(F, morphism_map=_set(F.morphism_map, m, alt))


def mutate_functor_object(F: FinFunctor, k: int = 0) -> FinFunctor:
    x = F.source.objects[k % len(F.source.objects)]
    return replace(F, object_map=_set(F.object_map, x, _other(F.object_map[x], F.target.objects)))


def mutate_component(t: NatTransform, k: int = 0) -> NatTransform:
    x = t.source_functor.source.objects[k % len(t.components)]
    cur = t.components[x]
    cat = t.category
    alt = _other(cur, cat.hom(cat.src[cur], cat.tgt[cur]) + [m.id for m in cat.morphisms])
    return replace(t, components=_set(t.components, x, alt))


def _z2_times_arrow() -> FinCategory:
    return generated_category({0: 2, 1: 2}, [(0, 0, (1, 0)), (0, 1, (0, 1)), (1, 1, (1, 0))])


# -- per-suite mutants -------------------------------------------------------------


def core_mutants() -> list:
    c = _z2_times_arrow()
    # the arrow picks out the first generator 0 -> 1
    gen = next(m.id for m in c.morphisms if m.src == 0 and m.tgt == 1)
    a = arrow()
    F = FinFunctor(a, c, {0: 0, 1: 1}, {m.id: (c.identity[m.src] if m.src == m.tgt else gen) for m in a.morphisms})
    ident = NatTransform(F, F, {x: c.identity[F.object_map[x]] for x in a.objects})
    out = [
        Mutant("core", "composite entry", _run(lambda: check_category(mutate_compose(c, 0)))),
        Mutant("core", "second composite entry", _run(lambda: check_category(mutate_compose(c, 3)))),
        Mutant("core", "identity entry", _run(lambda: check_category(mutate_identity(c, 1)))),
        Mutant("core", "functor morphism image", _run(lambda: check_functor(mutate_functor_morphism(F, 2)))),
        Mutant("core", "functor object image", _run(lambda: check_functor(mutate_functor_object(F, 1)))),
        Mutant("core", "natural component", _run(lambda: check_natural(mutate_component(ident, 0)))),
    ]
    return out


def quantifier_mutants() -> list:
    gamma, a = Context(("1", "2")), Context(("a", "b"))
    fa = as_adjunction_forall(gamma, a)
    ex = as_adjunction_exists(gamma, a)
    return [
        Mutant("quantifiers", "forall: unit component", _run(lambda: verify_adjunction(replace(fa, unit=mutate_component(fa.unit, 1))))),
        Mutant("quantifiers", "forall: counit component", _run(lambda: verify_adjunction(replace(fa, counit=mutate_component(fa.counit, 2))))),
        Mutant("quantifiers", "forall: right adjoint object image", _run(lambda: verify_adjunction(replace(fa, right=mutate_functor_object(fa.right, 5))))),
        Mutant("quantifiers", "exists: left adjoint morphism image", _run(lambda: verify_adjunction(replace(ex, left=mutate_functor_morphism(ex.left, 7))))),
        Mutant("quantifiers", "exists: unit component", _run(lambda: verify_adjunction(replace(ex, unit=mutate_component(ex.unit, 3))))),
    ]


def _corrupt_first(d: dict) -> dict:
    if not d:
        return d
    k = next(iter(d))
    return _set(d, k, SENTINEL)


def slice_mutants() -> list:
    from .slice import pi_transpose, pi_untranspose, sigma_transpose, sigma_untranspose

    f = FinMap(Context((0, 1, 2)), Context(("p", "q")), {0: "p", 1: "p", 2: "q"})
    xs = list(families_over(f.source, 2))
    ys = list(families_over(f.target, 2))

    def run(ops):
        return _run(lambda: verify_slice_adjunctions(f, xs, ys, naturality=False, ops=ops))

    return [
        Mutant("slice", "sigma transpose entry", run({"sigma_transpose": lambda f_, x, h: _corrupt_first(sigma_transpose(f_, x, h))})),
        Mutant("slice", "sigma untranspose entry", run({"sigma_untranspose": lambda k: _corrupt_first(sigma_untranspose(k))})),
        Mutant("slice", "pi transpose entry", run({"pi_transpose": lambda f_, y, k: _corrupt_first(pi_transpose(f_, y, k))})),
        Mutant("slice", "pi untranspose entry", run({"pi_untranspose": lambda m: _corrupt_first(pi_untranspose(m))})),
        Mutant(
            "slice",
            "sigma transpose on the last element",
            run({"sigma_transpose": lambda f_, x, h: _corrupt_last(sigma_transpose(f_, x, h))}),
        ),
    ]


def _corrupt_last(d: dict) -> dict:
    if not d:
        return d
    return _set(d, list(d)[-1], SENTINEL)


def _kan_inputs():
    a = arrow()
    u = next(m.id for m in a.morphisms if m.src != m.tgt)
    i0, i1 = a.identity[0], a.identity[1]
    gamma = Presheaf(a, {0: ("p", "q"), 1: ("r",)}, {i0: {"p": "p", "q": "q"}, i1: {"r": "r"}, u: {"r": "p"}})
    aa = Presheaf(a, {0: ("s", "t"), 1: ("v",)}, {i0: {"s": "s", "t": "t"}, i1: {"v": "v"}, u: {"v": "t"}})
    return gamma, aa


def _drop_one(sp: SubPresheaf, at) -> SubPresheaf:
    members = dict(sp.members)
    if members[at]:
        first = next(x for x in sp.of.sets[at] if x in members[at])
        members[at] = members[at] - {first}
    return SubPresheaf(sp.of, members)


def _add_one(sp: SubPresheaf, at) -> SubPresheaf:
    members = dict(sp.members)
    missing = [x for x in sp.of.sets[at] if x not in members[at]]
    if missing:
        members[at] = members[at] | {missing[0]}
    return SubPresheaf(sp.of, members)


def kan_mutants() -> list:
    gamma, aa = _kan_inputs()
    _, pi = extend_presheaf(gamma, aa)

    def run(**kw):
        return _run(lambda: verify_kan_adjunctions(gamma, aa, **kw))

    return [
        Mutant("kan", "lan drops an element at 0", run(lan_fn=lambda sp: _drop_one(lan(sp, pi), 0))),
        Mutant("kan", "lan drops an element at 1", run(lan_fn=lambda sp: _drop_one(lan(sp, pi), 1))),
        Mutant("kan", "lan gains an element at 0", run(lan_fn=lambda sp: _add_one(lan(sp, pi), 0))),
        Mutant("kan", "ran drops an element at 0", run(ran_fn=lambda sp: _drop_one(ran(sp, pi), 0))),
        Mutant("kan", "ran gains an element at 1", run(ran_fn=lambda sp: _add_one(ran(sp, pi), 1))),
    ]


def grothendieck_mutants() -> list:
    from .suites import set_model_indexed

    m = set_model_indexed()
    t = grothendieck.build_total(m)
    f = next(x.id for x in m.base.morphisms if x.id not in m.base.identities)

    def model_check(mm):
        return lambda: grothendieck.check_indexed_model(mm)

    def total_check(tt):
        def go():
            rep = grothendieck.check_total(tt)
            rep.absorb(grothendieck.check_cartesian_lifts(tt, m))
            return rep.absorb(grothendieck.check_fiber_recovery(tt, m))

        return go

    r = m.reindex[f]
    bad_pair = next(iter(t.pairs))
    fb, a = t.pairs[bad_pair]
    alt_a = _other(a, [x.id for x in m.fiber[m.base.src[fb]].morphisms])
    return [
        Mutant("grothendieck", "reindex morphism image", _run(model_check(replace(m, reindex=_set(m.reindex, f, mutate_functor_morphism(r, 1)))))),
        Mutant("grothendieck", "reindex object image", _run(model_check(replace(m, reindex=_set(m.reindex, f, mutate_functor_object(r, 0)))))),
        Mutant("grothendieck", "total composite entry", _run(total_check(replace(t, category=mutate_compose(t.category, 5))))),
        Mutant("grothendieck", "projection morphism image", _run(total_check(replace(t, projection=mutate_functor_morphism(t.projection, 4))))),
        Mutant("grothendieck", "fiber component of a total morphism", _run(total_check(replace(t, pairs=_set(t.pairs, bad_pair, (fb, alt_a)))))),
    ]


def _edit_map(h: FinMap, x, value) -> FinMap:
    return FinMap(h.source, h.target, _set(h.mapping, x, value))


def beck_mutants() -> list:
    sq = beck.square_from_cospan(2, (0, 0, 1), (0, 1))
    x0, x1 = sq.corner.elements[0], sq.corner.elements[-1]
    dup = Context(sq.corner.elements + ("dup",))
    duplicated = beck.PullbackSquare(
        FinMap(dup, sq.g_prime.target, _set(sq.g_prime.mapping, "dup", sq.g_prime(x0))),
        FinMap(dup, sq.f_prime.target, _set(sq.f_prime.mapping, "dup", sq.f_prime(x0))),
        sq.f,
        sq.g,
    )
    g_elsewhere = _other(sq.g_prime(x1), sq.g_prime.target.elements)
    f_elsewhere = _other(sq.f_prime(x0), sq.f_prime.target.elements)
    return [
        Mutant("beck-chevalley", "corner element dropped", _run(lambda: beck.square_report(beck.drop_corner(sq, {x0})))),
        Mutant("beck-chevalley", "last corner element dropped", _run(lambda: beck.square_report(beck.drop_corner(sq, {x1})))),
        Mutant("beck-chevalley", "corner element duplicated", _run(lambda: beck.square_report(duplicated))),
        Mutant(
            "beck-chevalley",
            "g' entry",
            _run(lambda: beck.square_report(replace(sq, g_prime=_edit_map(sq.g_prime, x1, g_elsewhere)))),
        ),
        Mutant(
            "beck-chevalley",
            "f' entry",
            _run(lambda: beck.square_report(replace(sq, f_prime=_edit_map(sq.f_prime, x0, f_elsewhere)))),
        ),
    ]


def dtt_mutants() -> list:
    out = []
    chains = [((0, 1, 1), (1, 0)), ((0, 0, 1), (0, 1)), ((1, 0), (0, 0)), ((0, 1, 2), (2, 1, 0)), ((0, 1), (1, 1))]
    for f_t, g_t in chains:
        n1 = max(f_t) + 1 if len(g_t) <= max(f_t) else len(g_t)
        n2 = max(g_t) + 2
        f = FinMap(Context(tuple(range(len(f_t)))), Context(tuple(range(n1))), dict(enumerate(f_t)))
        g = FinMap(f.target, Context(tuple(range(n2))), dict(enumerate(g_t)))
        gf = f.then(g)
        x = f.source.elements[0]
        bad = _edit_map(gf, x, (gf(x) + 1) % n2)
        out.append(Mutant("dtt-substitution", f"composite entry for f={f_t}, g={g_t}", _run(lambda: dtt.substitution_composition_coherence(f, g, bad))))
    return out


def pseudolimit_mutants() -> list:
    from .suites import _z2_chain

    d, _ = _z2_chain()
    pl = pseudolimit.pseudo_limit(d)
    e = next(iter(pl.cells))
    j = next(iter(pl.projections))

    def check(p):
        return lambda: pseudolimit.check_pseudo_limit(p)

    return [
        Mutant("pseudolimit", "limit composite entry", _run(check(replace(pl, category=mutate_compose(pl.category, 2))))),
        Mutant("pseudolimit", "limit identity entry", _run(check(replace(pl, category=mutate_identity(pl.category, 1))))),
        Mutant(
            "pseudolimit",
            "projection morphism image",
            _run(check(replace(pl, projections=_set(pl.projections, j, mutate_functor_morphism(pl.projections[j], 5))))),
        ),
        Mutant(
            "pseudolimit",
            "projection object image",
            _run(check(replace(pl, projections=_set(pl.projections, j, mutate_functor_object(pl.projections[j], 2))))),
        ),
        Mutant("pseudolimit", "structure cell component", _run(check(replace(pl, cells=_set(pl.cells, e, mutate_component(pl.cells[e], 0)))))),
    ]


# -- span bicategory ------------------------------------------------------------------


def swap_equal_legs(cell: SpanMorphism) -> SpanMorphism:
    """Exchange the images of the first two source elements with equal legs."""
    s = cell.source
    els = s.apex.elements
    for i, x in enumerate(els):
        for y in els[i + 1 :]:
            if s.lleg[x] == s.lleg[y] and s.rleg[x] == s.rleg[y] and cell.mapping[x] != cell.mapping[y]:
                m = dict(cell.mapping)
                m[x], m[y] = m[y], m[x]
                return SpanMorphism(s, cell.target, m)
    return cell


def faulty_associator(triple):
    """The associator with one component altered at ``triple`` only."""

    def assoc(h, g, f):
        cell = associator(h, g, f)
        return swap_equal_legs(cell) if (h, g, f) == triple else cell

    return assoc


def _point_span(n: int):
    pt = Context((0,))
    return span(pt, pt, [(0, 0)] * n)


def spans_mutants() -> list:
    shapes = [(2, 2, 1), (2, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 2)]
    out = []
    for sizes in shapes:
        triple = tuple(_point_span(n) for n in sizes)
        rep = _run(lambda: check_coherence(foot_sizes=(1,), max_apex=2, assoc=faulty_associator(triple)))
        out.append(Mutant("spans", f"associator component at apex sizes {sizes}", rep))
    return out


def strictify_mutants() -> list:
    cells = [_point_span(n) for n in (2, 1, 2, 2)]
    p = PathCell(cells[0].left, cells)
    out = []
    targets = [
        (cells[2], cells[1], cells[0]),
        (cells[3], cells[2], cells[1]),
        (cells[3], evaluate_term((1, 2), cells), cells[0]),
        (cells[3], cells[2], evaluate_term((0, 1), cells)),
        (evaluate_term((2, 3), cells), cells[1], cells[0]),
    ]
    for k, triple in enumerate(targets):
        out.append(Mutant("strictify", f"associator component at route step {k}", _run(lambda: check_routes(p, faulty_associator(triple)))))
    return out


def faulty_horizontal(beta0, alpha0):
    """Horizontal composition with one component altered at ``(beta0, alpha0)``."""

    def hcomp(beta, alpha):
        cell = horizontal(beta, alpha)
        return swap_equal_legs(cell) if (beta, alpha) == (beta0, alpha0) else cell

    return hcomp


def _shift(t, k: int = 1) -> SpanMorphism:
    n = len(t.apex)
    return SpanMorphism(t, t, {i: (i + k) % n for i in range(n)})


def _invertible_grids() -> list:
    """Grids of invertible 2-cells on one-point feet; random grids mostly
    collapse through non-injective cells, which can mask a faulty component."""
    grids = []
    for n_t, n_s in ((2, 2), (3, 2), (2, 3), (3, 3), (4, 2)):
        t, s = _point_span(n_t), _point_span(n_s)
        grids.append(Grid(_shift(t), _shift(t), _shift(s), identity_cell(s)))
    return grids


def interchange_mutants() -> list:
    grids = _invertible_grids()
    out = []
    for k, site in enumerate(grids):

        def run(site=site):
            rep = LawReport("interchange")
            hcomp = faulty_horizontal(site.beta, site.alpha)
            for i, grid in enumerate(grids):
                rep.tick("interchange")
                if not interchange_check(grid, hcomp):
                    rep.fail("interchange", i)
            return rep

        out.append(Mutant("interchange", f"horizontal component at grid {k}", _run(run)))
    return out


MUTANTS = {
    "core": core_mutants,
    "quantifiers": quantifier_mutants,
    "slice": slice_mutants,
    "kan": kan_mutants,
    "grothendieck": grothendieck_mutants,
    "beck-chevalley": beck_mutants,
    "dtt-substitution": dtt_mutants,
    "pseudolimit": pseudolimit_mutants,
    "spans": spans_mutants,
    "strictify": strictify_mutants,
    "interchange": interchange_mutants,
}


def all_mutants() -> list:
    return [m for name in sorted(MUTANTS) for m in MUTANTS[name]()]
