"""Named check suites and the runner behind ``catq check suite``."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .adjunction import check_lifted_naturality, find_right_adjoint, verify_adjunction
from .coherence import beck, dtt, pseudolimit, spans, strictify
from .errors import CatqError, NotAPullback, NotFound, ValidationError
from .fincat import (
    NatTransform,
    arrow,
    chain,
    check_category,
    check_functor,
    check_natural,
    generated_category,
    identity_functor,
    identity_transform,
    opposite,
    random_category,
    terminal,
)
from .grothendieck import (
    build_total,
    check_cartesian_lifts,
    check_fiber_recovery,
    check_total,
    inverse_image_model,
    random_base_model,
    random_indexed_model,
)
from .presheaf import (
    SubPresheaf,
    enumerate_presheaves,
    extend_presheaf,
    lan,
    lan_bruteforce,
    ran,
    ran_bruteforce,
    subpresheaves,
    terminal_presheaf,
    verify_kan_adjunctions,
)
from .report import LawReport
from .search import enumerate_functors, find_equivalence, is_equivalence
from .setlogic import (
    Context,
    Predicate,
    as_adjunction_exists,
    as_adjunction_forall,
    exists,
    extend_context,
    forall,
    lifted_family,
    quantify_via_transposes,
)
from .slice import FinMap, check_pi_cardinality, families_over, verify_slice_adjunctions

# Meaning of each cap:
#   core             random categories checked
#   quantifiers      bound on |Gamma|*|A|
#   slice            bound on family total size (naturality uses one less)
#   kan              pointwise set size of presheaves on the arrow base
#   grothendieck     random indexed models
#   beck-chevalley   context size bound
#   dtt-substitution context size bound
#   pseudolimit      universal-property probes
#   spans            apex size bound (feet of size 0, 1 and 2)
#   strictify        random 4-generator paths
#   interchange      random 2x2 grids
DEFAULT_CAPS = {
    "core": 60,
    "quantifiers": 9,
    "slice": 3,
    "kan": 2,
    "grothendieck": 60,
    "beck-chevalley": 3,
    "dtt-substitution": 4,
    "pseudolimit": 24,
    "spans": 2,
    "strictify": 40,
    "interchange": 100,
}


@dataclass
class RunConfig:
    caps: dict = field(default_factory=dict)
    seed: int = 0
    suites: list = field(default_factory=list)  # empty means all
    format: str = "text"
    timings: bool = False

    def __post_init__(self):
        for name, v in self.caps.items():
            if name not in DEFAULT_CAPS:
                raise ValidationError(f"--cap: unknown module {name!r}")
            if not isinstance(v, int) or v <= 0:
                raise ValidationError(f"--cap {name}: cap must be a positive integer")
        for name in self.suites:
            if name not in SUITES:
                raise ValidationError(f"--suite: unknown suite {name!r}")
        if self.format not in ("text", "json"):
            raise ValidationError(f"--format must be text or json, not {self.format!r}")

    def cap(self, name: str) -> int:
        return self.caps.get(name, DEFAULT_CAPS[name])

    def selected(self) -> list:
        return sorted(self.suites or SUITES)


@dataclass
class CheckReport:
    suite: str
    status: str  # pass | fail | error
    witnesses: list
    stats: dict
    duration_ms: float | None = None

    def as_dict(self, timings: bool = False) -> dict:
        out = {"suite": self.suite, "status": self.status, "witnesses": self.witnesses, "stats": self.stats}
        if timings and self.duration_ms is not None:
            out["duration_ms"] = round(self.duration_ms, 1)
        return out


def to_check_report(suite: str, rep: LawReport, duration_ms: float | None = None) -> CheckReport:
    return CheckReport(
        suite,
        "pass" if rep.ok else "fail",
        [v.as_dict() for v in rep.violations],
        dict(sorted(rep.checks.items())),
        duration_ms,
    )


# -- suites ----------------------------------------------------------------------


def suite_core(cfg: RunConfig) -> LawReport:
    rng = random.Random(cfg.seed)
    rep = LawReport("core")
    for c in (terminal(), arrow(), chain(3), generated_category({0: 2}, [(0, 0, (1, 0))])):
        rep.absorb(check_category(c), "category.")
    for _ in range(cfg.cap("core")):
        c = random_category(rng, max_objects=4, max_morphisms=12)
        rep.absorb(check_category(c), "category.")
        rep.absorb(check_category(opposite(c)), "opposite.")
        rep.absorb(check_natural(identity_transform(identity_functor(c))), "natural.")
        d = random_category(rng, max_objects=3, max_morphisms=8)
        for F in itertools.islice(enumerate_functors(c, d, cap=50_000), 3):
            rep.absorb(check_functor(F), "functor.")
            try:
                adj = find_right_adjoint(F)
            except NotFound:
                rep.tick("right_adjoint.absent")
                continue
            rep.absorb(verify_adjunction(adj), "right_adjoint.")
    return rep


def _predicates(ctx):
    els = ctx.elements
    for r in range(len(els) + 1):
        for combo in itertools.combinations(els, r):
            yield combo


def suite_quantifiers(cfg: RunConfig) -> LawReport:
    bound = cfg.cap("quantifiers")
    rep = LawReport("quantifiers")
    # the worked example over {1,2} x {a,b}
    ext = extend_context(Context((1, 2)), Context(("a", "b")))
    phi = Predicate(ext, {(1, "a"), (1, "b")})
    want = Predicate(ext.base, {1})
    for label, got in (
        ("forall_direct", forall(phi)),
        ("exists_direct", exists(phi)),
        ("forall_transposes", quantify_via_transposes(phi, "forall")),
        ("exists_transposes", quantify_via_transposes(phi, "exists")),
    ):
        rep.tick("worked_example." + label)
        if got != want:
            rep.fail("worked_example." + label, repr(got))
    for g in range(bound + 1):
        for a in range(bound + 1):
            if g * a > bound or (g == 0 and a > bound) or (a == 0 and g > bound):
                continue
            G, A = Context(tuple(range(g))), Context(tuple(range(a)))
            rep.absorb(verify_adjunction(as_adjunction_forall(G, A)), "forall.")
            rep.absorb(verify_adjunction(as_adjunction_exists(G, A)), "exists.")
    # base change along every map between small contexts
    family = []
    A = Context(("a", "b"))
    for n, m in ((1, 1), (1, 2), (2, 1), (2, 2), (0, 1)):
        G, D = Context(tuple(range(n))), Context(tuple(range(m)))
        for img in itertools.product(range(m), repeat=n):
            family.append(lifted_family(G, D, A, dict(enumerate(img))))
    rep.absorb(check_lifted_naturality(family), "lifted.")
    return rep


def suite_slice(cfg: RunConfig) -> LawReport:
    total = cfg.cap("slice")
    rep = LawReport("slice")
    for n in range(4):
        for m in range(4):
            src, tgt = Context(tuple(range(n))), Context(tuple(range(m)))
            xs, ys = families_over(src, total), families_over(tgt, total)
            small_x, small_y = families_over(src, max(total - 1, 0)), families_over(tgt, max(total - 1, 0))
            for img in itertools.product(range(m), repeat=n):
                f = FinMap(src, tgt, dict(enumerate(img)))
                rep.absorb(verify_slice_adjunctions(f, xs, ys, naturality=False))
                check_pi_cardinality(f, xs, rep)
                if n <= 2 and m <= 2:
                    rep.absorb(verify_slice_adjunctions(f, small_x, small_y, naturality=True), "natural.")
    return rep


def _terminal_sub(prod, phi_members):
    (c,) = prod.base.objects
    return SubPresheaf(prod, {c: frozenset(phi_members)})


def suite_kan(cfg: RunConfig) -> LawReport:
    rep = LawReport("kan")
    bound = cfg.cap("quantifiers")
    one = terminal()
    (c,) = one.objects
    for g in range(bound + 1):
        for a in range(bound + 1):
            if g * a > bound or max(g, a) > bound:
                continue
            gamma = terminal_presheaf(one, range(g))
            pa = terminal_presheaf(one, range(a))
            prod, pi = extend_presheaf(gamma, pa)
            ext = extend_context(Context(tuple(range(g))), Context(tuple(range(a))))
            for members in _predicates(ext.context):
                phi_set = Predicate(ext, members)
                phi_sp = _terminal_sub(prod, members)
                rep.tick("terminal.lan_is_exists")
                if lan(phi_sp, pi).members[c] != exists(phi_set).members:
                    rep.fail("terminal.lan_is_exists", (g, a, sorted(members)))
                rep.tick("terminal.ran_is_forall")
                if ran(phi_sp, pi).members[c] != forall(phi_set).members:
                    rep.fail("terminal.ran_is_forall", (g, a, sorted(members)))
    ps = enumerate_presheaves(arrow(), cfg.cap("kan"))
    for gamma in ps:
        for pa in ps:
            prod, pi = extend_presheaf(gamma, pa)
            for phi in subpresheaves(prod):
                rep.tick("arrow.lan_least")
                if lan(phi, pi) != lan_bruteforce(phi, pi):
                    rep.fail("arrow.lan_least", (gamma.sets, pa.sets, phi))
                rep.tick("arrow.ran_greatest")
                if ran(phi, pi) != ran_bruteforce(phi, pi):
                    rep.fail("arrow.ran_greatest", (gamma.sets, pa.sets, phi))
            rep.absorb(verify_kan_adjunctions(gamma, pa), "arrow.")
    return rep


def set_model_indexed():
    """Contexts {Gamma, Gamma[A]} with the projection, fibers the subset posets."""
    from .fincat import generated_with_functions

    g, a = 2, 2
    proj = tuple(i // a for i in range(g * a))
    base, funcs = generated_with_functions({"Gamma": g, "Gamma[A]": g * a}, [("Gamma[A]", "Gamma", proj)])
    images = {i: img for i, (_, _, img) in funcs.items()}
    return inverse_image_model(base, {"Gamma": g, "Gamma[A]": g * a}, images)


def suite_grothendieck(cfg: RunConfig) -> LawReport:
    rng = random.Random(cfg.seed)
    rep = LawReport("grothendieck")
    models = [set_model_indexed()]
    for i in range(cfg.cap("grothendieck")):
        models.append(random_indexed_model(rng) if i % 4 else random_base_model(rng))
    for m in models:
        t = build_total(m)
        rep.tick("models")
        rep.absorb(check_total(t))
        rep.absorb(check_cartesian_lifts(t, m), "cartesian.")
        rep.absorb(check_fiber_recovery(t, m), "fiber.")
        rep.tick("object_count")
        if len(t.category.objects) != sum(len(m.fiber[c].objects) for c in m.base.objects):
            rep.fail("object_count", m.base.objects)
    return rep


def suite_beck(cfg: RunConfig) -> LawReport:
    rep = LawReport("beck-chevalley")
    for key in beck.cospans(cfg.cap("beck-chevalley")):
        sq = beck.square_from_cospan(*key)
        rep.tick("squares")
        for phi in beck.all_subsets(sq.g.source):
            rep.tick("iso")
            try:
                beck.beck_chevalley(sq, phi)
            except NotAPullback as e:
                rep.fail("iso", (key, sorted(phi.members)), str(e))
        if len(sq.corner):
            bad = beck.drop_corner(sq, {sq.corner.elements[0]})
            rep.tick("non_pullback_rejected")
            if beck.is_pullback(bad):
                rep.fail("non_pullback_rejected", key)
            rep.tick("non_pullback_counterexample")
            if beck.counterexample(bad) is None:
                rep.fail("non_pullback_counterexample", key)
    return rep


def suite_dtt(cfg: RunConfig) -> LawReport:
    return LawReport("dtt-substitution").absorb(dtt.verify_all_chains(cfg.cap("dtt-substitution")))


def _z2_chain():
    z2 = generated_category({0: 2}, [(0, 0, (1, 0))])
    (swap,) = [m.id for m in z2.morphisms if m.id not in z2.identities]
    s = chain(3)
    ident = identity_functor(z2)
    edges = {m.id: ident for m in s.morphisms if m.id not in s.identities}
    pairs = [(g, f) for (g, f) in s.compose if g not in s.identities and f not in s.identities]
    cells = {p: NatTransform(ident, ident, {0: swap}) for p in pairs}
    return pseudolimit.PseudoDiagram(s, {j: z2 for j in s.objects}, edges, cells), z2


def suite_pseudolimit(cfg: RunConfig) -> LawReport:
    rng = random.Random(cfg.seed)
    rep = LawReport("pseudolimit")
    limits = []
    # single node: L is isomorphic to the node category
    for _ in range(3):
        c = random_category(rng, max_objects=3, max_morphisms=8)
        pl = pseudolimit.pseudo_limit(pseudolimit.single_node(c))
        rep.absorb(pseudolimit.check_pseudo_limit(pl), "single_node.")
        (p,) = pl.projections.values()
        rep.tick("single_node.isomorphism")
        if sorted(map(repr, p.object_map.values())) != sorted(map(repr, c.objects)) or len(
            set(p.morphism_map.values())
        ) != len(c.morphisms) or len(pl.category.morphisms) != len(c.morphisms):
            rep.fail("single_node.isomorphism", c.name)
        limits.append(pl)
    # discrete pair: the product
    for _ in range(3):
        c = random_category(rng, max_objects=3, max_morphisms=6)
        d = random_category(rng, max_objects=3, max_morphisms=6)
        pl = pseudolimit.pseudo_limit(pseudolimit.discrete_pair(c, d))
        rep.absorb(pseudolimit.check_pseudo_limit(pl), "product.")
        rep.tick("product.counts")
        if len(pl.category.objects) != len(c.objects) * len(d.objects) or len(pl.category.morphisms) != len(
            c.morphisms
        ) * len(d.morphisms):
            rep.fail("product.counts", (len(c.objects), len(d.objects)))
        limits.append(pl)
    # single edge: equivalent to the source category
    z2 = generated_category({0: 2}, [(0, 0, (1, 0))])
    sources = [z2, chain(2), generated_category({0: 2, 1: 2}, [(0, 1, (1, 0)), (1, 0, (1, 0))])]
    for c in sources:
        d = random_category(rng, max_objects=3, max_morphisms=6)
        for F in itertools.islice(enumerate_functors(c, z2 if rng.random() < 0.5 else d), 2):
            pl = pseudolimit.pseudo_limit(pseudolimit.single_edge(F))
            rep.absorb(pseudolimit.check_pseudo_limit(pl), "edge.")
            src_node = pl.diagram.shape.src[pl.diagram.edge_ids[0]]
            rep.tick("edge.projection_equivalence")
            if not is_equivalence(pl.projections[src_node]):
                rep.fail("edge.projection_equivalence", c.name)
            if len(pl.category.objects) <= 4 and len(c.objects) <= 4:
                rep.tick("edge.equivalence_search")
                if find_equivalence(pl.category, c) is None:
                    rep.fail("edge.equivalence_search", c.name)
            limits.append(pl)
    # pseudo-functorial chain with a non-identity comparison cell
    d, z2 = _z2_chain()
    pl = pseudolimit.pseudo_limit(d)
    rep.absorb(pseudolimit.check_pseudo_limit(pl), "chain.")
    rep.tick("chain.equivalence_search")
    if find_equivalence(pl.category, z2) is None:
        rep.fail("chain.equivalence_search", "z2 chain")
    limits.append(pl)
    # probes
    probes = []
    for pl in limits:
        probes.append((pl, pseudolimit.limit_cone(pl)))
        probes.append((pl, pseudolimit.named_object_cone(pl, rng.choice(pl.category.objects))))
    while len(probes) < cfg.cap("pseudolimit"):
        pl = rng.choice(limits)
        m = random_category(rng, max_objects=2, max_morphisms=4)
        ks = list(itertools.islice(enumerate_functors(m, pl.category, cap=50_000), 20))
        if ks:
            probes.append((pl, pseudolimit.precompose_cone(pl, rng.choice(ks))))
    for pl, cone in probes[: max(cfg.cap("pseudolimit"), 1)]:
        rep.tick("probes")
        rep.absorb(pseudolimit.verify_pseudo_universal(pl, cone), "universal.")
    return rep


def suite_spans(cfg: RunConfig) -> LawReport:
    return LawReport("spans").absorb(spans.check_coherence((0, 1, 2), cfg.cap("spans")))


def suite_interchange(cfg: RunConfig) -> LawReport:
    return LawReport("interchange").absorb(spans.check_interchange(random.Random(cfg.seed), cfg.cap("interchange")))


def suite_strictify(cfg: RunConfig) -> LawReport:
    rng = random.Random(cfg.seed)
    rep = LawReport("strictify")
    foot = Context((0,))
    empty = strictify.identity_path(foot)
    rep.tick("empty_path_identity")
    if strictify.evaluate(empty) != spans.identity_span(foot):
        rep.fail("empty_path_identity", "empty")
    for _ in range(cfg.cap("strictify")):
        p = strictify.random_path(rng, 4)
        rep.absorb(strictify.check_routes(p), "routes.")
        cut1, cut2 = sorted(rng.sample(range(5), 2))
        a = strictify.PathCell(p.foot, p.cells[:cut1])
        b = strictify.PathCell(a.end, p.cells[cut1:cut2])
        c = strictify.PathCell(b.end, p.cells[cut2:])
        rep.absorb(strictify.check_strict_laws(a, b, c), "strict.")
    return rep


SUITES = {
    "beck-chevalley": suite_beck,
    "core": suite_core,
    "dtt-substitution": suite_dtt,
    "grothendieck": suite_grothendieck,
    "interchange": suite_interchange,
    "kan": suite_kan,
    "pseudolimit": suite_pseudolimit,
    "quantifiers": suite_quantifiers,
    "slice": suite_slice,
    "spans": suite_spans,
    "strictify": suite_strictify,
}


def run_one(name: str, cfg: RunConfig) -> CheckReport:
    start = time.perf_counter()
    try:
        rep = SUITES[name](cfg)
    except CatqError as e:
        ms = (time.perf_counter() - start) * 1000
        return CheckReport(name, "error", [{"error": type(e).__name__, "message": str(e)}], {}, ms)
    return to_check_report(name, rep, (time.perf_counter() - start) * 1000)


def run_suite(cfg: RunConfig) -> tuple:
    """Run the selected suites in name order; returns ``(reports, exit_code)``."""
    reports = [run_one(name, cfg) for name in cfg.selected()]
    if any(r.status == "error" for r in reports):
        code = 2
    elif any(r.status == "fail" for r in reports):
        code = 1
    else:
        code = 0
    return reports, code
