"""Beck-Chevalley for the subset model of finite contexts.

A square

    Δ' --g'--> Γ'
    |          |
    f'         f
    v          v
    Δ  --g-->  Γ

with ``f . g' = g . f'`` is a pullback when ``x |-> (f'(x), g'(x))`` is a
bijection onto ``{(d, c) | g(d) = f(c)}``.  For a predicate φ over Δ the two
sides are ``f*(∃_g φ)`` (pull back the image) and ``∃_{g'}(f'* φ)``, both
predicates over Γ'.  Every 2-cell of a subset poset is an inclusion, so each
step of the comparison is recorded as a ``(smaller, larger)`` pair.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import ContextMismatch, NotAPullback
from ..report import LawReport
from ..setlogic import Context, Predicate
from ..slice import FinMap


@dataclass(frozen=True)
class PullbackSquare:
    g_prime: FinMap  # Δ' -> Γ'
    f_prime: FinMap  # Δ' -> Δ
    f: FinMap  # Γ' -> Γ
    g: FinMap  # Δ -> Γ

    def __post_init__(self):
        if self.g_prime.source != self.f_prime.source:
            raise ContextMismatch("g' and f' must share the corner Δ'")
        if self.f.source != self.g_prime.target or self.g.source != self.f_prime.target:
            raise ContextMismatch("square sides do not meet")
        if self.f.target != self.g.target:
            raise ContextMismatch("f and g must share the codomain Γ")

    @property
    def corner(self) -> Context:
        return self.g_prime.source


@dataclass(frozen=True)
class BeckChevalleyWitness:
    phi: Predicate
    step1: tuple  # ∃_{g'} f'*(η_g): ∃_{g'} f'* φ ⊆ ∃_{g'} f'* g* ∃_g φ
    step2: tuple  # θ: f'* g* = g'* f*, identity on elements
    step3: tuple  # ε_{g'} at f* ∃_g φ: ∃_{g'} g'* f* ∃_g φ ⊆ f* ∃_g φ
    composite: tuple  # ∃_{g'} f'* φ ⊆ f* ∃_g φ
    inverse: tuple  # f* ∃_g φ ⊆ ∃_{g'} f'* φ

    @property
    def pulled_image(self) -> Predicate:
        return self.composite[1]

    @property
    def image_of_pullback(self) -> Predicate:
        return self.composite[0]


def canonical_pullback(g: FinMap, f: FinMap) -> Context:
    return Context(tuple((d, c) for d in g.source.elements for c in f.source.elements if g(d) == f(c)))


def canonical_square(g: FinMap, f: FinMap) -> PullbackSquare:
    if g.target != f.target:
        raise ContextMismatch("g and f must share the codomain")
    corner = canonical_pullback(g, f)
    return PullbackSquare(
        FinMap(corner, f.source, {p: p[1] for p in corner.elements}),
        FinMap(corner, g.source, {p: p[0] for p in corner.elements}),
        f,
        g,
    )


def pullback_violation(sq: PullbackSquare):
    """None for a pullback square, else ``(reason, witness)``."""
    for x in sq.corner.elements:
        if sq.f(sq.g_prime(x)) != sq.g(sq.f_prime(x)):
            return "does not commute", x
    seen = {}
    for x in sq.corner.elements:
        key = (sq.f_prime(x), sq.g_prime(x))
        if key in seen:
            return "comparison map is not injective", (seen[key], x)
        seen[key] = x
    for pair in canonical_pullback(sq.g, sq.f).elements:
        if pair not in seen:
            return "comparison map misses a matching pair", pair
    return None


def is_pullback(sq: PullbackSquare) -> bool:
    return pullback_violation(sq) is None


def _image(h: FinMap, members) -> frozenset:
    return frozenset(h(x) for x in members)


def _preimage(h: FinMap, members) -> frozenset:
    return frozenset(x for x in h.source.elements if h(x) in members)


def both_sides(sq: PullbackSquare, phi: Predicate) -> tuple:
    """``(f* ∃_g φ, ∃_{g'} f'* φ)`` as predicates over Γ'."""
    if phi.over != sq.g.source:
        raise ContextMismatch("φ must be a predicate over Δ")
    gp = sq.g_prime.target
    return (
        Predicate(gp, _preimage(sq.f, _image(sq.g, phi.members))),
        Predicate(gp, _image(sq.g_prime, _preimage(sq.f_prime, phi.members))),
    )


def beck_chevalley(sq: PullbackSquare, phi: Predicate) -> BeckChevalleyWitness:
    bad = pullback_violation(sq)
    if bad is not None:
        raise NotAPullback(f"square is not a pullback: {bad[0]}", bad[1])
    if phi.over != sq.g.source:
        raise ContextMismatch("φ must be a predicate over Δ")
    g, f, gp, fp = sq.g, sq.f, sq.g_prime, sq.f_prime
    gamma_p = gp.target
    ex_g = _image(g, phi.members)
    unit = _preimage(g, ex_g)  # g* ∃_g φ, contains φ
    start = _image(gp, _preimage(fp, phi.members))
    after1 = _image(gp, _preimage(fp, unit))
    # θ: f'* g* = g'* f* holds elementwise because f(g'(x)) = g(f'(x))
    left_theta = _preimage(fp, unit)
    right_theta = _preimage(gp, _preimage(f, ex_g))
    pulled = _preimage(f, ex_g)
    after3 = _image(gp, right_theta)
    P = lambda s: Predicate(gamma_p, s)  # noqa: E731
    w = BeckChevalleyWitness(
        phi=phi,
        step1=(P(start), P(after1)),
        step2=(Predicate(sq.corner, left_theta), Predicate(sq.corner, right_theta)),
        step3=(P(after3), P(pulled)),
        composite=(P(start), P(pulled)),
        inverse=(P(pulled), P(start)),
    )
    problems = verify_witness(w)
    if problems:
        # cannot happen for a genuine pullback; surfaced rather than hidden
        raise NotAPullback(f"Beck-Chevalley witness failed: {problems[0]}", phi)
    return w


def verify_witness(w: BeckChevalleyWitness) -> list:
    """Each step an inclusion, θ an equality, steps chaining to the composite,
    and composite/inverse mutually inverse (equal subsets)."""
    out = []
    for name in ("step1", "step3", "composite", "inverse"):
        lo, hi = getattr(w, name)
        if not lo.members <= hi.members:
            out.append(f"{name} is not an inclusion")
    if w.step2[0].members != w.step2[1].members:
        out.append("θ is not the identity")
    if w.step1[0] != w.composite[0] or w.step3[1] != w.composite[1] or w.step1[1] != w.step3[0]:
        out.append("steps do not chain to the composite")
    if w.inverse != (w.composite[1], w.composite[0]):
        out.append("inverse is not the reversed composite")
    return out


def all_subsets(ctx: Context):
    els = ctx.elements
    for r in range(len(els) + 1):
        for combo in itertools.combinations(els, r):
            yield Predicate(ctx, frozenset(combo))


def counterexample(sq: PullbackSquare):
    """First φ over Δ whose two sides differ, or None."""
    for phi in all_subsets(sq.g.source):
        a, b = both_sides(sq, phi)
        if a != b:
            return phi
    return None


# -- exhaustive square generation ---------------------------------------------


def _ctx(n: int) -> Context:
    return Context(tuple(range(n)))


def _canonical_cospan(n_gamma: int, g: tuple, f: tuple) -> tuple:
    """Smallest relabeling of a cospan Δ -g-> Γ <-f- Γ'.

    Δ and Γ' are relabeled by sorting the images; Γ by trying every permutation.
    """
    best = None
    for perm in itertools.permutations(range(n_gamma)):
        key = (tuple(sorted(perm[v] for v in g)), tuple(sorted(perm[v] for v in f)))
        if best is None or key < best:
            best = key
    return best


def cospans(max_size: int = 3, min_size: int = 0):
    """Every cospan ``Δ -> Γ <- Γ'`` with contexts of size in [min_size, max_size],
    up to relabeling of all three contexts, as ``(n_gamma, g, f)`` tuples."""
    seen = set()
    out = []
    sizes = range(min_size, max_size + 1)
    for n_gamma in sizes:
        for n_delta in sizes:
            for n_gp in sizes:
                for g in itertools.combinations_with_replacement(range(n_gamma), n_delta):
                    for f in itertools.combinations_with_replacement(range(n_gamma), n_gp):
                        key = (n_gamma,) + _canonical_cospan(n_gamma, g, f)
                        if key not in seen:
                            seen.add(key)
                            out.append(key)
    return out


def square_from_cospan(n_gamma: int, g: tuple, f: tuple) -> PullbackSquare:
    gamma = _ctx(n_gamma)
    gm = FinMap(_ctx(len(g)), gamma, dict(enumerate(g)))
    fm = FinMap(_ctx(len(f)), gamma, dict(enumerate(f)))
    return canonical_square(gm, fm)


def drop_corner(sq: PullbackSquare, drop) -> PullbackSquare:
    """The square with the given corner elements removed (no longer a pullback
    when anything is dropped)."""
    keep = Context(tuple(x for x in sq.corner.elements if x not in drop))
    return PullbackSquare(
        FinMap(keep, sq.g_prime.target, {x: sq.g_prime(x) for x in keep.elements}),
        FinMap(keep, sq.f_prime.target, {x: sq.f_prime(x) for x in keep.elements}),
        sq.f,
        sq.g,
    )


def verify_square(sq: PullbackSquare):
    """Run Beck-Chevalley on every φ; returns the number of predicates checked.

    Raises NotAPullback for non-pullbacks.
    """
    n = 0
    for phi in all_subsets(sq.g.source):
        beck_chevalley(sq, phi)
        n += 1
    return n


def square_report(sq: PullbackSquare, phis=None) -> LawReport:
    """Beck-Chevalley on ``phis`` (default: every φ over Δ) as a report.

    A non-pullback fails ``pullback`` with the NotAPullback witness, plus
    ``iso`` with the first predicate on which the two sides differ, if any.
    """
    rep = LawReport("beck-chevalley")
    for phi in all_subsets(sq.g.source) if phis is None else phis:
        rep.tick("iso")
        try:
            beck_chevalley(sq, phi)
        except NotAPullback as e:
            rep.fail("pullback", e.witness, f"NotAPullback: {e}")
            bad = counterexample(sq)
            if bad is not None:
                rep.fail("iso", bad.sorted(), "the two sides differ on this predicate")
            break
    return rep
