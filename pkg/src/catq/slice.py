"""Slices of finite sets: families X -> Gamma, pullback f*, Sigma_f, Pi_f, the
two-element subobject classifier, and image / universal image of subobjects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContextMismatch, MalformedInput
from .report import LawReport
from .setlogic import Context

TRUE, FALSE = True, False
OMEGA = Context((TRUE, FALSE))


@dataclass(frozen=True)
class FinMap:
    source: Context
    target: Context
    mapping: dict

    def __post_init__(self):
        for x in self.source.elements:
            if x not in self.mapping:
                raise MalformedInput(f"map undefined on {x!r}")
            if self.mapping[x] not in self.target.index:
                raise MalformedInput(f"{x!r} maps outside the codomain")
        if len(self.mapping) != len(self.source):
            raise MalformedInput("map defined outside its domain")

    def __call__(self, x):
        return self.mapping[x]

    def then(self, g: FinMap) -> FinMap:
        """``g . self``."""
        if g.source != self.target:
            raise ContextMismatch("maps are not composable")
        return FinMap(self.source, g.target, {x: g.mapping[y] for x, y in self.mapping.items()})

    def preimage(self, y) -> list:
        return [x for x in self.source.elements if self.mapping[x] == y]

    @staticmethod
    def identity(ctx: Context) -> FinMap:
        return FinMap(ctx, ctx, {x: x for x in ctx.elements})


@dataclass(frozen=True)
class FamilyOver:
    base: Context
    total: Context
    display: dict

    def __post_init__(self):
        for t in self.total.elements:
            if t not in self.display:
                raise MalformedInput(f"display undefined on {t!r}")
            if self.display[t] not in self.base.index:
                raise MalformedInput(f"{t!r} displays outside the base")

    def fiber(self, b) -> list:
        return [t for t in self.total.elements if self.display[t] == b]

    def fiber_sizes(self) -> dict:
        return {b: len(self.fiber(b)) for b in self.base.elements}


@dataclass(frozen=True)
class Subobject:
    ambient: Context
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members <= set(self.ambient.elements):
            raise ContextMismatch("subobject is not contained in its ambient context")


@dataclass(frozen=True)
class OmegaMap:
    source: Context
    truth: dict

    def __post_init__(self):
        if set(self.truth) != set(self.source.elements) or not set(self.truth.values()) <= {TRUE, FALSE}:
            raise MalformedInput("characteristic map must be total into {true, false}")


def _needs(f: FinMap, base: Context, side: str):
    if getattr(f, side) != base:
        raise ContextMismatch(f"map {side} does not match the family base")


def pullback_family(f: FinMap, y: FamilyOver) -> FamilyOver:
    """``f* Y`` with total ``{(d, t) | f(d) = display(t)}`` in lexicographic order."""
    _needs(f, y.base, "target")
    pairs = tuple((d, t) for d in f.source.elements for t in y.total.elements if f(d) == y.display[t])
    return FamilyOver(f.source, Context(pairs), {p: p[0] for p in pairs})


def sigma(f: FinMap, x: FamilyOver) -> FamilyOver:
    _needs(f, x.base, "source")
    return FamilyOver(f.target, x.total, {t: f(x.display[t]) for t in x.total.elements})


def sections(f: FinMap, x: FamilyOver, y) -> list:
    """All ``s: f^-1(y) -> X`` with ``display . s = id``, as tuples of pairs."""
    dom = f.preimage(y)
    return [tuple(zip(dom, choice)) for choice in itertools.product(*(x.fiber(d) for d in dom))]


def pi(f: FinMap, x: FamilyOver) -> FamilyOver:
    _needs(f, x.base, "source")
    total = tuple((y, s) for y in f.target.elements for s in sections(f, x, y))
    return FamilyOver(f.target, Context(total), {e: e[0] for e in total})


# -- hom-sets of the slice and the adjunction transposes -------------------


def family_homs(x: FamilyOver, y: FamilyOver) -> list:
    """All maps ``x.total -> y.total`` over the common base, as dicts."""
    if x.base != y.base:
        raise ContextMismatch("families over different bases")
    options = [y.fiber(x.display[t]) for t in x.total.elements]
    return [dict(zip(x.total.elements, c)) for c in itertools.product(*options)]


def is_family_hom(x: FamilyOver, y: FamilyOver, h: dict) -> bool:
    return set(h) == set(x.total.elements) and all(
        h[t] in y.display and y.display[h[t]] == x.display[t] for t in x.total.elements
    )


def sigma_transpose(f: FinMap, x: FamilyOver, h: dict) -> dict:
    """``Hom(Sigma_f X, Y) -> Hom(X, f* Y)``: t |-> (display(t), h(t))."""
    return {t: (x.display[t], h[t]) for t in x.total.elements}


def sigma_untranspose(k: dict) -> dict:
    return {t: pair[1] for t, pair in k.items()}


def pi_transpose(f: FinMap, y: FamilyOver, k: dict) -> dict:
    """``Hom(f* Y, X) -> Hom(Y, Pi_f X)``: t |-> (y, d |-> k(d, t))."""
    out = {}
    for t in y.total.elements:
        b = y.display[t]
        out[t] = (b, tuple((d, k[(d, t)]) for d in f.preimage(b)))
    return out


def pi_untranspose(m: dict) -> dict:
    out = {}
    for t, (_, section) in m.items():
        for d, v in section:
            out[(d, t)] = v
    return out


def characteristic(phi: Subobject) -> OmegaMap:
    return OmegaMap(phi.ambient, {e: e in phi.members for e in phi.ambient.elements})


def classified(chi: OmegaMap) -> Subobject:
    return Subobject(chi.source, frozenset(e for e, v in chi.truth.items() if v is TRUE))


def exists_f_subobject(f: FinMap, phi: Subobject) -> Subobject:
    if phi.ambient != f.source:
        raise ContextMismatch("subobject does not live over the domain of f")
    return Subobject(f.target, frozenset(f(d) for d in phi.members))


def forall_f_subobject(f: FinMap, phi: Subobject) -> Subobject:
    if phi.ambient != f.source:
        raise ContextMismatch("subobject does not live over the domain of f")
    return Subobject(f.target, frozenset(y for y in f.target.elements if set(f.preimage(y)) <= phi.members))


def pullback_subobject(f: FinMap, psi: Subobject) -> Subobject:
    if psi.ambient != f.target:
        raise ContextMismatch("subobject does not live over the codomain of f")
    return Subobject(f.source, frozenset(d for d in f.source.elements if f(d) in psi.members))


def projection_map(gamma: Context, a: Context) -> FinMap:
    pairs = Context(tuple(itertools.product(gamma.elements, a.elements)))
    return FinMap(pairs, gamma, {p: p[0] for p in pairs.elements})


def families_over(base: Context, max_total: int):
    """Every family over ``base`` with at most ``max_total`` elements, up to
    relabeling of the total set (displays enumerated as sorted sequences)."""
    out = []
    for k in range(max_total + 1):
        for disp in itertools.combinations_with_replacement(base.elements, k):
            total = Context(tuple(range(k)))
            out.append(FamilyOver(base, total, dict(zip(total.elements, disp))))
    return out


def sigma_map(u: dict) -> dict:
    return dict(u)


def pi_map(u: dict, px: FamilyOver) -> dict:
    """``Pi_f(u)`` on totals for a family map ``u: X -> X'``."""
    return {e: (e[0], tuple((d, u[v]) for d, v in e[1])) for e in px.total.elements}


def pullback_map(v: dict, fy: FamilyOver) -> dict:
    """``f*(v)`` on totals for a family map ``v: Y -> Y'``."""
    return {(d, t): (d, v[t]) for (d, t) in fy.total.elements}


def _after(g: dict, h: dict) -> dict:
    return {t: g[v] for t, v in h.items()}


def verify_slice_adjunctions(f: FinMap, xs: list, ys: list, naturality: bool = True, ops: dict | None = None) -> LawReport:
    """Check Sigma_f -| f* -| Pi_f through explicit transposes.

    For every X in ``xs`` (over the domain of f) and Y in ``ys`` (over the
    codomain): both hom-sets are enumerated independently, their sizes
    compared, and every element round-tripped.  With ``naturality`` the
    transposes are also checked against every family map between members of
    ``xs`` and of ``ys``.  ``ops`` may replace any of the transposes by name
    (fault injection).
    """
    ops = ops or {}
    s_t = ops.get("sigma_transpose", sigma_transpose)
    s_u = ops.get("sigma_untranspose", sigma_untranspose)
    p_t = ops.get("pi_transpose", pi_transpose)
    p_u = ops.get("pi_untranspose", pi_untranspose)
    rep = LawReport("slice adjunctions")
    pulled = {id(y): pullback_family(f, y) for y in ys}
    sig = {id(x): sigma(f, x) for x in xs}
    pis = {id(x): pi(f, x) for x in xs}
    for x in xs:
        for y in ys:
            fy, sx, px = pulled[id(y)], sig[id(x)], pis[id(x)]
            left, right = family_homs(sx, y), family_homs(x, fy)
            rep.tick("sigma_hom_cardinality")
            if len(left) != len(right):
                rep.fail("sigma_hom_cardinality", (x, y))
            for h in left:
                rep.tick("sigma_round_trip")
                k = s_t(f, x, h)
                if not is_family_hom(x, fy, k) or s_u(k) != h:
                    rep.fail("sigma_round_trip", (x, y, h))
            for k in right:
                rep.tick("sigma_round_trip")
                h = s_u(k)
                if not is_family_hom(sx, y, h) or s_t(f, x, h) != k:
                    rep.fail("sigma_round_trip", (x, y, k))
            left, right = family_homs(fy, x), family_homs(y, px)
            rep.tick("pi_hom_cardinality")
            if len(left) != len(right):
                rep.fail("pi_hom_cardinality", (x, y))
            for k in left:
                rep.tick("pi_round_trip")
                m = p_t(f, y, k)
                if not is_family_hom(y, px, m) or p_u(m) != k:
                    rep.fail("pi_round_trip", (x, y, k))
            for m in right:
                rep.tick("pi_round_trip")
                k = p_u(m)
                if not is_family_hom(fy, x, k) or p_t(f, y, k) != m:
                    rep.fail("pi_round_trip", (x, y, m))
    if not naturality:
        return rep
    for x in xs:
        for y in ys:
            fy, sx, px = pulled[id(y)], sig[id(x)], pis[id(x)]
            sig_homs = family_homs(sx, y)
            pi_homs = family_homs(fy, x)
            for x2 in xs:
                if x2.base != x.base:
                    continue
                # u: X2 -> X acts on Hom(Sigma X, Y) by precomposition
                for u in family_homs(x2, x):
                    for h in sig_homs:
                        rep.tick("sigma_natural_in_family")
                        if s_t(f, x2, _after(h, sigma_map(u))) != _after(s_t(f, x, h), u):
                            rep.fail("sigma_natural_in_family", (x2, x, y))
                # u: X -> X2 acts on Hom(f*Y, X) by postcomposition
                for u in family_homs(x, x2):
                    pu = pi_map(u, px)
                    for k in pi_homs:
                        rep.tick("pi_natural_in_family")
                        if p_t(f, y, _after(u, k)) != _after(pu, p_t(f, y, k)):
                            rep.fail("pi_natural_in_family", (x, x2, y))
            for y2 in ys:
                if y2.base != y.base:
                    continue
                fy2 = pulled[id(y2)]
                for v in family_homs(y, y2):
                    fv = pullback_map(v, fy)
                    for h in sig_homs:
                        rep.tick("sigma_natural_in_base")
                        if s_t(f, x, _after(v, h)) != _after(fv, s_t(f, x, h)):
                            rep.fail("sigma_natural_in_base", (x, y, y2))
                for w in family_homs(y2, y):
                    fw = pullback_map(w, fy2)
                    for k in pi_homs:
                        rep.tick("pi_natural_in_base")
                        if p_t(f, y2, _after(k, fw)) != _after(p_t(f, y, k), w):
                            rep.fail("pi_natural_in_base", (x, y2, y))
    return rep


def check_pi_cardinality(f: FinMap, xs: list, rep: LawReport | None = None) -> LawReport:
    """The fiber of ``Pi_f X`` over y has ``prod_{f(d) = y} |X_d|`` elements."""
    rep = rep or LawReport("pi fiber cardinality")
    for x in xs:
        px = pi(f, x)
        sizes = x.fiber_sizes()
        for y in f.target.elements:
            rep.tick("pi_fiber_cardinality")
            want = 1
            for d in f.preimage(y):
                want *= sizes[d]
            if len(px.fiber(y)) != want:
                rep.fail("pi_fiber_cardinality", (x, y), f"{len(px.fiber(y))} != {want}")
    return rep
