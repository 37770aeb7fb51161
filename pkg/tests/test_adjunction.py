import random
from dataclasses import replace

import pytest

from catq.adjunction import (
    Adjunction,
    check_lifted_naturality,
    find_right_adjoint,
    hom_bijection,
    transpose_backward,
    transpose_backward_formula,
    transpose_forward,
    verify_adjunction,
)
from catq.errors import MissingComparisonCell, NotFound
from catq.fincat import (
    FinFunctor,
    NatTransform,
    chain,
    codiscrete,
    compose_functors,
    constant_functor,
    discrete,
    identity_functor,
    identity_transform,
    random_category,
    terminal,
)
from catq.search import enumerate_functors
from catq.setlogic import Context, SetModel, as_adjunction_forall, inclusion, lifted_family
from catq.slice import FinMap, Subobject, forall_f_subobject, pullback_subobject

GAMMA, A = Context(("1", "2")), Context(("a", "b"))


def worked():
    adj = as_adjunction_forall(GAMMA, A)
    m = SetModel(GAMMA, A)
    phi = m.ext.context.mask([("1", "a"), ("1", "b")])
    return adj, m, phi


def test_forward_of_identity_is_counit():
    adj, m, phi = worked()
    fa = adj.right.object_map[phi]
    h = adj.lower.identity[fa]
    assert transpose_forward(adj, h, phi) == adj.counit.components[phi]


def test_worked_example_transposes():
    adj, m, phi = worked()
    one = GAMMA.mask(["1"])
    h = inclusion(adj.lower, one, adj.right.object_map[phi])
    g = transpose_forward(adj, h, phi)
    # {1} x A included in phi
    assert adj.upper.src[g] == m.ext.context.mask([("1", "a"), ("1", "b")])
    assert adj.upper.tgt[g] == phi
    assert transpose_backward(adj, g, one) == h


def test_backward_of_counit_is_identity():
    adj, m, phi = worked()
    eps = adj.counit.components[phi]
    fa = adj.right.object_map[phi]
    assert transpose_backward(adj, eps, fa) == adj.lower.identity[fa]


def test_round_trip_and_unique_preimages_on_every_hom_pair():
    adj, _, _ = worked()
    c, d = adj.lower, adj.upper
    for x in c.objects:
        for y in d.objects:
            w = hom_bijection(adj, x, y)
            for h, g in w.forward.items():
                assert w.backward[g] == h
            for g, h in w.backward.items():
                assert transpose_backward_formula(adj, g, x) == h
            assert len(w.forward) == len(w.backward)


def test_identity_adjunction():
    c = chain(3)
    I = identity_functor(c)
    adj = Adjunction(I, I, identity_transform(I), identity_transform(I), "id")
    assert verify_adjunction(adj).ok


def test_terminal_object_gives_right_adjoint_to_collapse():
    c = chain(3)
    adj = find_right_adjoint(constant_functor(c, terminal(), 0))
    assert adj.right.object_map[0] == 2  # the top of the chain is terminal
    assert verify_adjunction(adj).ok


def test_no_terminal_object_means_not_found():
    with pytest.raises(NotFound):
        find_right_adjoint(constant_functor(discrete("ab"), terminal(), 0))


def test_inclusion_of_discrete_into_codiscrete_has_no_right_adjoint():
    # Hom(F x, y) is a singleton for every pair but Hom(x, G y) is not
    d, cd = discrete("ab"), codiscrete("ab")
    F = FinFunctor(d, cd, {"a": "a", "b": "b"}, {m.id: cd.identity[m.src] for m in d.morphisms})
    with pytest.raises(NotFound):
        find_right_adjoint(F)


def test_discrete_to_codiscrete_toy():
    # the identity-on-objects functor back exists only for a single object
    for n in (1, 2, 3):
        objs = "abc"[:n]
        d, cd = discrete(objs), codiscrete(objs)
        F = FinFunctor(d, cd, {x: x for x in objs}, {m.id: cd.identity[m.src] for m in d.morphisms})
        backs = [G for G in enumerate_functors(cd, d) if all(G.object_map[x] == x for x in objs)]
        if n == 1:
            (G,) = backs
            unit = NatTransform(identity_functor(d), compose_functors(G, F), {x: d.identity[x] for x in objs})
            counit = NatTransform(compose_functors(F, G), identity_functor(cd), {x: cd.identity[x] for x in objs})
            assert verify_adjunction(Adjunction(F, G, unit, counit)).ok
        else:
            assert backs == []


def test_codiscrete_collapse_is_an_equivalence_adjunction():
    cd = codiscrete("abc")
    adj = find_right_adjoint(constant_functor(cd, terminal(), 0))
    assert verify_adjunction(adj).ok


def test_product_with_a_finds_pi_like_adjoint():
    # meet with T on P(Γ); the right adjoint should be ∀ along T -> Γ after pulling back
    gamma = Context((0, 1))
    c = SetModel(gamma, Context((0,))).base_fiber
    t = 0b01
    F = FinFunctor(c, c, {s: s & t for s in c.objects}, {f.id: inclusion(c, f.src & t, f.tgt & t) for f in c.morphisms})
    adj = find_right_adjoint(F)
    assert verify_adjunction(adj).ok
    sub_t = Context(tuple(gamma.subset(t)))
    iota = FinMap(sub_t, gamma, {x: x for x in sub_t.elements})
    for s in c.objects:
        pulled = pullback_subobject(iota, Subobject(gamma, gamma.subset(s)))
        assert gamma.mask(forall_f_subobject(iota, pulled).members) == adj.right.object_map[s]


def test_unit_replaced_by_non_universal_arrow_fails_triangle():
    c = chain(2)
    adj = find_right_adjoint(constant_functor(c, terminal(), 0))
    # unit at 0 replaced by 0 -> 0 instead of 0 -> 1: ill-typed for GF(0) = 1
    bad_unit = replace(adj.unit, components={**adj.unit.components, 0: c.identity[0]})
    rep = verify_adjunction(replace(adj, unit=bad_unit))
    assert not rep.ok


def test_random_found_adjunctions_round_trip():
    rng = random.Random(3)
    found = 0
    for _ in range(40):
        c = random_category(rng, 3, 10)
        d = random_category(rng, 3, 10)
        for F in enumerate_functors(c, d, cap=20_000):
            try:
                adj = find_right_adjoint(F)
            except NotFound:
                continue
            found += 1
            assert verify_adjunction(adj).ok
            break
    assert found >= 5


def test_lifted_family_identity_and_set_model():
    sq = lifted_family(Context((0, 1)), Context(("*",)), Context(("a",)), {0: "*", 1: "*"})
    assert check_lifted_naturality([sq]).ok
    const = lifted_family(GAMMA, GAMMA, A, {"1": "1", "2": "2"})
    assert check_lifted_naturality([const]).ok


def test_lifted_family_rejects_non_inverse_cell():
    sq = lifted_family(Context((0, 1)), Context((0, 1)), Context(("a",)), {0: 0, 1: 0})
    lam = sq.left_cell
    fibre = lam.category
    # replace the cell by a strictly increasing inclusion where one is possible
    bad = None
    for x, a in lam.components.items():
        for f in fibre.morphisms:
            if f.src == fibre.src[a] and f.tgt != fibre.tgt[a]:
                bad = replace(lam, components={**lam.components, x: f.id})
                break
        if bad:
            break
    rep = check_lifted_naturality([replace(sq, left_cell=bad)])
    assert not rep.ok


def test_missing_comparison_cell():
    sq = lifted_family(Context((0,)), Context((0,)), Context(("a",)), {0: 0})
    with pytest.raises(MissingComparisonCell):
        check_lifted_naturality([replace(sq, right_cell=None)])
