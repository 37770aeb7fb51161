import random

import pytest

from catq.coherence.pseudolimit import (
    PseudoCone,
    PseudoDiagram,
    check_pseudo_limit,
    discrete_pair,
    find_mediators,
    limit_cone,
    named_object_cone,
    pseudo_limit,
    single_edge,
    single_node,
    verify_pseudo_universal,
)
from catq.errors import MalformedInput, ShapeCapExceeded
from catq.fincat import (
    FinFunctor,
    NatTransform,
    chain,
    compose_functors,
    discrete,
    generated_category,
    identity_functor,
    random_category,
    terminal,
)
from catq.search import enumerate_functors, find_equivalence, is_equivalence
from catq.suites import _z2_chain

Z2 = generated_category({0: 2}, [(0, 0, (1, 0))])


def test_single_node_is_the_node():
    for seed in range(4):
        c = random_category(random.Random(seed), max_objects=3, max_morphisms=8)
        pl = pseudo_limit(single_node(c))
        assert check_pseudo_limit(pl).ok
        (p,) = pl.projections.values()
        assert len(pl.category.objects) == len(c.objects)
        assert len(pl.category.morphisms) == len(c.morphisms)
        assert sorted(p.morphism_map.values()) == sorted(m.id for m in c.morphisms)


def test_discrete_pair_is_the_product():
    rng = random.Random(1)
    for _ in range(3):
        c = random_category(rng, max_objects=3, max_morphisms=6)
        d = random_category(rng, max_objects=2, max_morphisms=5)
        pl = pseudo_limit(discrete_pair(c, d))
        assert check_pseudo_limit(pl).ok
        assert len(pl.category.objects) == len(c.objects) * len(d.objects)
        assert len(pl.category.morphisms) == len(c.morphisms) * len(d.morphisms)


def test_single_edge_equivalent_to_source():
    for c in (Z2, chain(2)):
        for F in enumerate_functors(c, Z2):
            pl = pseudo_limit(single_edge(F))
            assert check_pseudo_limit(pl).ok
            src = pl.diagram.shape.src[pl.diagram.edge_ids[0]]
            assert is_equivalence(pl.projections[src])
            assert find_equivalence(pl.category, c) is not None


def test_identity_edge_on_z2_counts():
    pl = pseudo_limit(single_edge(identity_functor(Z2)))
    # objects (x, x, a) with a in {e, s}; a morphism is any u0, with u1 then forced
    assert len(pl.category.objects) == 2
    assert len(pl.category.morphisms) == 8


def test_z2_chain_with_swap_cells():
    d, z2 = _z2_chain()
    pl = pseudo_limit(d)
    assert check_pseudo_limit(pl).ok
    assert find_equivalence(pl.category, z2) is not None


def test_own_cone_has_identity_mediator():
    pl = pseudo_limit(single_edge(identity_functor(Z2)))
    cone = limit_cone(pl)
    meds, _ = find_mediators(pl, cone)
    L = pl.category
    assert any(
        all(m.functor.object_map[x] == x for x in L.objects)
        and all(m.functor.morphism_map[u.id] == u.id for u in L.morphisms)
        for m in meds
    )
    assert verify_pseudo_universal(pl, cone).ok


def test_named_object_mediators_are_isos_into_it():
    for c in (Z2, chain(2)):
        for F in enumerate_functors(c, Z2):
            pl = pseudo_limit(single_edge(F))
            L = pl.category
            for obj in L.objects:
                cone = named_object_cone(pl, obj)
                meds, _ = find_mediators(pl, cone, limit=1000)
                assert len(meds) == sum(len(L.isos(x, obj)) for x in L.objects)
                assert verify_pseudo_universal(pl, cone).ok


def test_non_invertible_cone_cell_rejected():
    c = chain(2)
    pl = pseudo_limit(single_edge(identity_functor(c)))
    t = terminal()
    (x,) = t.objects
    (e,) = pl.diagram.edge_ids
    up = c.hom(0, 1)[0]
    legs = {j: FinFunctor(t, c, {x: j}, {0: c.identity[j]}) for j in (0, 1)}
    src = compose_functors(identity_functor(c), legs[0])
    cone = PseudoCone(t, legs, {e: NatTransform(src, legs[1], {x: up})})
    with pytest.raises(MalformedInput):
        verify_pseudo_universal(pl, cone)


def test_shape_cap():
    with pytest.raises(ShapeCapExceeded):
        pseudo_limit(PseudoDiagram(discrete(range(4)), {j: terminal() for j in range(4)}, {}))


def test_missing_comparison_cell_rejected():
    s = chain(3)
    swap = FinFunctor(Z2, Z2, {0: 0}, {m.id: m.id for m in Z2.morphisms})
    const = FinFunctor(Z2, Z2, {0: 0}, {m.id: Z2.identity[0] for m in Z2.morphisms})
    edges = {}
    for m in s.morphisms:
        if m.id in s.identities:
            continue
        edges[m.id] = const if (m.src, m.tgt) == (0, 2) else swap
    with pytest.raises(MalformedInput):
        pseudo_limit(PseudoDiagram(s, {j: Z2 for j in s.objects}, edges))
