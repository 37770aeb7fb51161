import random

import pytest

from catq.errors import MalformedInput
from catq.fincat import FinFunctor, chain, check_category, terminal
from catq.grothendieck import (
    IndexedModel,
    build_total,
    check_cartesian_lifts,
    check_fiber_recovery,
    check_indexed_model,
    check_total,
    inverse_image_model,
    random_base_model,
    random_indexed_model,
)
from catq.setlogic import monotone_functor, powerset_poset
from catq.suites import set_model_indexed


def identity_on(p):
    return FinFunctor(p, p, {x: x for x in p.objects}, {a.id: a.id for a in p.morphisms})


def expected_counts(m):
    """Objects and morphisms of the total category counted from the fibers alone."""
    b = m.base
    objs = sum(len(m.fiber[c].objects) for c in b.objects)
    morphs = 0
    for f in b.morphisms:
        r = m.reindex[f.id]
        for x in m.fiber[f.src].objects:
            for y in m.fiber[f.tgt].objects:
                morphs += len(m.fiber[f.src].hom(x, r.object_map[y]))
    return objs, morphs


def full_check(m):
    t = build_total(m)
    for rep in (check_total(t), check_cartesian_lifts(t, m), check_fiber_recovery(t, m)):
        assert rep.ok, rep.violations[:1]
    return t


def test_terminal_base_recovers_fiber():
    p = powerset_poset(2)
    one = terminal()
    (c,) = one.objects
    m = IndexedModel(one, {c: p}, {one.identity[c]: identity_on(p)})
    t = full_check(m)
    assert len(t.category.objects) == 4 and len(t.category.morphisms) == len(p.morphisms) == 9


def test_arrow_base_counts():
    m = inverse_image_model(chain(2), {0: 1, 1: 2}, {0: (0,), 1: (0,), 2: (0, 1)})
    t = full_check(m)
    assert (len(t.category.objects), len(t.category.morphisms)) == expected_counts(m)
    # fiber over 0 is P(1) (3 arrows), over 1 is P(2) (9 arrows); over the arrow,
    # pairs (x, y) with x below y^-1(0): 2 + 2 + 1 + 1 = 6
    assert len(t.category.morphisms) == 3 + 9 + 6


def test_set_model_instance():
    m = set_model_indexed()
    assert check_indexed_model(m).ok
    t = full_check(m)
    assert (len(t.category.objects), len(t.category.morphisms)) == expected_counts(m)


def test_broken_reindex_composition_rejected():
    base = chain(3)
    p = powerset_poset(1)
    reindex = {f.id: identity_on(p) for f in base.morphisms}
    long = base.hom(0, 2)[0]
    reindex[long] = monotone_functor(p, p, lambda s: 0)
    m = IndexedModel(base, {c: p for c in base.objects}, reindex)
    rep = check_indexed_model(m)
    assert not rep.ok and rep.violations[0].law == "reindex_composition"
    with pytest.raises(MalformedInput):
        build_total(m)


def test_missing_fiber_rejected():
    base = chain(2)
    p = powerset_poset(0)
    with pytest.raises(MalformedInput):
        check_indexed_model(IndexedModel(base, {0: p}, {}))


@pytest.mark.parametrize("seed", range(12))
def test_random_models(seed):
    rng = random.Random(seed)
    for m in (random_indexed_model(rng), random_base_model(rng)):
        assert check_indexed_model(m).ok
        t = full_check(m)
        assert check_category(t.category).ok
        assert (len(t.category.objects), len(t.category.morphisms)) == expected_counts(m)
