import itertools
import math

import pytest

from catq.errors import ContextMismatch, MalformedInput
from catq.setlogic import Context, Predicate, exists, extend_context, forall
from catq.slice import (
    FamilyOver,
    FinMap,
    OmegaMap,
    Subobject,
    characteristic,
    check_pi_cardinality,
    classified,
    exists_f_subobject,
    families_over,
    family_homs,
    forall_f_subobject,
    pi,
    projection_map,
    pullback_family,
    pullback_subobject,
    sigma,
    verify_slice_adjunctions,
)


def ctx(n):
    return Context(tuple(range(n)))


def all_maps(src, tgt):
    return [FinMap(src, tgt, dict(zip(src.elements, img))) for img in itertools.product(tgt.elements, repeat=len(src))]


def subsets(xs):
    return [frozenset(c) for k in range(len(xs) + 1) for c in itertools.combinations(xs, k)]


def test_finmap_validation():
    with pytest.raises(MalformedInput):
        FinMap(ctx(2), ctx(1), {0: 0})
    with pytest.raises(MalformedInput):
        FinMap(ctx(1), ctx(1), {0: 5})
    with pytest.raises(ContextMismatch):
        FinMap.identity(ctx(1)).then(FinMap.identity(ctx(2)))


def test_pullback_family_fibers():
    f = FinMap(ctx(3), ctx(2), {0: 0, 1: 0, 2: 1})
    y = FamilyOver(ctx(2), Context(("p", "q", "r")), {"p": 0, "q": 0, "r": 1})
    fy = pullback_family(f, y)
    assert fy.fiber_sizes() == {0: 2, 1: 2, 2: 1}
    assert fy.fiber(2) == [(2, "r")]


def test_sigma_keeps_total():
    f = FinMap(ctx(3), ctx(2), {0: 0, 1: 0, 2: 1})
    x = FamilyOver(ctx(3), ctx(3), {0: 0, 1: 1, 2: 2})
    assert sigma(f, x).fiber_sizes() == {0: 2, 1: 1}


def test_pi_empty_fibers():
    # an empty fiber of X kills the product; an empty preimage gives one section
    f = FinMap(ctx(2), ctx(2), {0: 0, 1: 0})
    x = FamilyOver(ctx(2), ctx(1), {0: 0})
    assert pi(f, x).fiber_sizes() == {0: 0, 1: 1}


def test_pi_cardinality_exhaustive():
    for n, m in itertools.product(range(3), repeat=2):
        for f in all_maps(ctx(n), ctx(m)):
            xs = families_over(ctx(n), 3)
            assert check_pi_cardinality(f, xs).ok
            for x in xs:
                sizes = x.fiber_sizes()
                for y in f.target.elements:
                    assert len(pi(f, x).fiber(y)) == math.prod(sizes[d] for d in f.preimage(y))


def test_hom_counts():
    x = FamilyOver(ctx(2), ctx(3), {0: 0, 1: 0, 2: 1})
    y = FamilyOver(ctx(2), ctx(3), {0: 0, 1: 1, 2: 1})
    # each of the two elements over 0 has one choice, the one over 1 has two
    assert len(family_homs(x, y)) == 2
    with pytest.raises(ContextMismatch):
        family_homs(x, FamilyOver(ctx(1), ctx(0), {}))


def test_adjunctions_on_small_maps():
    for n, m in itertools.product(range(3), repeat=2):
        for f in all_maps(ctx(n), ctx(m)):
            rep = verify_slice_adjunctions(f, families_over(ctx(n), 2), families_over(ctx(m), 2))
            assert rep.ok, rep.violations[:1]


def test_adjunction_round_trips_at_size_three():
    f = FinMap(ctx(3), ctx(2), {0: 0, 1: 0, 2: 1})
    rep = verify_slice_adjunctions(f, families_over(ctx(3), 3), families_over(ctx(2), 3), naturality=False)
    assert rep.ok


def test_faulty_transpose_detected():
    f = FinMap(ctx(2), ctx(1), {0: 0, 1: 0})

    def lossy(f, x, h):
        return {t: (x.display[t], next(iter(h.values()))) for t in x.total.elements}

    rep = verify_slice_adjunctions(f, families_over(ctx(2), 2), families_over(ctx(1), 2), ops={"sigma_transpose": lossy})
    assert not rep.ok and rep.violations[0].witness is not None


def test_characteristic_round_trip():
    c = ctx(3)
    for s in subsets(c.elements):
        sub = Subobject(c, s)
        chi = characteristic(sub)
        assert classified(chi) == sub
        assert characteristic(classified(chi)) == chi
    with pytest.raises(MalformedInput):
        OmegaMap(c, {0: True})


def test_image_galois_connections():
    for n, m in itertools.product(range(4), range(3)):
        for f in all_maps(ctx(n), ctx(m)):
            for phi in subsets(f.source.elements):
                p = Subobject(f.source, phi)
                ex, fa = exists_f_subobject(f, p).members, forall_f_subobject(f, p).members
                for psi in subsets(f.target.elements):
                    pulled = pullback_subobject(f, Subobject(f.target, psi)).members
                    assert (ex <= psi) == (phi <= pulled)
                    assert (psi <= fa) == (pulled <= phi)


def test_projection_recovers_set_quantifiers():
    for n, k in itertools.product(range(3), repeat=2):
        g, a = ctx(n), Context(tuple("ab"[:k]))
        proj = projection_map(g, a)
        ext = extend_context(g, a)
        for phi in subsets(ext.elements):
            sub = Subobject(proj.source, phi)
            assert forall_f_subobject(proj, sub).members == forall(Predicate(ext, phi)).members
            assert exists_f_subobject(proj, sub).members == exists(Predicate(ext, phi)).members


def test_subobject_ambient_checks():
    f = FinMap(ctx(2), ctx(1), {0: 0, 1: 0})
    with pytest.raises(ContextMismatch):
        Subobject(ctx(1), {3})
    with pytest.raises(ContextMismatch):
        exists_f_subobject(f, Subobject(ctx(1), {0}))
    with pytest.raises(ContextMismatch):
        pullback_subobject(f, Subobject(ctx(2), {0}))
