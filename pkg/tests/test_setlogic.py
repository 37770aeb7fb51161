import itertools

import pytest

from catq.adjunction import verify_adjunction
from catq.errors import ContextMismatch, SizeCapExceeded
from catq.setlogic import (
    Context,
    Predicate,
    SetModel,
    as_adjunction_exists,
    as_adjunction_forall,
    exists,
    extend_context,
    forall,
    pairing,
    quantify_via_transposes,
    reindex,
)

GAMMA, A = Context(("1", "2")), Context(("a", "b"))
EXT = extend_context(GAMMA, A)
PHI = Predicate(EXT, {("1", "a"), ("1", "b")})


def subsets(xs):
    return [frozenset(c) for k in range(len(xs) + 1) for c in itertools.combinations(xs, k)]


def test_extension_elements():
    assert EXT.elements == (("1", "a"), ("1", "b"), ("2", "a"), ("2", "b"))
    assert extend_context(GAMMA, Context(())).elements == ()


def test_pairing_is_unique_mediator():
    # every pair (f, g) out of X with |X| <= 3 has exactly one h with both projections right
    for n in range(4):
        xs = tuple(range(n))
        for fs in itertools.product(GAMMA.elements, repeat=n):
            for gs in itertools.product(A.elements, repeat=n):
                f, g = dict(zip(xs, fs)), dict(zip(xs, gs))
                candidates = [
                    dict(zip(xs, hs))
                    for hs in itertools.product(EXT.elements, repeat=n)
                    if all(h[0] == f[x] and h[1] == g[x] for x, h in zip(xs, hs))
                ]
                assert candidates == [pairing(EXT, f, g)]


def test_reindex_examples():
    assert reindex(Predicate(GAMMA, {"1"}), EXT).sorted() == [("1", "a"), ("1", "b")]
    assert reindex(Predicate(GAMMA, set()), EXT).members == frozenset()


def test_reindex_monotone():
    for n, k in itertools.product(range(4), repeat=2):
        g, a = Context(tuple(range(n))), Context(tuple("abc"[:k]))
        ext = extend_context(g, a)
        for s in subsets(g.elements):
            for t in subsets(g.elements):
                if s <= t:
                    assert reindex(Predicate(g, s), ext).members <= reindex(Predicate(g, t), ext).members


def test_worked_example_quantifiers():
    assert repr(forall(PHI)) == "{1}"
    assert repr(exists(PHI)) == "{1}"


def test_trivial_quantifier_cases():
    full = Predicate(EXT, EXT.elements)
    assert forall(full).members == frozenset(GAMMA.elements)
    assert exists(Predicate(EXT, ())).members == frozenset()
    empty_a = extend_context(GAMMA, Context(()))
    assert forall(Predicate(empty_a, ())).members == frozenset(GAMMA.elements)
    assert exists(Predicate(empty_a, ())).members == frozenset()


def test_quantifiers_need_extended_context():
    with pytest.raises(ContextMismatch):
        forall(Predicate(GAMMA, {"1"}))


def test_worked_example_adjunctions_verify():
    fa = as_adjunction_forall(GAMMA, A)
    assert len(fa.lower.objects) == 4 and len(fa.upper.objects) == 16
    assert verify_adjunction(fa).ok
    assert verify_adjunction(as_adjunction_exists(GAMMA, A)).ok


def test_single_point_fiber_makes_quantifiers_relabelings():
    g, a = Context((0, 1, 2)), Context(("*",))
    ext = extend_context(g, a)
    for s in subsets(ext.elements):
        p = Predicate(ext, s)
        assert forall(p).members == exists(p).members == frozenset(x for x, _ in s)


def test_galois_connections_exhaustive():
    for n, k in itertools.product(range(3), repeat=2):
        g, a = Context(tuple(range(n))), Context(tuple("ab"[:k]))
        ext = extend_context(g, a)
        for s in subsets(g.elements):
            pulled = reindex(Predicate(g, s), ext).members
            for phi in subsets(ext.elements):
                p = Predicate(ext, phi)
                assert (s <= forall(p).members) == (pulled <= phi)
                assert (exists(p).members <= s) == (phi <= pulled)


def test_exists_of_reindex():
    for n, k in itertools.product(range(4), repeat=2):
        g, a = Context(tuple(range(n))), Context(tuple("abc"[:k]))
        ext = extend_context(g, a)
        for s in subsets(g.elements):
            got = exists(reindex(Predicate(g, s), ext)).members
            assert got == (s if k else frozenset())


def test_bitmask_model_matches_predicates():
    for n, k in itertools.product(range(4), range(3)):
        g, a = Context(tuple(range(n))), Context(tuple("ab"[:k]))
        m = SetModel(g, a)
        for phi in subsets(m.ext.elements):
            p = Predicate(m.ext, phi)
            assert g.subset(m.forall(m.to_mask(p))) == forall(p).members
            assert g.subset(m.exists(m.to_mask(p))) == exists(p).members


def test_transposes_determine_quantifiers():
    assert quantify_via_transposes(PHI, "forall").sorted() == ["1"]
    assert quantify_via_transposes(PHI, "exists").sorted() == ["1"]
    for n, k in itertools.product(range(3), repeat=2):
        ext = extend_context(Context(tuple(range(n))), Context(tuple("ab"[:k])))
        for phi in subsets(ext.elements):
            p = Predicate(ext, phi)
            assert quantify_via_transposes(p, "forall") == forall(p)
            assert quantify_via_transposes(p, "exists") == exists(p)


def test_powerset_cap():
    with pytest.raises(SizeCapExceeded):
        SetModel(Context(tuple(range(4))), Context(tuple(range(3))))
