import itertools

import pytest

from catq.coherence.dtt import all_chains, substitution_composition_coherence, verify_all_chains
from catq.errors import ContextMismatch
from catq.slice import FinMap
from catq.setlogic import Context


def ctx(n):
    return Context(tuple(range(n)))


def fm(n, m, table):
    return FinMap(ctx(n), ctx(m), dict(enumerate(table)))


def subsets(xs):
    return [frozenset(c) for k in range(len(xs) + 1) for c in itertools.combinations(xs, k)]


def test_worked_chain():
    f = FinMap(Context((0, 1)), Context(("*",)), {0: "*", 1: "*"})
    g = FinMap.identity(Context(("*",)))
    assert substitution_composition_coherence(f, g).ok
    gf = f.then(g)
    assert {gf(x) for x in {0}} == {g(y) for y in {f(x) for x in {0}}} == {"*"}


def test_identity_g():
    for table in itertools.product(range(2), repeat=3):
        f = fm(3, 2, table)
        assert substitution_composition_coherence(f, FinMap.identity(ctx(2))).ok


def test_against_set_comprehension():
    for n0, n1, n2, f, g in all_chains(2):
        F, G = fm(n0, n1, f), fm(n1, n2, g)
        GF = F.then(G)
        for s in subsets(range(n0)):
            assert {GF(x) for x in s} == {G(y) for y in {F(x) for x in s}}
        for t in subsets(range(n2)):
            assert {x for x in range(n0) if GF(x) in t} == {x for x in range(n0) if G(F(x)) in t}
        assert substitution_composition_coherence(F, G).ok


def test_exhaustive_up_to_three():
    rep = verify_all_chains(3)
    assert rep.ok and rep.checks["chains"] == sum(
        (n1 ** n0) * (n2 ** n1) for n0, n1, n2 in itertools.product(range(4), repeat=3)
    )


def test_wrong_composite_detected():
    f, g = fm(2, 2, (0, 1)), fm(2, 2, (0, 0))
    rep = substitution_composition_coherence(f, g, composite=fm(2, 2, (0, 1)))
    assert not rep.ok and rep.violations[0].witness is not None


def test_mismatch():
    with pytest.raises(ContextMismatch):
        substitution_composition_coherence(fm(1, 2, (0,)), fm(3, 1, (0, 0, 0)))
    with pytest.raises(ContextMismatch):
        substitution_composition_coherence(fm(1, 1, (0,)), fm(1, 1, (0,)), composite=fm(2, 1, (0, 0)))
