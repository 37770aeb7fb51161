import itertools
import random
from dataclasses import replace

from hypothesis import given, settings
from hypothesis import strategies as st

from catq.coherence.spans import pentagon_sides, span
from catq.fincat import check_category, generated_category, random_category
from catq.grothendieck import build_total, check_cartesian_lifts, check_total, random_indexed_model
from catq.setlogic import Context, Predicate, exists, extend_context, forall, reindex


def valid_by_oracle(c) -> bool:
    """Category laws recomputed from scratch on the raw tables."""
    src = {m.id: m.src for m in c.morphisms}
    tgt = {m.id: m.tgt for m in c.morphisms}
    for x in c.objects:
        i = c.identity.get(x)
        if i not in src or src[i] != x or tgt[i] != x:
            return False
    for g, f in itertools.product(src, repeat=2):
        if src[g] != tgt[f]:
            continue
        gf = c.compose.get((g, f))
        if gf not in src or src[gf] != src[f] or tgt[gf] != tgt[g]:
            return False
    for f in src:
        if c.compose[(c.identity[tgt[f]], f)] != f or c.compose[(f, c.identity[src[f]])] != f:
            return False
    for h, g, f in itertools.product(src, repeat=3):
        if src[h] == tgt[g] and src[g] == tgt[f]:
            if c.compose[(h, c.compose[(g, f)])] != c.compose[(c.compose[(h, g)], f)]:
                return False
    return True


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(0, 10_000))
def test_single_compose_mutation_flagged_or_valid(seed, which, repl):
    c = random_category(random.Random(seed), max_objects=4, max_morphisms=12)
    assert check_category(c).ok and valid_by_oracle(c)
    keys = sorted(c.compose, key=repr)
    key = keys[which % len(keys)]
    ids = [m.id for m in c.morphisms]
    new = ids[repl % len(ids)]
    if new == c.compose[key]:
        return
    mutated = replace(c, compose={**c.compose, key: new})
    flagged = not check_category(mutated).ok
    assert flagged != valid_by_oracle(mutated)


def test_idempotent_z2_edit_is_still_a_category():
    z2 = generated_category({0: 2}, [(0, 0, (1, 0))])
    (s,) = [m.id for m in z2.morphisms if m.id not in z2.identities]
    assert z2.compose[(s, s)] == z2.identity[0]
    mutated = replace(z2, compose={**z2.compose, (s, s): s})
    assert check_category(mutated).ok and valid_by_oracle(mutated)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_random_indexed_models_build(seed):
    m = random_indexed_model(random.Random(seed))
    t = build_total(m)
    assert check_total(t).ok and check_cartesian_lifts(t, m).ok


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_quantifier_galois(n, k, data):
    g, a = Context(tuple(range(n))), Context(tuple(range(k)))
    ext = extend_context(g, a)
    phi = Predicate(ext, data.draw(st.sets(st.sampled_from(ext.elements))) if ext.elements else ())
    s = Predicate(g, data.draw(st.sets(st.sampled_from(g.elements))) if g.elements else ())
    pulled = reindex(s, ext).members
    assert (s.members <= forall(phi).members) == (pulled <= phi.members)
    assert (exists(phi).members <= s.members) == (phi.members <= pulled)


legs = st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), max_size=2)


@settings(max_examples=60, deadline=None)
@given(legs, legs, legs, legs)
def test_pentagon_on_random_spans(a, b, c, d):
    two = Context((0, 1))
    k, h, g, f = (span(two, two, x) for x in (a, b, c, d))
    top, bottom = pentagon_sides(k, h, g, f)
    assert top == bottom
