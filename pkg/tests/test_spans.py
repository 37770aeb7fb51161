import itertools
import random

import pytest

from catq.coherence.spans import (
    Grid,
    SpanMorphism,
    associator,
    check_coherence,
    check_interchange,
    identity_cell,
    identity_span,
    interchange_check,
    left_unitor,
    pentagon_sides,
    random_grid,
    right_unitor,
    span,
    span_compose,
    spans_up_to_iso,
    triangle_sides,
)
from catq.coherence.strictify import (
    PathCell,
    bracketings,
    check_routes,
    check_strict_laws,
    concat,
    evaluate,
    identity_path,
    random_path,
)
from catq.errors import FeetMismatch, GridMismatch, MalformedInput
from catq.setlogic import Context


def ctx(n):
    return Context(tuple(range(n)))


ONE, TWO, THREE = ctx(1), ctx(2), ctx(3)


def relations(x, y):
    pairs = list(itertools.product(x.elements, y.elements))
    for k in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, k):
            yield combo


def test_unitors_are_invertible():
    for s in spans_up_to_iso(TWO, ONE, 3):
        for u in (left_unitor(s), right_unitor(s)):
            assert u.is_invertible() and u.target == s
            assert len(u.source.apex) == len(s.apex)


def test_apex_counts_match_matrix_product():
    rng = random.Random(0)
    rels_xy, rels_yz = list(relations(TWO, THREE)), list(relations(THREE, TWO))
    for _ in range(200):
        r, q = rng.choice(rels_xy), rng.choice(rels_yz)
        t, s = span(TWO, THREE, r), span(THREE, TWO, q)
        mt = [[int((x, y) in r) for y in THREE.elements] for x in TWO.elements]
        ms = [[int((y, z) in q) for z in TWO.elements] for y in THREE.elements]
        count = sum(mt[x][y] * ms[y][z] for x in range(2) for y in range(3) for z in range(2))
        st = span_compose(s, t)
        assert len(st.apex) == count
        assert all(t.rleg[a] == s.lleg[b] for a, b in st.apex.elements)


def test_empty_apex_absorbs():
    empty = span(TWO, TWO, [])
    for s in spans_up_to_iso(TWO, TWO, 2):
        assert len(span_compose(s, empty).apex) == 0
        assert len(span_compose(empty, s).apex) == 0


def test_feet_mismatch():
    with pytest.raises(FeetMismatch):
        span_compose(span(TWO, ONE, [(1, 0)]), span(ONE, ONE, [(0, 0)]))


def test_singleton_associator():
    s = span(ONE, ONE, [(0, 0)])
    a = associator(s, s, s)
    assert len(a.source.apex) == len(a.target.apex) == 1
    assert a.mapping == {(0, (0, 0)): ((0, 0), 0)}


def test_triangle_with_identity_middle():
    for f in spans_up_to_iso(TWO, ONE, 2):
        for g in spans_up_to_iso(ONE, TWO, 2):
            lhs, rhs = triangle_sides(g, f)
            assert lhs == rhs
            assert lhs.source == span_compose(span_compose(g, identity_span(ONE)), f)


def test_pentagon_small():
    rep = check_coherence(foot_sizes=(1, 2), max_apex=1)
    assert rep.ok and rep.checks["pentagon"] > 0 and rep.checks["triangle"] > 0


def test_pentagon_sides_are_bijections():
    rng = random.Random(3)
    for _ in range(30):
        k, h, g, f = (span(TWO, TWO, [(rng.randrange(2), rng.randrange(2)) for _ in range(rng.randint(0, 2))]) for _ in range(4))
        top, bottom = pentagon_sides(k, h, g, f)
        assert top == bottom and top.is_invertible()


def test_interchange_identity_grid():
    t, s = span(ONE, TWO, [(0, 0), (0, 1)]), span(TWO, ONE, [(1, 0)])
    grid = Grid(identity_cell(t), identity_cell(t), identity_cell(s), identity_cell(s))
    assert interchange_check(grid)


def test_interchange_random():
    rng = random.Random(0)
    for _ in range(100):
        assert interchange_check(random_grid(rng))
    assert check_interchange(random.Random(5), n=50).ok


def test_grid_mismatch():
    t, s = span(ONE, TWO, [(0, 0)]), span(ONE, ONE, [(0, 0)])
    with pytest.raises(GridMismatch):
        interchange_check(Grid(identity_cell(t), identity_cell(t), identity_cell(s), identity_cell(s)))


def test_non_span_morphism_rejected():
    a, b = span(ONE, TWO, [(0, 0)]), span(ONE, TWO, [(0, 1)])
    with pytest.raises(MalformedInput):
        SpanMorphism(a, b, {0: 0})


# -- strictification by paths --------------------------------------------------


def test_empty_path_is_identity():
    p = identity_path(TWO)
    assert evaluate(p) == identity_span(TWO)
    q = PathCell(TWO, [span(TWO, ONE, [(0, 0)])])
    assert concat(p, q) == q == concat(q, identity_path(ONE))


def test_path_typing():
    with pytest.raises(FeetMismatch):
        PathCell(ONE, [span(TWO, ONE, [(0, 0)])])
    with pytest.raises(FeetMismatch):
        concat(PathCell(ONE), PathCell(TWO))


def test_bracketing_counts():
    assert [len(bracketings(0, n)) for n in range(1, 6)] == [1, 1, 2, 5, 14]


def test_four_generator_routes_agree():
    rng = random.Random(0)
    for _ in range(10):
        p = random_path(rng, 4)
        rep = check_routes(p)
        assert rep.ok
        assert rep.checks["routes_agree"] == 5


def test_strict_laws():
    rng = random.Random(1)
    for _ in range(30):
        whole = random_path(rng, rng.randint(0, 4))
        i, j = sorted(rng.randint(0, len(whole)) for _ in range(2))
        feet = [whole.foot] + [c.right for c in whole.cells]
        p = PathCell(feet[0], whole.cells[:i])
        q = PathCell(feet[i], whole.cells[i:j])
        r = PathCell(feet[j], whole.cells[j:])
        assert concat(concat(p, q), r) == whole
        assert check_strict_laws(p, q, r).ok
