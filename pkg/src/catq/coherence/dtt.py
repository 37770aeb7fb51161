"""Composition coherence of substitution and quantification along context maps.

In the subset model ``∃_{g.f} = ∃_g ∃_f``, ``∀_{g.f} = ∀_g ∀_f`` and
``(g.f)* = f* g*`` hold on the nose, so the canonical comparison 2-cells are
identities; they are checked extensionally on every subset.
"""
from __future__ import annotations

import itertools

from ..errors import ContextMismatch
from ..report import LawReport
from ..slice import FinMap


def _table(f: FinMap) -> tuple:
    return tuple(f.target.index[f(x)] for x in f.source.elements)


def _image(t: tuple, s: int) -> int:
    out = 0
    for i, j in enumerate(t):
        if s >> i & 1:
            out |= 1 << j
    return out


def _preimage(t: tuple, s: int) -> int:
    return sum(1 << i for i, j in enumerate(t) if s >> j & 1)


def _universal(t: tuple, n_target: int, s: int) -> int:
    # y is in ∀_f S iff its whole fiber lies in S
    bad = 0
    for i, j in enumerate(t):
        if not s >> i & 1:
            bad |= 1 << j
    return ((1 << n_target) - 1) & ~bad


def _check_tables(rep: LawReport, f: tuple, g: tuple, n0: int, n1: int, n2: int, label=None, gf=None):
    if gf is None:
        gf = tuple(g[j] for j in f)
    for s in range(1 << n0):
        rep.tick("exists_composite")
        if _image(gf, s) != _image(g, _image(f, s)):
            rep.fail("exists_composite", label if label is not None else s)
        rep.tick("forall_composite")
        if _universal(gf, n2, s) != _universal(g, n2, _universal(f, n1, s)):
            rep.fail("forall_composite", label if label is not None else s)
    for s in range(1 << n2):
        rep.tick("reindex_composite")
        if _preimage(gf, s) != _preimage(f, _preimage(g, s)):
            rep.fail("reindex_composite", label if label is not None else s)


def substitution_composition_coherence(f: FinMap, g: FinMap, composite: FinMap | None = None) -> LawReport:
    """Compare the composite of quantifiers/reindexings with those of ``g . f``.

    ``composite`` overrides the map used as ``g . f`` (for fault injection).
    Witnesses are subsets given as bitmasks over the relevant context.
    """
    if f.target != g.source:
        raise ContextMismatch("f and g are not composable")
    if composite is not None and (composite.source != f.source or composite.target != g.target):
        raise ContextMismatch("composite has the wrong endpoints")
    rep = LawReport("substitution composition")
    gf = _table(composite) if composite is not None else None
    _check_tables(rep, _table(f), _table(g), len(f.source), len(g.source), len(g.target), gf=gf)
    return rep


def all_chains(max_size: int = 4):
    """Every ``(n0, n1, n2, f, g)`` with ``f: n0 -> n1``, ``g: n1 -> n2`` as tables."""
    for n0, n1, n2 in itertools.product(range(max_size + 1), repeat=3):
        for f in itertools.product(range(n1), repeat=n0):
            for g in itertools.product(range(n2), repeat=n1):
                yield n0, n1, n2, f, g


def _operators(n: int, m: int) -> dict:
    """For every map ``n -> m``: its image, universal image and preimage as
    lookup lists indexed by subset bitmask."""
    out = {}
    for t in itertools.product(range(m), repeat=n):
        out[t] = (
            [_image(t, s) for s in range(1 << n)],
            [_universal(t, m, s) for s in range(1 << n)],
            [_preimage(t, s) for s in range(1 << m)],
        )
    return out


def verify_all_chains(max_size: int = 4) -> LawReport:
    """Exhaustive version of the check over all chains, using lookup tables.

    The per-map tables come from the same definitions as the single-chain
    check; only the composite comparison is vectorized.
    """
    rep = LawReport(f"substitution composition, contexts <= {max_size}")
    ops = {(n, m): _operators(n, m) for n in range(max_size + 1) for m in range(max_size + 1)}
    for n0, n1, n2 in itertools.product(range(max_size + 1), repeat=3):
        for f, (fe, fa, fp) in ops[(n0, n1)].items():
            for g, (ge, ga, gp) in ops[(n1, n2)].items():
                rep.tick("chains")
                gfe, gfa, gfp = ops[(n0, n2)][tuple(g[j] for j in f)]
                rep.tick("exists_composite", 1 << n0)
                if [ge[x] for x in fe] != gfe:
                    rep.fail("exists_composite", (f, g))
                rep.tick("forall_composite", 1 << n0)
                if [ga[x] for x in fa] != gfa:
                    rep.fail("forall_composite", (f, g))
                rep.tick("reindex_composite", 1 << n2)
                if [fp[x] for x in gp] != gfp:
                    rep.fail("reindex_composite", (f, g))
    return rep
