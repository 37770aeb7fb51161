"""JSON model files.

Every file is a JSON object.  The kind is taken from an optional ``"kind"``
field or inferred from the keys.  Wherever a category, functor or presheaf is
expected, either an inline object or a path (relative to the referring file)
may be given.  JSON arrays used as atoms become tuples; object keys are
matched against ids by their string form, so ``{"0": ...}`` names object 0.
"""
from __future__ import annotations

import json
from pathlib import Path

from .adjunction import Adjunction
from .coherence.beck import PullbackSquare
from .coherence.pseudolimit import PseudoDiagram
from .errors import CatqError, ParseError, ValidationError
from .fincat import FinCategory, FinFunctor, Morphism, NatTransform, compose_functors, identity_functor
from .grothendieck import IndexedModel
from .presheaf import Presheaf, SubPresheaf, extend_presheaf
from .setlogic import Context, ExtendedContext, Predicate
from .slice import FamilyOver, FinMap, Subobject

KINDS = (
    "category",
    "functor",
    "natural",
    "adjunction",
    "presheaf",
    "predicate",
    "family",
    "map",
    "indexed",
    "square",
    "diagram",
    "kan",
)


def _atom(x):
    if isinstance(x, list):
        return tuple(_atom(v) for v in x)
    return x


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"{path}: cannot read file: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be a JSON object")
    return data


def infer_kind(data: dict) -> str:
    if "kind" in data:
        if data["kind"] not in KINDS:
            raise ValidationError(f"kind: unknown kind {data['kind']!r}")
        return data["kind"]
    keys = set(data)
    rules = (
        ({"left", "right", "unit", "counit"}, "adjunction"),
        ({"source", "target", "components"}, "natural"),
        ({"source", "target", "objects"}, "functor"),
        ({"objects", "morphisms"}, "category"),
        ({"fibers", "reindex"}, "indexed"),
        ({"shape", "nodes"}, "diagram"),
        ({"g", "f", "g_prime", "f_prime"}, "square"),
        ({"base", "sets", "actions"}, "presheaf"),
        ({"base", "total", "display"}, "family"),
        ({"from", "to", "map"}, "map"),
        ({"gamma", "a", "phi"}, "predicate"),
    )
    for need, kind in rules:
        if need <= keys:
            return kind
    raise ValidationError(f"cannot tell what kind of model has keys {sorted(keys)}")


class _Loader:
    def __init__(self, path):
        self.path = Path(path)
        self.base_dir = self.path.parent

    def err(self, field: str, msg: str):
        return ValidationError(f"{self.path}: {field}: {msg}")

    def sub(self, ref, field: str, parse):
        if isinstance(ref, str):
            target = self.base_dir / ref
            return parse(_Loader(target), load_json(target))
        if isinstance(ref, dict):
            return parse(self, ref)
        raise self.err(field, "expected an inline object or a file path")

    def need(self, data: dict, key: str):
        if key not in data:
            raise self.err(key, "missing")
        return data[key]

    # -- resolving ids given as JSON keys -------------------------------------

    @staticmethod
    def keyed(ids) -> dict:
        return {str(x): x for x in ids}

    def resolve(self, table: dict, key, field: str):
        if key in table.values():
            return key
        k = str(key)
        if k in table:
            return table[k]
        raise self.err(field, f"unknown id {key!r}")

    # -- kinds ------------------------------------------------------------------

    def category(self, data: dict) -> FinCategory:
        objects = [_atom(x) for x in self.need(data, "objects")]
        if not isinstance(self.need(data, "morphisms"), list):
            raise self.err("morphisms", "expected a list")
        morphisms = []
        for i, m in enumerate(data["morphisms"]):
            if not isinstance(m, dict) or not {"id", "src", "tgt"} <= set(m):
                raise self.err(f"morphisms[{i}]", "needs id, src and tgt")
            morphisms.append(Morphism(_atom(m["id"]), _atom(m["src"]), _atom(m["tgt"])))
        obs = self.keyed(objects)
        mids = self.keyed(m.id for m in morphisms)
        for i, m in enumerate(morphisms):
            for end in ("src", "tgt"):
                v = getattr(m, end)
                if v not in obs.values():
                    raise self.err(f"morphisms[{i}].{end}", f"unknown object {v!r}")
        identity = {}
        for k, v in self.need(data, "identities").items():
            identity[self.resolve(obs, k, "identities")] = self.resolve(mids, _atom(v), f"identities.{k}")
        for x in objects:
            if x not in identity:
                raise self.err("identities", f"no identity for object {x!r}")
        compose = {}
        src = {m.id: m.src for m in morphisms}
        tgt = {m.id: m.tgt for m in morphisms}
        for i, row in enumerate(self.need(data, "compose")):
            if not isinstance(row, list) or len(row) != 3:
                raise self.err(f"compose[{i}]", "expected [g, f, g.f]")
            g, f, gf = (self.resolve(mids, _atom(v), f"compose[{i}]") for v in row)
            if tgt[f] != src[g]:
                raise self.err(f"compose[{i}]", f"({g!r}, {f!r}) is not a composable pair")
            if (g, f) in compose:
                raise self.err(f"compose[{i}]", f"duplicate entry for ({g!r}, {f!r})")
            compose[(g, f)] = gf
        for f in morphisms:
            for g in morphisms:
                if f.tgt == g.src and (g.id, f.id) not in compose:
                    raise self.err("compose", f"missing entry for the pair ({g.id!r}, {f.id!r})")
        try:
            return FinCategory(tuple(objects), tuple(morphisms), identity, compose, name=data.get("name", ""))
        except CatqError as e:
            raise self.err("category", str(e)) from None

    def _functor_tables(self, data: dict, c: FinCategory, d: FinCategory, field: str) -> tuple:
        c_obs, d_obs = self.keyed(c.objects), self.keyed(d.objects)
        c_m, d_m = self.keyed(m.id for m in c.morphisms), self.keyed(m.id for m in d.morphisms)
        om = {
            self.resolve(c_obs, k, f"{field}objects"): self.resolve(d_obs, _atom(v), f"{field}objects.{k}")
            for k, v in self.need(data, "objects").items()
        }
        mm = {
            self.resolve(c_m, k, f"{field}morphisms"): self.resolve(d_m, _atom(v), f"{field}morphisms.{k}")
            for k, v in self.need(data, "morphisms").items()
        }
        for x in c.objects:
            if x not in om:
                raise self.err(f"{field}objects", f"no image for object {x!r}")
        for m in c.morphisms:
            if m.id not in mm:
                raise self.err(f"{field}morphisms", f"no image for morphism {m.id!r}")
        return om, mm

    def functor(self, data: dict) -> FinFunctor:
        c = self.sub(self.need(data, "source"), "source", _Loader.category)
        d = self.sub(self.need(data, "target"), "target", _Loader.category)
        om, mm = self._functor_tables(data, c, d, "")
        return FinFunctor(c, d, om, mm, name=data.get("name", ""))

    def _components(self, data, key: str, c: FinCategory, d: FinCategory) -> dict:
        c_obs, d_m = self.keyed(c.objects), self.keyed(m.id for m in d.morphisms)
        comps = {
            self.resolve(c_obs, k, key): self.resolve(d_m, _atom(v), f"{key}.{k}")
            for k, v in self.need(data, key).items()
        }
        for x in c.objects:
            if x not in comps:
                raise self.err(key, f"no component at {x!r}")
        return comps

    def natural(self, data: dict) -> NatTransform:
        F = self.sub(self.need(data, "source"), "source", _Loader.functor)
        G = self.sub(self.need(data, "target"), "target", _Loader.functor)
        if F.source != G.source or F.target != G.target:
            raise self.err("target", "functors do not share source and target")
        return NatTransform(F, G, self._components(data, "components", F.source, F.target), name=data.get("name", ""))

    def adjunction(self, data: dict) -> Adjunction:
        F = self.sub(self.need(data, "left"), "left", _Loader.functor)
        G = self.sub(self.need(data, "right"), "right", _Loader.functor)
        if G.source != F.target or G.target != F.source:
            raise self.err("right", "right adjoint must go back along the left adjoint")
        c, d = F.source, F.target
        unit = NatTransform(identity_functor(c), compose_functors(G, F), self._components(data, "unit", c, c), "unit")
        counit = NatTransform(compose_functors(F, G), identity_functor(d), self._components(data, "counit", d, d), "counit")
        return Adjunction(F, G, unit, counit, name=data.get("name", "adjunction"))

    def presheaf(self, data: dict) -> Presheaf:
        base = self.sub(self.need(data, "base"), "base", _Loader.category)
        obs = self.keyed(base.objects)
        sets = {}
        for k, v in self.need(data, "sets").items():
            sets[self.resolve(obs, k, "sets")] = tuple(_atom(e) for e in v)
        for c in base.objects:
            if c not in sets:
                raise self.err("sets", f"no set at object {c!r}")
        mids = self.keyed(m.id for m in base.morphisms)
        actions = {}
        for k, table in self.need(data, "actions").items():
            m = self.resolve(mids, k, "actions")
            src_set, tgt_set = self.keyed(sets[base.tgt[m]]), self.keyed(sets[base.src[m]])
            actions[m] = {
                self.resolve(src_set, e, f"actions.{k}"): self.resolve(tgt_set, _atom(v), f"actions.{k}.{e}")
                for e, v in table.items()
            }
        for m in base.morphisms:
            if m.id not in actions:
                if m.id in base.identities:
                    actions[m.id] = {x: x for x in sets[m.src]}
                else:
                    raise self.err("actions", f"no action for morphism {m.id!r}")
            missing = [x for x in sets[m.tgt] if x not in actions[m.id]]
            if missing:
                raise self.err(f"actions.{m.id}", f"undefined on {missing[0]!r}")
        return Presheaf(base, sets, actions)

    def predicate(self, data: dict) -> Predicate:
        gamma = Context(tuple(_atom(x) for x in self.need(data, "gamma")))
        a = Context(tuple(_atom(x) for x in self.need(data, "a")))
        ext = ExtendedContext(gamma, a)
        members = set()
        for i, pair in enumerate(self.need(data, "phi")):
            pair = _atom(pair)
            if not isinstance(pair, tuple) or len(pair) != 2:
                raise self.err(f"phi[{i}]", "expected a [gamma, a] pair")
            if pair not in ext.context.index:
                raise self.err(f"phi[{i}]", f"{list(pair)!r} is not in gamma x a")
            members.add(pair)
        return Predicate(ext, frozenset(members))

    def _mapping(self, raw, dom: Context, cod: Context, field: str) -> dict:
        pairs = raw.items() if isinstance(raw, dict) else raw
        d_keys, c_keys = self.keyed(dom.elements), self.keyed(cod.elements)
        out = {}
        try:
            for k, v in pairs:
                out[self.resolve(d_keys, _atom(k), field)] = self.resolve(c_keys, _atom(v), f"{field}.{k}")
        except (TypeError, ValueError):
            raise self.err(field, "expected an object or a list of [from, to] pairs") from None
        for x in dom.elements:
            if x not in out:
                raise self.err(field, f"undefined on {x!r}")
        return out

    def map(self, data: dict) -> FinMap:
        dom = Context(tuple(_atom(x) for x in self.need(data, "from")))
        cod = Context(tuple(_atom(x) for x in self.need(data, "to")))
        return FinMap(dom, cod, self._mapping(self.need(data, "map"), dom, cod, "map"))

    def family(self, data: dict) -> FamilyOver:
        base = Context(tuple(_atom(x) for x in self.need(data, "base")))
        total = Context(tuple(_atom(x) for x in self.need(data, "total")))
        return FamilyOver(base, total, self._mapping(self.need(data, "display"), total, base, "display"))

    def square(self, data: dict):
        """Returns ``(square, phi)``; phi is None unless the file names one."""
        ctx = {k: Context(tuple(_atom(x) for x in self.need(data, k))) for k in ("gamma", "delta", "gamma_prime", "delta_prime")}
        sq = PullbackSquare(
            FinMap(ctx["delta_prime"], ctx["gamma_prime"], self._mapping(self.need(data, "g_prime"), ctx["delta_prime"], ctx["gamma_prime"], "g_prime")),
            FinMap(ctx["delta_prime"], ctx["delta"], self._mapping(self.need(data, "f_prime"), ctx["delta_prime"], ctx["delta"], "f_prime")),
            FinMap(ctx["gamma_prime"], ctx["gamma"], self._mapping(self.need(data, "f"), ctx["gamma_prime"], ctx["gamma"], "f")),
            FinMap(ctx["delta"], ctx["gamma"], self._mapping(self.need(data, "g"), ctx["delta"], ctx["gamma"], "g")),
        )
        phi = None
        if "phi" in data:
            keys = self.keyed(ctx["delta"].elements)
            phi = Predicate(ctx["delta"], frozenset(self.resolve(keys, _atom(x), "phi") for x in data["phi"]))
        return sq, phi

    def indexed(self, data: dict) -> IndexedModel:
        base = self.sub(self.need(data, "base"), "base", _Loader.category)
        obs, mids = self.keyed(base.objects), self.keyed(m.id for m in base.morphisms)
        fibers = {}
        for k, ref in self.need(data, "fibers").items():
            fibers[self.resolve(obs, k, "fibers")] = self.sub(ref, f"fibers.{k}", _Loader.category)
        for c in base.objects:
            if c not in fibers:
                raise self.err("fibers", f"no fiber over {c!r}")
        reindex = {}
        for k, table in self.need(data, "reindex").items():
            f = self.resolve(mids, k, "reindex")
            src, tgt = fibers[base.tgt[f]], fibers[base.src[f]]
            om, mm = self._functor_tables(table, src, tgt, f"reindex.{k}.")
            reindex[f] = FinFunctor(src, tgt, om, mm)
        for m in base.morphisms:
            if m.id not in reindex:
                if m.id in base.identities:
                    reindex[m.id] = identity_functor(fibers[m.src])
                else:
                    raise self.err("reindex", f"no reindexing for morphism {m.id!r}")
        return IndexedModel(base, fibers, reindex)

    def diagram(self, data: dict) -> PseudoDiagram:
        shape = self.sub(self.need(data, "shape"), "shape", _Loader.category)
        obs, mids = self.keyed(shape.objects), self.keyed(m.id for m in shape.morphisms)
        nodes = {}
        for k, ref in self.need(data, "nodes").items():
            nodes[self.resolve(obs, k, "nodes")] = self.sub(ref, f"nodes.{k}", _Loader.category)
        for j in shape.objects:
            if j not in nodes:
                raise self.err("nodes", f"no category at node {j!r}")
        edges = {}
        for k, table in data.get("edges", {}).items():
            e = self.resolve(mids, k, "edges")
            src, tgt = nodes[shape.src[e]], nodes[shape.tgt[e]]
            om, mm = self._functor_tables(table, src, tgt, f"edges.{k}.")
            edges[e] = FinFunctor(src, tgt, om, mm)
        for m in shape.morphisms:
            if m.id not in shape.identities and m.id not in edges:
                raise self.err("edges", f"no functor on edge {m.id!r}")
        comparisons = {}
        for i, row in enumerate(data.get("comparisons", [])):
            if not isinstance(row, list) or len(row) != 3:
                raise self.err(f"comparisons[{i}]", "expected [g, f, {object: morphism}]")
            g = self.resolve(mids, _atom(row[0]), f"comparisons[{i}]")
            f = self.resolve(mids, _atom(row[1]), f"comparisons[{i}]")
            if (g, f) not in shape.compose:
                raise self.err(f"comparisons[{i}]", "edges are not composable")
            gf = shape.compose[(g, f)]
            lhs = compose_functors(edges.get(g) or identity_functor(nodes[shape.src[g]]), edges.get(f) or identity_functor(nodes[shape.src[f]]))
            rhs = edges.get(gf) or identity_functor(nodes[shape.src[gf]])
            comps = self._components({"components": row[2]}, "components", lhs.source, lhs.target)
            comparisons[(g, f)] = NatTransform(lhs, rhs, comps)
        return PseudoDiagram(shape, nodes, edges, comparisons)

    def kan(self, data: dict):
        """Returns ``(gamma, a, phi)``; phi is a sub-presheaf of Gamma x A or None."""
        gamma = self.sub(self.need(data, "gamma"), "gamma", _Loader.presheaf)
        a = self.sub(self.need(data, "a"), "a", _Loader.presheaf)
        if gamma.base != a.base:
            raise self.err("a", "presheaves live over different bases")
        phi = None
        if "phi" in data:
            prod, _ = extend_presheaf(gamma, a)
            obs = self.keyed(prod.base.objects)
            members = {}
            for k, elems in data["phi"].items():
                c = self.resolve(obs, k, "phi")
                allowed = set(prod.sets[c])
                picked = set()
                for e in elems:
                    e = _atom(e)
                    if e not in allowed:
                        raise self.err(f"phi.{k}", f"{e!r} is not an element of Gamma x A")
                    picked.add(e)
                members[c] = frozenset(picked)
            phi = SubPresheaf(prod, members)
        return gamma, a, phi


def parse_model(path, kind: str | None = None):
    """Load and validate a model file; raises ParseError or ValidationError."""
    data = load_json(path)
    found = infer_kind(data)
    if kind is not None and found != kind:
        raise ValidationError(f"{path}: expected a {kind} model, found {found}")
    loader = _Loader(path)
    try:
        return getattr(loader, found)(data)
    except (ParseError, ValidationError):
        raise
    except CatqError as e:
        raise ValidationError(f"{path}: {found}: {e}") from None
    except (AttributeError, TypeError, KeyError) as e:
        raise ValidationError(f"{path}: {found}: malformed structure ({type(e).__name__}: {e})") from None


def subobject_of(f: FinMap, members) -> Subobject:
    return Subobject(f.source, frozenset(members))
