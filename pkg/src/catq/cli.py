"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
JSON output is deterministic (sorted keys) and carries ``"schema": 1``.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import grothendieck, io
from .adjunction import verify_adjunction
from .coherence import beck, pseudolimit
from .errors import CatqError, ValidationError
from .fincat import check_category, check_functor, check_natural
from .presheaf import check_presheaf, extend_presheaf, lan, ran, verify_kan_adjunctions
from .report import LawReport, _jsonable
from .setlogic import exists, forall
from .slice import Subobject, exists_f_subobject, forall_f_subobject, projection_map
from .suites import SUITES, CheckReport, RunConfig, run_suite, to_check_report

SCHEMA = 1


def _parse_caps(items) -> dict:
    caps = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--cap expects module=n, got {item!r}")
        try:
            caps[name] = int(value)
        except ValueError:
            raise ValidationError(f"--cap {name}: {value!r} is not an integer") from None
    return caps


def _config(args) -> RunConfig:
    suites = tuple(s for s in (args.suite or "").split(",") if s) or tuple(SUITES)
    return RunConfig(_parse_caps(args.cap), seed=args.seed, suites=suites, format=args.format, timings=args.timings)


def _input_path(args):
    path = args.input or args.path
    if path is None:
        raise ValidationError("no input file (use --in PATH)")
    return path


def _emit(args, command: str, reports: list, extra: dict | None = None) -> int:
    reports = sorted(reports, key=lambda r: r.suite)
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": command, "reports": [r.as_dict(args.timings) for r in reports]}
        doc.update(extra or {})
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        for key, value in (extra or {}).items():
            print(f"{key}: {value}")
        for r in reports:
            checks = sum(r.stats.values())
            line = f"{r.suite}: {r.status} ({checks} checks)"
            if args.timings and r.duration_ms is not None:
                line += f" [{r.duration_ms:.1f} ms]"
            print(line)
            for w in r.witnesses:
                print("  " + json.dumps(w, sort_keys=True, ensure_ascii=False))
    if any(r.status == "error" for r in reports):
        return 2
    return 1 if any(r.status == "fail" for r in reports) else 0


def _timed(name: str, fn) -> CheckReport:
    start = time.perf_counter()
    rep = fn()
    return to_check_report(name, rep, (time.perf_counter() - start) * 1000)


# -- check --------------------------------------------------------------------


def _check_category(path):
    c = io.parse_model(path, "category")
    return [_timed("category", lambda: check_category(c))], None


def _check_functor(path):
    F = io.parse_model(path, "functor")

    def run():
        rep = LawReport("functor")
        rep.absorb(check_category(F.source), "source.")
        rep.absorb(check_category(F.target), "target.")
        return rep.absorb(check_functor(F))

    return [_timed("functor", run)], None


def _check_natural(path):
    t = io.parse_model(path, "natural")

    def run():
        rep = LawReport("natural")
        rep.absorb(check_functor(t.source_functor), "source.")
        rep.absorb(check_functor(t.target_functor), "target.")
        return rep.absorb(check_natural(t))

    return [_timed("natural", run)], None


def _check_adjunction(path):
    adj = io.parse_model(path, "adjunction")
    return [_timed("adjunction", lambda: verify_adjunction(adj))], None


def _check_beck(path):
    sq, phi = io.parse_model(path, "square")
    return [_timed("beck-chevalley", lambda: beck.square_report(sq, None if phi is None else [phi]))], None


CHECKS = {
    "category": _check_category,
    "functor": _check_functor,
    "natural": _check_natural,
    "adjunction": _check_adjunction,
    "beck-chevalley": _check_beck,
}


def cmd_check(args) -> int:
    if args.what == "suite":
        reports, _ = run_suite(_config(args))
        return _emit(args, "check suite", reports)
    path = args.square if args.what == "beck-chevalley" and args.square else _input_path(args)
    reports, extra = CHECKS[args.what](path)
    return _emit(args, f"check {args.what}", reports, extra)


# -- quantify -------------------------------------------------------------------


def cmd_quantify(args) -> int:
    path = _input_path(args)
    data = io.load_json(path)
    kind = io.infer_kind(data)
    if args.model == "set":
        phi = io.parse_model(path, "predicate")
        result = forall(phi) if args.op == "forall" else exists(phi)
        members = result.sorted()
        shown = repr(result)
    else:
        if kind == "predicate":
            phi = io.parse_model(path, "predicate")
            f = projection_map(phi.over.base, phi.over.fiber)
            sub = Subobject(f.source, phi.members)
        elif kind == "map":
            f = io.parse_model(path, "map")
            if "phi" not in data:
                raise ValidationError(f"{path}: phi: missing subobject of the domain")
            keys = {str(x): x for x in f.source.elements}
            chosen = set()
            for x in data["phi"]:
                x = io._atom(x)
                if x not in f.source.index and str(x) not in keys:
                    raise ValidationError(f"{path}: phi: {x!r} is not in the domain")
                chosen.add(x if x in f.source.index else keys[str(x)])
            sub = Subobject(f.source, chosen)
        else:
            raise ValidationError(f"{path}: slice quantification needs a predicate or map file")
        res = forall_f_subobject(f, sub) if args.op == "forall" else exists_f_subobject(f, sub)
        members = [x for x in f.target.elements if x in res.members]
        shown = "{" + ", ".join(map(str, members)) + "}"
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": "quantify", "op": args.op, "model": args.model, "result": _jsonable(members)}
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(shown)
    return 0


# -- kan ---------------------------------------------------------------------------


def cmd_kan(args) -> int:
    gamma, a, phi = io.parse_model(_input_path(args), "kan")
    reports = [
        _timed("presheaf.gamma", lambda: check_presheaf(gamma)),
        _timed("presheaf.a", lambda: check_presheaf(a)),
    ]
    if any(r.status != "pass" for r in reports):
        return _emit(args, "kan", reports)
    extra = {}
    if phi is not None:
        _, pi = extend_presheaf(gamma, a)
        extra = {"lan": repr(lan(phi, pi)), "ran": repr(ran(phi, pi))}
    reports.append(_timed("kan-adjunctions", lambda: verify_kan_adjunctions(gamma, a)))
    return _emit(args, "kan", reports, extra)


# -- groth build ---------------------------------------------------------------------


def cmd_groth(args) -> int:
    m = io.parse_model(_input_path(args), "indexed")
    model_rep = grothendieck.check_indexed_model(m)
    if not model_rep.ok:
        return _emit(args, "groth build", [to_check_report("indexed-model", model_rep)])
    t = grothendieck.build_total(m)
    reports = [
        to_check_report("indexed-model", model_rep),
        _timed("total", lambda: grothendieck.check_total(t)),
        _timed("cartesian-lifts", lambda: grothendieck.check_cartesian_lifts(t, m)),
        _timed("fiber-recovery", lambda: grothendieck.check_fiber_recovery(t, m)),
    ]
    extra = {"objects": len(t.category.objects), "morphisms": len(t.category.morphisms)}
    return _emit(args, "groth build", reports, extra)


# -- pseudolimit -------------------------------------------------------------------


def cmd_pseudolimit(args) -> int:
    d = io.parse_model(_input_path(args), "diagram")
    pl = pseudolimit.pseudo_limit(d)
    reports = [_timed("pseudolimit", lambda: pseudolimit.check_pseudo_limit(pl))]
    reports.append(_timed("universal", lambda: pseudolimit.verify_pseudo_universal(pl, pseudolimit.limit_cone(pl))))
    extra = {"objects": len(pl.category.objects), "morphisms": len(pl.category.morphisms)}
    return _emit(args, "pseudolimit", reports, extra)


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="input model file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", action="append", metavar="MODULE=N", help="override a size cap (repeatable)")
    common.add_argument("--suite", metavar="NAME[,NAME...]", help="suites to run (default: all)")
    common.add_argument("--timings", action="store_true", help="include durations (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="catq", description="Exhaustive checks for finite categorical models.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="check a model file or run suites")
    check.add_argument("what", choices=(*CHECKS, "suite"))
    check.add_argument("path", nargs="?")
    check.add_argument("--square", metavar="PATH", help="square file for beck-chevalley")
    check.set_defaults(func=cmd_check)

    q = sub.add_parser("quantify", parents=[common], help="compute a quantifier")
    q.add_argument("path", nargs="?")
    q.add_argument("--op", choices=("forall", "exists"), required=True)
    q.add_argument("--model", choices=("set", "slice"), default="set")
    q.set_defaults(func=cmd_quantify)

    k = sub.add_parser("kan", parents=[common], help="Kan extensions along a presheaf projection")
    k.add_argument("path", nargs="?")
    k.set_defaults(func=cmd_kan)

    g = sub.add_parser("groth", help="Grothendieck construction")
    gsub = g.add_subparsers(dest="action", required=True)
    gb = gsub.add_parser("build", parents=[common], help="build and check the total category")
    gb.add_argument("path", nargs="?")
    gb.set_defaults(func=cmd_groth)

    p = sub.add_parser("pseudolimit", parents=[common], help="build and check a pseudo-limit")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_pseudolimit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except CatqError as e:
        print(f"catq: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
