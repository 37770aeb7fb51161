"""Acceptance criteria, one test each, with their runtime bounds.

Each test prints a single ``criterion N: PASS|FAIL`` line to the terminal
(output capture is bypassed for it) and then asserts.
"""
import itertools
import time

import pytest

from catq.mutation import MUTANTS
from catq.setlogic import Context, Predicate, exists, extend_context, forall, quantify_via_transposes
from catq.suites import RunConfig, run_one


@pytest.fixture
def line(capsys):
    def emit(n: int, title: str, ok: bool, seconds: float, bound, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        limit = f" (< {bound} s)" if bound else ""
        with capsys.disabled():
            print(f"\ncriterion {n}: {status} {title} [{seconds:.2f} s{limit}] {detail}".rstrip())

    return emit


def timed_suites(*names):
    cfg = RunConfig()
    start = time.perf_counter()
    reports = {n: run_one(n, cfg) for n in names}
    return reports, time.perf_counter() - start


def statuses(reports):
    return all(r.status == "pass" for r in reports.values())


def test_criterion_1_worked_example(line):
    start = time.perf_counter()
    ext = extend_context(Context(("1", "2")), Context(("a", "b")))
    phi = Predicate(ext, {("1", "a"), ("1", "b")})
    results = [forall(phi), exists(phi), quantify_via_transposes(phi, "forall"), quantify_via_transposes(phi, "exists")]
    elapsed = time.perf_counter() - start
    ok = all(r.sorted() == ["1"] and repr(r) == "{1}" for r in results) and elapsed < 1
    line(1, "worked example: forall = exists = {1} directly and via transposes", ok, elapsed, 1)
    assert ok


def test_criterion_2_adjunction_suite(line):
    reports, elapsed = timed_suites("quantifiers")
    stats = reports["quantifiers"].stats
    laws = ("triangle_1", "triangle_2", "round_trip_forward", "round_trip_backward", "natural_in_source", "natural_in_target")
    covered = all(stats.get(f"{side}.{law}", 0) > 0 for side in ("forall", "exists") for law in laws)
    ok = statuses(reports) and covered and elapsed < 60
    line(2, "exists -| reindex -| forall for all |G|*|A| <= 9", ok, elapsed, 60)
    assert ok, reports["quantifiers"].witnesses


def test_criterion_3_beck_chevalley(line):
    reports, elapsed = timed_suites("beck-chevalley")
    stats = reports["beck-chevalley"].stats
    ok = (
        statuses(reports)
        and stats["squares"] >= 100
        and stats["non_pullback_counterexample"] >= 10
        and elapsed < 120
    )
    detail = f"{stats['squares']} squares, {stats['non_pullback_counterexample']} non-pullbacks"
    line(3, "Beck-Chevalley isomorphism and non-pullback counterexamples", ok, elapsed, 120, detail)
    assert ok, reports["beck-chevalley"].witnesses


def test_criterion_4_kan_degeneration(line):
    reports, elapsed = timed_suites("kan")
    stats = reports["kan"].stats
    ok = statuses(reports) and all(
        stats.get(k, 0) > 0
        for k in ("terminal.lan_is_exists", "terminal.ran_is_forall", "arrow.lan_least", "arrow.ran_greatest")
    ) and elapsed < 120
    line(4, "lan/ran equal set quantifiers (terminal) and least/greatest (arrow)", ok, elapsed, 120)
    assert ok, reports["kan"].witnesses


def test_criterion_5_slice(line):
    reports, elapsed = timed_suites("slice")
    stats = reports["slice"].stats
    ok = statuses(reports) and stats["sigma_round_trip"] > 0 and stats["pi_round_trip"] > 0 and stats[
        "pi_fiber_cardinality"
    ] > 0 and elapsed < 60
    line(5, "Sigma -| pullback -| Pi round trips and Pi fiber cardinality", ok, elapsed, 60)
    assert ok, reports["slice"].witnesses


def test_criterion_6_grothendieck(line):
    reports, elapsed = timed_suites("grothendieck")
    stats = reports["grothendieck"].stats
    ok = statuses(reports) and stats["models"] >= 50 and stats["cartesian.unique_factorization"] > 0 and elapsed < 60
    line(6, "total category, cartesian lifts, fiber recovery", ok, elapsed, 60, f"{stats['models']} models")
    assert ok, reports["grothendieck"].witnesses


def test_criterion_7_coherence(line):
    reports, elapsed = timed_suites("spans", "interchange", "strictify")
    ok = (
        statuses(reports)
        and reports["spans"].stats["pentagon"] > 0
        and reports["spans"].stats["triangle"] > 0
        and reports["interchange"].stats["interchange"] >= 100
        and reports["strictify"].stats["routes.routes_agree"] > 0
        and elapsed < 120
    )
    line(7, "pentagon, triangle, interchange, bracketing routes", ok, elapsed, 120)
    assert ok, {n: r.witnesses for n, r in reports.items()}


def test_criterion_8_pseudolimit(line):
    reports, elapsed = timed_suites("pseudolimit")
    stats = reports["pseudolimit"].stats
    ok = (
        statuses(reports)
        and stats["probes"] >= 20
        and stats["single_node.isomorphism"] > 0
        and stats["product.counts"] > 0
        and stats["universal.mediator_exists"] >= 20
        and elapsed < 60
    )
    line(8, "single node, product, mediators unique up to invertible 2-cell", ok, elapsed, 60, f"{stats['probes']} probes")
    assert ok, reports["pseudolimit"].witnesses


def test_criterion_9_dtt(line):
    reports, elapsed = timed_suites("dtt-substitution")
    chains = sum(n1 ** n0 * n2 ** n1 for n0, n1, n2 in itertools.product(range(5), repeat=3))
    ok = statuses(reports) and reports["dtt-substitution"].stats["chains"] == chains and elapsed < 30
    line(9, "exists/forall/reindex composites on all chains <= 4", ok, elapsed, 30, f"{chains} chains")
    assert ok, reports["dtt-substitution"].witnesses


def test_criterion_10_mutation(line):
    start = time.perf_counter()
    counts = {}
    for suite, make in MUTANTS.items():
        counts[suite] = sum(1 for m in make() if m.detected and m.report.witness() is not None)
    elapsed = time.perf_counter() - start
    ok = all(n >= 5 for n in counts.values()) and len(counts) == 11
    line(10, "single-fault mutants detected with witnesses", ok, elapsed, None, f"min {min(counts.values())} per suite")
    assert ok, counts
