"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``CRITERION <n>: PASS|FAIL`` line with a short
summary before asserting, so ``pytest -s`` or the tee'd log shows the
verdicts at a glance.
"""

from __future__ import annotations

import itertools
import random
import subprocess
import sys
import time

import pytest

from epdual.corpus import bench_csv, run_suite, standard_corpus
from epdual.digraph import Tournament, strong_components, transitive_subtournament
from epdual.embed import IMMERSION
from epdual.generators import generate
from epdual.hit import (PackingDetected, hit_strongly_immersion, hit_strongly_topminor,
                        hit_strongly_vrtx_immersion, hit_weakly_immersion, hit_weakly_topminor)
from epdual.layouts import cutwidth_exact, pathwidth_search
from epdual.oracle import (MAX_PACKING_M, MAX_PACKING_N, brute_cutwidth, brute_packing_at_least,
                           brute_pathwidth, component_inside_one_host_component,
                           last_vertex_has_backward_arc, naive_is_free)
from epdual.pack import PartitionedConflictGraph, slice_success_rate, transversal_independent_sets

from _instances import c3, random_tournament

SMALL_N = 7
SMALL_M = 4


def report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def corpus_run():
    corpus = standard_corpus()
    start = time.perf_counter()
    results = list(run_suite(corpus))
    return corpus, results, time.perf_counter() - start


# ---------------------------------------------------------------------------

def test_criterion_1_certificates(capsys, corpus_run):
    corpus, results, elapsed = corpus_run
    start = time.perf_counter()
    bad = [r.instance for r in results if r.problems]
    small = [r for r in results
             if r.instance.n <= SMALL_N and r.instance.pattern_digraph().m <= SMALL_M]
    assert SMALL_N <= MAX_PACKING_N and SMALL_M <= MAX_PACKING_M
    wrong = []
    for r in small:
        host = r.instance.host()
        pattern = r.instance.pattern_digraph()
        out = r.outcome
        if out.hitting is not None:
            if not naive_is_free(out.hitting.residual(host), pattern, r.instance.mode):
                wrong.append(r.instance)
        else:
            found = brute_packing_at_least(host, pattern, r.instance.mode,
                                           out.packing.disjointness, r.instance.k)
            if found is None:
                wrong.append(r.instance)
    total = elapsed + time.perf_counter() - start
    ok = len(corpus) >= 200 and not bad and not wrong and total < 300
    report(capsys, 1, ok, f"{len(corpus)} instances, {len(bad)} unverified, "
                          f"{len(small)} oracle-checked with {len(wrong)} disagreements, "
                          f"{total:.1f}s")
    assert ok, (bad, wrong)


def test_criterion_2_layout_oracles(capsys):
    start = time.perf_counter()
    mismatches = []
    checked_cw = checked_pw = 0
    for n in range(1, 9):
        for seed in range(6):
            for model in ("uniform", "blocks:3", "low-cutwidth:2"):
                t = generate(n, 1000 * n + seed, model)
                if cutwidth_exact(t)[1] != brute_cutwidth(t).value:
                    mismatches.append(("cutwidth", n, seed, model))
                checked_cw += 1
                if n <= 6:
                    _, width, exact = pathwidth_search(t)
                    if not exact or width != brute_pathwidth(t).value:
                        mismatches.append(("pathwidth", n, seed, model))
                    checked_pw += 1
    triangle = (cutwidth_exact(c3())[1], pathwidth_search(c3())[1])
    elapsed = time.perf_counter() - start
    ok = not mismatches and triangle == (1, 2) and elapsed < 60
    report(capsys, 2, ok, f"{checked_cw} cutwidth and {checked_pw} pathwidth comparisons, "
                          f"triangle widths {triangle}, {len(mismatches)} mismatches, "
                          f"{elapsed:.1f}s")
    assert ok, mismatches


def test_criterion_3_size_bounds(capsys, corpus_run):
    corpus, results, _ = corpus_run
    violations = []
    checked = {"dispatcher": 0, "strongly-immersion": 0, "strongly-vrtx": 0,
               "strongly-topminor": 0, "weakly-immersion": 0, "weakly-topminor": 0}
    for r in results:
        checked["dispatcher"] += 1
        if not r.outcome.report.holds:
            violations.append(("dispatcher", r.instance))
    seen = set()
    for inst in corpus:
        pattern = inst.pattern_digraph()
        key = (inst.n, inst.seed, inst.model, inst.pattern, inst.k)
        if key in seen or pattern.arc_count == 0 or pattern.is_acyclic():
            continue
        seen.add(key)
        host = inst.host()
        if strong_components(pattern).h == 1:
            runs = (("strongly-immersion", lambda: hit_strongly_immersion(host, pattern, inst.k)),
                    ("strongly-vrtx", lambda: hit_strongly_vrtx_immersion(host, pattern, inst.k)),
                    ("strongly-topminor", lambda: hit_strongly_topminor(host, pattern, inst.k)))
        else:
            runs = (("weakly-immersion", lambda: hit_weakly_immersion(host, pattern, inst.k)),
                    ("weakly-topminor", lambda: hit_weakly_topminor(host, pattern, inst.k)))
        for name, fn in runs:
            try:
                out = fn()
            except PackingDetected:
                continue
            checked[name] += 1
            if not out.report.holds:
                violations.append((name, inst))
    ok = not violations and all(checked.values())
    report(capsys, 3, ok, ", ".join(f"{k} {v}" for k, v in checked.items())
           + f"; {len(violations)} over the bound")
    assert ok, violations


def test_criterion_4_transversals(capsys):
    start = time.perf_counter()
    failures = []
    for seed in range(1000):
        rng = random.Random(seed)
        h = rng.randint(1, 4)
        s = rng.choice((2, 4, 6, 8))
        parts = [tuple(range(i * s, (i + 1) * s)) for i in range(h)]
        edges = []
        for i, j in itertools.combinations(range(h), 2):
            pairs = list(itertools.product(parts[i], parts[j]))
            edges += rng.sample(pairs, rng.randint(0, (s * s) // (h * h)))
        g = PartitionedConflictGraph.build(parts, edges)
        sets = transversal_independent_sets(g, seed)
        used = [v for sl in sets for v in sl]
        if (2 * len(sets) < s or len(used) != len(set(used))
                or any(not g.is_independent(sl) or [g.part_of(v) for v in sl] != list(range(h))
                       for sl in sets)):
            failures.append(seed)
    matching = PartitionedConflictGraph.build([(0, 1, 2, 3), (4, 5, 6, 7)],
                                              [(i, 4 + i) for i in range(4)])
    _, fraction = slice_success_rate(matching, trials=10_000, seed=0)
    elapsed = time.perf_counter() - start
    ok = not failures and fraction >= 0.45 and elapsed < 30
    report(capsys, 4, ok, f"1000 graphs, {len(failures)} failures, matching independent-slice "
                          f"fraction {fraction:.3f}, {elapsed:.1f}s")
    assert ok, failures


def test_criterion_5_observations(capsys, corpus_run):
    _, results, _ = corpus_run
    models = strong = comp = 0
    failures = []
    for r in results:
        if r.outcome.packing is None or r.instance.mode != IMMERSION:
            continue
        host = r.instance.host()
        pattern = r.instance.pattern_digraph()
        dec = strong_components(pattern)
        rng = random.Random(r.instance.seed)
        for model in r.outcome.packing.models:
            models += 1
            for c in dec.components:
                comp += 1
                if not component_inside_one_host_component(host, model, c):
                    failures.append(("comp-map", r.instance))
            for ci in dec.nontrivial():
                for _ in range(5):
                    order = list(host.vertices)
                    rng.shuffle(order)
                    strong += 1
                    if not last_vertex_has_backward_arc(model, dec.components[ci], order):
                        failures.append(("strong", r.instance))
    subtournaments = 0
    for m in range(1, 5):
        for seed in range(60):
            n = 2 ** m + seed % 5
            t = random_tournament(n, seed) if seed % 3 else Tournament.transitive(n)
            seq = transitive_subtournament(t, m)
            subtournaments += 1
            if seq is None or not all(t.has_arc(seq[i], seq[j])
                                      for i in range(m) for j in range(i + 1, m)):
                failures.append(("subtournament", n, seed))
    ok = not failures and models > 0
    report(capsys, 5, ok, f"{models} immersion models, {strong} ordering checks, {comp} "
                          f"component checks, {subtournaments} subtournament searches, "
                          f"{len(failures)} failures")
    assert ok, failures


def test_criterion_6_determinism(capsys, corpus_run):
    corpus, results, _ = corpus_run
    again = list(run_suite(corpus))
    docs_equal = [a.document == b.document for a, b in zip(results, again)]

    def rows(rs):
        return [line.rsplit(",", 1)[0] for line in bench_csv(rs).splitlines()]

    csv_equal = rows(results) == rows(again)
    # a fresh interpreter must agree too, so no state carries over between runs
    script = ("from epdual.corpus import bench_csv, run_suite, standard_corpus\n"
              "print(bench_csv(run_suite(standard_corpus())), end='')")
    fresh = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True,
                           check=True).stdout
    fresh_equal = [line.rsplit(",", 1)[0] for line in fresh.splitlines()] == rows(results)
    ok = all(docs_equal) and csv_equal and fresh_equal
    report(capsys, 6, ok, f"{sum(docs_equal)}/{len(docs_equal)} certificates byte-identical, "
                          f"CSV {'identical' if csv_equal else 'differs'} apart from millis, "
                          f"fresh process {'agrees' if fresh_equal else 'differs'}")
    assert ok
