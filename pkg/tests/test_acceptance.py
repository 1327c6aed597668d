"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line
that is printed at the end of the pytest run."""

import os
import random
import statistics
import time
from pathlib import Path

import pytest

import oracles
import wio_fixtures
from conftest import RESULTS, graph, term
from wiomatch.alignment import evaluate, read_alignment
from wiomatch.benchmark import run_twin, sample_seeds, seed_report, seeds_for_f1, twin_task
from wiomatch.circuit import ConductanceGraph, extract_subgraph, solve_circuit
from wiomatch.ontology import build_graph, enrich_graph, expand_containers, graph_from_triples, load_ontology, refine_graph
from wiomatch.propagation import PairSpace, build_pcg, update_pcg
from wiomatch.rdf import Triple
from wiomatch.synthetic import generate_ontology
from wiomatch.wio import detect_wio


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def random_network(rng, max_vertices, max_edges):
    n = rng.randint(2, max_vertices)
    edges = []
    for _ in range(rng.randint(1, max_edges)):
        u, v = rng.sample(range(n), 2)
        edges.append((u, v, rng.uniform(0.01, 1.0)))
    ts = [Triple(term(f"v{u}"), term(f"p{i}"), term(f"v{v}")) for i, (u, v, _) in enumerate(edges)]
    return ts, [c for _, _, c in edges]


# -- 1 ---------------------------------------------------------------------------------------


def test_criterion_1_circuit_correctness():
    rng = random.Random(101)
    t0 = time.perf_counter()
    worst_kcl = 0.0
    ohm_ok = bounds_ok = True
    for _ in range(100):
        ts, w = random_network(rng, 50, 120)
        sol = solve_circuit(ConductanceGraph(ts, w, lam=rng.uniform(0.1, 1.0)), ts[0].s)
        worst_kcl = max([worst_kcl] + [abs(r) for r in sol.kirchhoff_residuals().values()])
        for e, cur in zip(sol.edges, sol.currents):
            ohm_ok &= cur == e.conductance * (sol.voltages[e.u] - sol.voltages[e.v])
        bounds_ok &= bool(sol.voltages.min() >= 0 and sol.voltages.max() <= 1)
    elapsed = time.perf_counter() - t0
    ok = worst_kcl <= 1e-9 and ohm_ok and bounds_ok and elapsed < 5
    record(1, ok, f"max KCL residual={worst_kcl:.2e} ohm={ohm_ok} bounds={bounds_ok} time={elapsed:.2f}s")
    assert ok


# -- 2 ---------------------------------------------------------------------------------------


def test_criterion_2_subgraph_oracle():
    rng = random.Random(202)
    t0 = time.perf_counter()
    worst = 1.0
    for _ in range(200):
        ts, w = random_network(rng, 7, 8)
        ts = list(dict.fromkeys(ts))
        cg = ConductanceGraph(ts, w[: len(ts)])
        source = ts[0].s
        k = rng.randint(1, 4)
        sub = extract_subgraph(cg, source, k)
        index = {r: i for i, r in enumerate(cg.vertices)}
        edges = [(index[t.s], index[t.o], c) for t, c in zip(cg.triples, cg.w)]
        volts, sink, _ = oracles.dense_solve(len(cg.vertices), edges, index[source], cg.lam)
        dag, out = oracles.downhill_edges(len(cg.vertices), edges, volts, sink)
        best = oracles.best_captured_flow(index[source], out[index[source]], dag, k)
        if best > 1e-15:
            worst = min(worst, sub.captured_flow / best)
    elapsed = time.perf_counter() - t0
    ok = worst >= 0.8 and elapsed < 30
    record(2, ok, f"worst greedy/optimum ratio={worst:.4f} time={elapsed:.2f}s")
    assert ok


# -- 3 ---------------------------------------------------------------------------------------


def test_criterion_3_incremental_pcg():
    rng = random.Random(303)
    names_a, names_b = [f"a{i}" for i in range(6)], [f"b{i}" for i in range(6)]
    preds = ["p", "q", "r", "rdfs:subClassOf", "rdf:type"]
    t0 = time.perf_counter()
    mismatches = steps = 0
    for _ in range(50):
        A = [Triple(term(rng.choice(names_a)), term(rng.choice(preds)), term(rng.choice(names_a + ["owl:Thing"]))) for _ in range(15)]
        B = [Triple(term(rng.choice(names_b)), term(rng.choice(preds)), term(rng.choice(names_b + ["owl:Thing"]))) for _ in range(15)]
        keys = [(term(a), term(b)) for a in names_a + ["p", "q", "r"] for b in names_b + ["p", "q", "r"]]
        space = PairSpace(A, B)
        sims = {k: rng.choice([0.0, 0.004, 0.2, 1.0]) for k in rng.sample(keys, 20)}
        pcg = build_pcg(space, sims, 0.005)
        for _ in range(6):
            new = dict(sims)
            for k in rng.sample(keys, 8):
                new[k] = rng.choice([0.0, 0.003, 0.005, 0.006, 0.5])
            pcg = update_pcg(pcg, sims, new)
            mismatches += pcg.signature() != build_pcg(space, new, 0.005).signature()
            steps += 1
            sims = new
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10
    record(3, ok, f"{steps} updates, {mismatches} mismatches, time={elapsed:.2f}s")
    assert ok


# -- 4 to 7: twin benchmark ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def bench():
    task = twin_task(0)
    seeds = sample_seeds(task.truth, 0.2, 0)
    return task, seeds


def test_criterion_4_twin_recovery(bench):
    t0 = time.perf_counter()
    task, seeds = bench
    report, _ = run_twin(task, seeds, "S5")
    elapsed = time.perf_counter() - t0
    ok = report.recall >= 0.8 and report.precision >= 0.9 and elapsed < 60
    record(4, ok, f"P={report.precision:.3f} R={report.recall:.3f} F1={report.f1:.3f} "
                  f"({len(task.truth)} pairs, {len(seeds.credible)} seeds) time={elapsed:.2f}s")
    assert ok


def test_criterion_5_propagation_uplift(bench):
    task, seeds = bench
    before = seed_report(seeds, task.truth).f1
    after = run_twin(task, seeds, "S5")[0].f1
    ok = after - before >= 0.15
    record(5, ok, f"seed F1={before:.3f} S5 F1={after:.3f} uplift={after - before:+.3f}")
    assert ok


def test_criterion_6_strategy_ordering():
    scores = {"S2": [], "S3": [], "S5": []}
    for seed in range(5):
        task = twin_task(seed)
        seeds = sample_seeds(task.truth, 0.2, seed)
        for s in scores:
            scores[s].append(run_twin(task, seeds, s)[0].f1)
    mean = {s: statistics.mean(v) for s, v in scores.items()}
    ok = mean["S5"] >= mean["S3"] and mean["S5"] >= mean["S2"]
    record(6, ok, " ".join(f"F1({s})={mean[s]:.3f}" for s in ("S5", "S3", "S2")))
    assert ok


def test_criterion_7_seed_sensitivity(bench):
    task, _ = bench
    grid = (0.2, 0.4, 0.6, 0.8, 1.0)
    finals = [run_twin(task, seeds_for_f1(task.truth, f, 0), "S5")[0].f1 for f in grid]
    ok = all(b >= a - 0.03 for a, b in zip(finals, finals[1:]))
    record(7, ok, "final F1 " + " ".join(f"{f}:{v:.3f}" for f, v in zip(grid, finals)))
    assert ok


# -- 8 ---------------------------------------------------------------------------------------


def test_criterion_8_wio_fixtures():
    rows = []
    ok = True
    for name, (wc, wp, wi, ratio, verdict) in sorted(wio_fixtures.PROFILES.items()):
        g = build_graph(graph_from_triples(wio_fixtures.profile(wc, wp, wi)))
        rep = detect_wio(g, wio_fixtures.lexicon(), 0.25, 0.25)
        ok &= round(rep.ratio, 2) == ratio and rep.is_wio is verdict
        rows.append(f"{name}={rep.ratio:.2f}/{'Yes' if rep.is_wio else 'No'}")
    record(8, ok, " ".join(rows))
    assert ok


# -- 9 ---------------------------------------------------------------------------------------


def test_criterion_9_metric_identities():
    a = [(term(f"x{i}"), term(f"y{i}")) for i in range(9)]
    same = evaluate(a[:3], a[:3])
    mixed = evaluate(a[:2] + a[5:7], a[:2] + a[7:9] + a[4:5])
    empty = evaluate([], a[:3])
    ok = (same.precision, same.recall, same.f1) == (1.0, 1.0, 1.0)
    ok &= (mixed.precision, mixed.recall) == (0.5, 0.4) and abs(mixed.f1 - 4 / 9) < 1e-12
    ok &= (empty.precision, empty.recall, empty.f1) == (0.0, 0.0, 0.0)
    rng = random.Random(909)
    universe = [(term(f"a{i}"), term(f"b{j}")) for i in range(6) for j in range(6)]
    for _ in range(1000):
        q = rng.sample(universe, rng.randint(0, 10))
        t = rng.sample(universe, rng.randint(0, 10))
        r = evaluate(q, t)
        ok &= 0 <= r.precision <= 1 and 0 <= r.recall <= 1
        ok &= min(r.precision, r.recall) - 1e-12 <= r.f1 <= max(r.precision, r.recall) + 1e-12
    record(9, ok, "tagged examples exact, 1000 random Q/T sets within bounds" if ok else "violation found")
    assert ok


# -- 10 --------------------------------------------------------------------------------------


FIXTURE = """
    Band rdf:type owl:Class
    Band rdfs:label "band"
    Band rdfs:comment "a_music_group"
    Trio rdfs:subClassOf Band
    Beatles rdf:type Band
    Beatles member _:m
    _:m rdf:type rdf:Bag
    _:m rdf:_1 John
    _:m rdf:_2 Paul
    member rdfs:domain Band
    member rdf:type owl:SymmetricProperty
    leads rdfs:subPropertyOf member
"""


def test_criterion_10_processing_sizes():
    sizes = []
    ok = True
    samples = [graph(FIXTURE)] + [generate_ontology(s, 10, 6).graph for s in range(5)]
    for g in samples:
        p1 = expand_containers(g)
        p2 = enrich_graph(p1)
        p3 = refine_graph(p2)
        ok &= len(p2) >= len(p1) and len(p3) <= len(p2)
        sizes.append((len(g), len(p1), len(p2), len(p3)))
    ok &= sizes[0][1] < sizes[0][0] and sizes[0][2] > sizes[0][1] and sizes[0][3] < sizes[0][2]
    record(10, ok, f"fixture sizes raw/P1/P2/P3={'/'.join(map(str, sizes[0]))}; {len(samples) - 1} synthetic ontologies checked")
    assert ok


# -- 11 --------------------------------------------------------------------------------------


def test_criterion_11_oaei():
    root = os.environ.get("WIOMATCH_OAEI_DIR")
    if not root or not Path(root, "101", "onto.nt").exists():
        RESULTS[11] = "criterion 11: SKIP  no OAEI benchmark data (set WIOMATCH_OAEI_DIR)"
        pytest.skip("OAEI benchmark data not supplied")
    from wiomatch.config import RunConfig
    from wiomatch.pipeline import match_graphs

    base = load_ontology(Path(root, "101", "onto.nt"))

    def group(lo, hi):
        f1 = []
        for d in sorted(Path(root).iterdir()):
            if d.name[:3].isdigit() and lo <= int(d.name[:3]) <= hi and (d / "onto.nt").exists():
                ref = read_alignment(d / "refalign.tsv")
                f1.append(match_graphs(base, load_ontology(d / "onto.nt"), RunConfig(), reference=ref).evaluation.f1)
        return statistics.mean(f1) if f1 else float("nan")

    g1, g2 = group(201, 210), group(248, 266)
    ok = g1 >= 0.90 and g2 >= 0.70
    record(11, ok, f"201-210 F1={g1:.3f} 248-266 F1={g2:.3f}")
    assert ok
