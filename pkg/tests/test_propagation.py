import math
import re

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import term, triples
from wiomatch.circuit import extract_all
from wiomatch.errors import DomainError, PcgOverflow
from wiomatch.matrix import SimilarityMatrix
from wiomatch.ontology import ElementKind, build_graph
from wiomatch.propagation import (
    PairSpace,
    PropagationConfig,
    apply_penalty,
    build_pcg,
    density_factor,
    normalize_matrix,
    propagate_once,
    run_fixpoint,
    run_fixpoint_detail,
    run_strategy,
    run_strategy_detail,
    sc_admits,
    update_pcg,
)
from wiomatch.rdf import Triple
from wiomatch.sdd import SeedAlignment, compute_seeds
from wiomatch.synthetic import ScrambleSpec, generate_ontology, scramble

THETA = 0.005


def T(line):
    (t,) = triples(line)
    return t


# -- admission --------------------------------------------------------------------------


def test_subclass_statements_with_one_similar_position_are_admitted():
    ti, tj = T("ConferencePaper rdfs:subClassOf Paper"), T("Paper rdfs:subClassOf Document")
    assert sc_admits(ti, tj, {(term("ConferencePaper"), term("Paper")): 0.7}, THETA)
    assert not sc_admits(ti, tj, {}, THETA)


def test_two_primitives_in_a_statement_reject():
    ti, tj = T("PhDStu rdf:type rdfs:Class"), T("Paper rdf:type rdfs:Class")
    assert not sc_admits(ti, tj, {(term("PhDStu"), term("Paper")): 1.0}, THETA)


def test_primitive_mismatch_and_low_values_reject():
    ti, tj = T("a rdfs:subClassOf b"), T("x rdfs:subPropertyOf y")
    assert not sc_admits(ti, tj, {(term("a"), term("x")): 1.0, (term("b"), term("y")): 1.0}, THETA)
    ti, tj = T("a p b"), T("x q y")
    low = {(term("a"), term("x")): THETA, (term("p"), term("q")): 0.001, (term("b"), term("y")): 0.004}
    assert not sc_admits(ti, tj, low, THETA)
    low[(term("b"), term("y"))] = 0.006
    assert not sc_admits(ti, tj, low, THETA)
    low[(term("p"), term("q"))] = 0.5
    assert sc_admits(ti, tj, low, THETA)


def test_literals_count_as_constants():
    ti, tj = T('a p "x"'), T('b q "x"')
    assert sc_admits(ti, tj, {(term("a"), term("b")): 0.5}, THETA)
    assert not sc_admits(T('a p "x"'), T('b q "y"'), {(term("a"), term("b")): 0.5}, THETA)


# -- connectivity graph ----------------------------------------------------------------------


def test_identity_seeds_on_three_statements():
    ts = triples("a p b\nc q d\ne r f")
    sims = {(r, r): 1.0 for t in ts for r in (t.s, t.p, t.o)}
    pcg = build_pcg(PairSpace(ts, ts), sims, THETA)
    assert pcg.pairs == {(t, t) for t in ts}
    assert pcg.generation == 0
    assert all(v == 1 for c in (pcg.f_sp, pcg.f_po, pcg.f_so) for v in c.values())


def test_no_seeds_no_pairs():
    ts = triples("a p b\nc q d")
    assert len(build_pcg(PairSpace(ts, ts), {}, THETA)) == 0


def test_anchor_through_shared_predicate():
    A = triples("a rdfs:subClassOf b\nc rdfs:subClassOf d\nc knows a")
    B = triples("x rdfs:subClassOf y\nz rdfs:subClassOf w")
    sims = {(term("a"), term("x")): 0.9, (term("c"), term("z")): 0.001}
    pcg = build_pcg(PairSpace(A, B), sims, THETA)
    assert pcg.pairs == {(A[0], B[0])}
    want, *_ = oracles.naive_pcg(A, B, sims, THETA)
    assert pcg.pairs == want


def test_overflow():
    ts = triples("a p b\nc p d\ne p f")
    sims = {(x, y): 1.0 for x in map(term, "abcdefp") for y in map(term, "abcdefp")}
    with pytest.raises(PcgOverflow):
        build_pcg(PairSpace(ts, ts), sims, THETA, limit=4)


_names_a = ["a0", "a1", "a2", "a3"]
_names_b = ["b0", "b1", "b2", "b3"]
_preds = ["p", "q", "rdfs:subClassOf", "rdf:type"]
_objs_extra = ["owl:Thing", '"lit"']


def _stmt(names):
    return st.builds(
        lambda s, p, o: Triple(term(s), term(p), term(o)),
        st.sampled_from(names),
        st.sampled_from(_preds),
        st.sampled_from(names + _objs_extra),
    )


def _sims(draw_values):
    keys = [(term(a), term(b)) for a in _names_a + ["p", "q"] for b in _names_b + ["p", "q"]]
    return st.dictionaries(st.sampled_from(keys), draw_values, max_size=14)


_values = st.sampled_from([0.0, 0.001, THETA, 0.2, 0.7, 1.0])


def _counters_equal(pcg, f_sp, f_po, f_so):
    return dict(pcg.f_sp) == dict(f_sp) and dict(pcg.f_po) == dict(f_po) and dict(pcg.f_so) == dict(f_so)


@given(st.lists(_stmt(_names_a), max_size=8), st.lists(_stmt(_names_b), max_size=8), _sims(_values))
@settings(max_examples=150)
def test_build_matches_cross_product(A, B, sims):
    pcg = build_pcg(PairSpace(A, B), sims, THETA)
    pairs, f_sp, f_po, f_so = oracles.naive_pcg(A, B, sims, THETA)
    assert pcg.pairs == pairs
    assert _counters_equal(pcg, f_sp, f_po, f_so)


@given(st.lists(_stmt(_names_a), max_size=8), st.lists(_stmt(_names_b), max_size=8),
       st.lists(_sims(_values), min_size=2, max_size=5))
@settings(max_examples=100)
def test_incremental_update_equals_rebuild(A, B, sequence):
    space = PairSpace(A, B)
    pcg = build_pcg(space, sequence[0], THETA)
    for old, new in zip(sequence, sequence[1:]):
        pcg = update_pcg(pcg, old, new)
        fresh = build_pcg(space, new, THETA)
        assert pcg.signature() == fresh.signature()


def test_update_unchanged_bumps_generation():
    ts = triples("a p b")
    sims = {(term("a"), term("a")): 1.0, (term("b"), term("b")): 1.0}
    pcg = build_pcg(PairSpace(ts, ts), sims, THETA)
    again = update_pcg(pcg, sims, dict(sims))
    assert again.pairs == pcg.pairs and again.generation == 1


# -- one step ------------------------------------------------------------------------------------


def test_single_step_arithmetic():
    A, B = [T("s p o")], [T("x q y")]
    sims = {(term("s"), term("x")): 0.5, (term("p"), term("q")): 1.0, (term("o"), term("y")): 0.4}
    pcg = build_pcg(PairSpace(A, B), sims, THETA)
    raw = propagate_once(pcg, sims, normalize=False)
    assert raw[(term("s"), term("x"))] == pytest.approx(0.9)
    assert raw[(term("p"), term("q"))] == pytest.approx(1.2)
    assert raw[(term("o"), term("y"))] == pytest.approx(0.9)
    norm = propagate_once(pcg, sims)
    assert max(norm.values()) == pytest.approx(1.0)
    assert norm[(term("s"), term("x"))] == pytest.approx(0.75)


def test_zero_factor_leaves_entry_alone():
    A, B = [T("s p o")], [T("x q y")]
    sims = {(term("s"), term("x")): 0.5, (term("p"), term("q")): 1.0}
    pcg = build_pcg(PairSpace(A, B), sims, THETA)
    raw = propagate_once(pcg, sims, normalize=False)
    assert raw[(term("s"), term("x"))] == 0.5
    assert raw[(term("o"), term("y"))] == pytest.approx(0.5)


def test_empty_graph_keeps_matrix():
    sims = SimilarityMatrix({(term("a"), term("b")): 0.3})
    pcg = build_pcg(PairSpace([], []), sims, THETA)
    assert propagate_once(pcg, sims, normalize=False) == sims


@given(st.lists(_stmt(_names_a), max_size=8), st.lists(_stmt(_names_b), max_size=8), _sims(_values),
       st.sets(st.sampled_from([(term(a), term(b)) for a in _names_a for b in _names_b]), max_size=2))
@settings(max_examples=150)
def test_step_matches_naive_summation(A, B, sims, credible):
    sims = dict(sims)
    for key in credible:
        sims[key] = 1.0
    pcg = build_pcg(PairSpace(A, B), sims, THETA)
    got = propagate_once(pcg, sims, credible, normalize=False)
    want = oracles.naive_step(A, B, sims, THETA, credible)
    assert set(got) == set(want)
    for k in want:
        assert got[k] == pytest.approx(want[k], rel=1e-12, abs=1e-15)


# -- penalty -------------------------------------------------------------------------------------


def test_penalty_examples():
    assert density_factor(9, 0, 3.0) == pytest.approx(1.0, abs=1e-12)
    assert math.isclose(((9 + 1) / (0 + 1)) / math.log10(10), 10.0)
    a, b, c = term("a"), term("b"), term("c")
    # (a, b) is a row and column max, (a, c) sits at half its row max
    out = apply_penalty({(a, b): 0.8, (a, c): 0.4}, alpha=3.0)
    f = density_factor(2, 2, 3.0)
    assert out[(a, b)] == pytest.approx(0.8 * 1.0 * f)
    assert out[(a, c)] == pytest.approx(0.4 * 0.5 * f)
    assert apply_penalty({(a, b): 0.8, (a, c): 0.4}, credible={(a, c)})[(a, c)] == 0.4


@given(st.dictionaries(st.tuples(st.sampled_from(_names_a), st.sampled_from(_names_b)).map(lambda p: (term(p[0]), term(p[1]))),
                       st.floats(0, 1), max_size=12),
       st.floats(1, 6))
@settings(max_examples=100)
def test_penalty_matches_entrywise_formula(sims, alpha):
    credible = set(list(sims)[:1])
    got = apply_penalty(sims, alpha, credible)
    want = oracles.penalty(sims, alpha, credible)
    assert set(got) == set(want)
    for k in want:
        assert got[k] == pytest.approx(want[k], rel=1e-12, abs=1e-300)
        assert 0 <= got[k] <= sims[k]


def test_normalize():
    m = normalize_matrix({(term("a"), term("b")): 0.5, (term("a"), term("c")): 0.25})
    assert max(m.values()) == 1.0 and m[(term("a"), term("c"))] == 0.5
    assert normalize_matrix({}) == {}


# -- fixpoint -----------------------------------------------------------------------------------


def _twin(seed=3, concepts=10, properties=6, rate=1.0):
    onto = generate_ontology(seed, concepts, properties)
    twin, truth = scramble(onto.graph, ScrambleSpec(seed=seed, label_scramble_rate=rate))
    return build_graph(onto.graph), build_graph(twin), truth


def test_empty_seeds_stop_at_once():
    gA, gB, _ = _twin()
    result = run_fixpoint_detail(PairSpace(gA.triples, gB.triples, gA.kind_of, gB.kind_of), SeedAlignment(SimilarityMatrix()))
    assert len(result.trace) == 1
    assert result.matrix == {}
    assert result.reason == "pcg-stable"


def test_trace_invariants():
    gA, gB, truth = _twin()
    pairs = sorted(truth.pairs())
    seeds = SeedAlignment.from_pairs(pairs[:5])
    trace = []
    m = run_fixpoint(gA, gB, seeds, PropagationConfig(), trace)
    assert 1 <= len(trace) <= 8
    assert max(m.values()) == pytest.approx(1.0)
    for pair in seeds.credible:
        assert m[pair] == 1.0
        a, b = pair
        assert all(v <= 1.0 for (x, y), v in m.items() if x == a or y == b)
    for rec in trace:
        assert re.fullmatch(r"iter=\d+ pcg_pairs=\d+ delta=\S+ frozen=5", rec.line())
    assert [r.iteration for r in trace] == list(range(1, len(trace) + 1))


@pytest.mark.parametrize("cap", [1, 2, 3])
def test_iteration_cap(cap):
    gA, gB, truth = _twin()
    seeds = SeedAlignment.from_pairs(sorted(truth.pairs())[:3])
    trace = []
    run_fixpoint(gA, gB, seeds, PropagationConfig(max_iterations=cap, convergence_eps=0.0), trace)
    assert len(trace) <= cap


def test_every_iteration_is_normalized():
    gA, gB, truth = _twin()
    seeds = SeedAlignment.from_pairs(sorted(truth.pairs())[:4])
    for cap in range(1, 5):
        m = run_fixpoint(gA, gB, seeds, PropagationConfig(max_iterations=cap, convergence_eps=0.0))
        assert max(m.values()) == pytest.approx(1.0)
        assert all(0 <= v <= 1 + 1e-12 for v in m.values())


def test_twin_identity_stays_row_argmax():
    onto = generate_ontology(6, 10, 6)
    g = build_graph(onto.graph)
    subs = extract_all(g, k=15)
    seeds = compute_seeds(g, g, subs, subs)
    m = run_fixpoint(g, g, seeds)
    for e in set(g.concepts()) | set(g.properties()):
        row = {b: v for (a, b), v in m.items() if a == e}
        assert row[e] == max(row.values())


def test_config_validation():
    with pytest.raises(DomainError):
        PropagationConfig(theta=0)
    with pytest.raises(DomainError):
        PropagationConfig(max_iterations=0)
    with pytest.raises(DomainError):
        PropagationConfig(penalty_alpha=0.5)
    with pytest.raises(DomainError):
        PropagationConfig(strategy="S9")


# -- strategies ---------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def twin_setup():
    gA, gB, truth = _twin(seed=11, concepts=8, properties=5)
    subsA, subsB = extract_all(gA, k=10), extract_all(gB, k=10)
    seeds = SeedAlignment.from_pairs(sorted(truth.pairs())[:4])
    return gA, gB, subsA, subsB, seeds


@pytest.mark.parametrize("strategy", ["S1", "S2", "S3", "S4", "S5"])
def test_strategies_return_same_kind_pairs(twin_setup, strategy):
    gA, gB, subsA, subsB, seeds = twin_setup
    m = run_strategy(gA, gB, subsA, subsB, seeds, PropagationConfig(strategy=strategy))
    for (a, b), v in m.items():
        assert gA.elements[a] is gB.elements[b]
        assert gA.elements[a] in (ElementKind.CONCEPT, ElementKind.PROPERTY)
        assert 0 <= v <= 1 + 1e-12
    for pair in seeds.credible:
        assert m[pair] == 1.0


def test_s4_key_sets_split_by_kind(twin_setup):
    gA, gB, subsA, subsB, seeds = twin_setup
    run = run_strategy_detail(gA, gB, subsA, subsB, seeds, PropagationConfig(strategy="S4"))
    assert run.runs == 2
    kinds = {gA.elements[a] for a, _ in run.matrix}
    assert kinds <= {ElementKind.CONCEPT, ElementKind.PROPERTY}


def test_s2_without_admissible_pairs_keeps_seed_values():
    gA = build_graph(oracles_graph("A rdfs:subClassOf B"))
    gB = build_graph(oracles_graph("X rdfs:subClassOf Y"))
    subsA, subsB = extract_all(gA, k=5), extract_all(gB, k=5)
    seeds = SeedAlignment(SimilarityMatrix({(term("A"), term("Y")): 0.004}))
    m = run_strategy(gA, gB, subsA, subsB, seeds, PropagationConfig(strategy="S2"))
    assert m == {(term("A"), term("Y")): pytest.approx(0.004)}


def oracles_graph(spec):
    from conftest import graph
    return graph(spec)


def test_subgraph_strategies_need_subgraphs(twin_setup):
    gA, gB, _, _, seeds = twin_setup
    with pytest.raises(DomainError):
        run_strategy(gA, gB, None, None, seeds, PropagationConfig(strategy="S5"))
    assert run_strategy(gA, gB, None, None, seeds, PropagationConfig(strategy="S1"))


def test_s5_averages_rows_and_columns(twin_setup):
    gA, gB, subsA, subsB, seeds = twin_setup
    run = run_strategy_detail(gA, gB, subsA, subsB, seeds, PropagationConfig(strategy="S5"))
    assert run.runs == len(subsA) + len(subsB)
