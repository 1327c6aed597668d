"""End-to-end matching: load, process, check informativeness, extract
subgraphs, seed, propagate when needed, extract and score."""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .alignment import Alignment, EvalReport, evaluate, extract_alignment, read_alignment, write_alignment
from .circuit import SubgraphSet, extract_all
from .config import RunConfig
from .matrix import SimilarityMatrix
from .ontology import HybridOntologyGraph, OntologyGraph, build_graph, load_ontology
from .propagation import run_strategy_detail
from .sdd import SeedAlignment, compute_seeds
from .text import default_lexicon, load_wordlist
from .wio import WioReport, detect_wio

log = logging.getLogger(__name__)


@dataclass
class MatchResult:
    alignment: Alignment
    matrix: SimilarityMatrix
    seeds: SeedAlignment
    route: str
    wio: tuple[WioReport, WioReport]
    evaluation: EvalReport | None = None
    records: list[dict] = field(default_factory=list)

    def report_lines(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)


@contextmanager
def _timed(records: list, stage: str):
    t0 = time.perf_counter()
    yield
    records.append({"event": "timing", "stage": stage, "seconds": round(time.perf_counter() - t0, 6)})


def lexicon_for(config: RunConfig) -> frozenset[str]:
    return load_wordlist(config.lexicon) if config.lexicon else default_lexicon()


def match_graphs(rawA: OntologyGraph, rawB: OntologyGraph, config: RunConfig = RunConfig(),
                 reference: Alignment | None = None, lexicon: frozenset[str] | None = None,
                 external_seeds: Alignment | None = None) -> MatchResult:
    """Match two loaded (unprocessed) ontologies.

    The propagation route is taken when either side is weak informative;
    otherwise the description-document similarities are extracted directly.
    ``external_seeds`` are merged into the computed seeds.
    """
    records: list[dict] = []
    lexicon = lexicon_for(config) if lexicon is None else lexicon
    with _timed(records, "process"):
        gA, gB = build_graph(rawA), build_graph(rawB)
    records.append({"event": "graph", "side": "A", "triples": len(gA.triples), "elements": len(gA.elements)})
    records.append({"event": "graph", "side": "B", "triples": len(gB.triples), "elements": len(gB.elements)})

    with _timed(records, "wio"):
        wio = (detect_wio(gA, lexicon, config.phi, config.delta), detect_wio(gB, lexicon, config.phi, config.delta))
    for side, rep in zip("AB", wio):
        records.append({"event": "wio", "side": side, "weak": rep.w, "elements": rep.N,
                        "ratio": round(rep.ratio, 6), "is_wio": rep.is_wio})

    propagate = wio[0].is_wio or wio[1].is_wio
    params = config.weight_params()
    with _timed(records, "subgraphs"):
        subA = extract_all(gA, params, config.subgraph_k)
        subB = extract_all(gB, params, config.subgraph_k)
    for side, sub in zip("AB", (subA, subB)):
        if sub.failures:
            records.append({"event": "subgraph-failures", "side": side, "count": len(sub.failures)})

    with _timed(records, "seeds"):
        seeds = compute_seeds(gA, gB, subA, subB, config.sdd_weights, config.credible, config.merge_threshold)
        if external_seeds is not None:
            seeds = seeds.with_external(external_seeds, config.credible)
    records.append({"event": "seeds", "pairs": len(seeds.matrix), "credible": len(seeds.credible)})

    if propagate:
        route = f"route=propagation strategy={config.strategy}"
        records.append({"event": "route", "route": "propagation", "strategy": config.strategy, "line": route})
        with _timed(records, "propagation"):
            run = run_strategy_detail(gA, gB, subA, subB, seeds, config.propagation())
        for label, rec in run.trace:
            records.append({"event": "iteration", "run": label, "iter": rec.iteration,
                            "pcg_pairs": rec.pcg_pairs, "delta": rec.delta, "frozen": rec.frozen})
        if run.failures:
            records.append({"event": "propagation-failures", "count": len(run.failures)})
        matrix = run.matrix
    else:
        route = "route=sdd-only"
        records.append({"event": "route", "route": "sdd-only", "line": route})
        matrix = seeds.matrix

    with _timed(records, "extract"):
        alignment = extract_alignment(matrix, config.extraction)
    records.append({"event": "alignment", "correspondences": len(alignment)})
    result = MatchResult(alignment, matrix, seeds, route, wio, records=records)
    if reference is not None:
        result.evaluation = evaluate(alignment, reference)
        records.append({"event": "eval", **json.loads(result.evaluation.json())})
    return result


def run_match(config: RunConfig) -> MatchResult:
    """Match the files named in ``config``; write the alignment and report if paths are set."""
    t0 = time.perf_counter()
    rawA, rawB = load_ontology(config.ontologyA), load_ontology(config.ontologyB)
    reference = read_alignment(config.reference) if config.reference else None
    external = read_alignment(config.seeds) if config.seeds else None
    result = match_graphs(rawA, rawB, config, reference, external_seeds=external)
    result.records.insert(0, {"event": "inputs", "ontologyA": config.ontologyA, "ontologyB": config.ontologyB,
                              "triplesA": len(rawA), "triplesB": len(rawB)})
    result.records.append({"event": "timing", "stage": "total", "seconds": round(time.perf_counter() - t0, 6)})
    if config.output:
        write_alignment(result.alignment, config.output)
    if config.report:
        with open(config.report, "w", encoding="utf-8") as fh:
            fh.write(result.report_lines())
    return result


def subgraphs_for(g: HybridOntologyGraph, config: RunConfig) -> SubgraphSet:
    return extract_all(g, config.weight_params(), config.subgraph_k)
