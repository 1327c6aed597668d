"""Twin-ontology benchmark: a synthetic ontology against its scrambled copy."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .alignment import Alignment, EvalReport, evaluate, extract_alignment
from .circuit import SubgraphSet, WeightParams, extract_all
from .matrix import SimilarityMatrix
from .ontology import HybridOntologyGraph, build_graph
from .propagation import PropagationConfig, run_strategy
from .sdd import SeedAlignment
from .synthetic import ScrambleSpec, generate_ontology, scramble


@dataclass
class TwinTask:
    gA: HybridOntologyGraph
    gB: HybridOntologyGraph
    truth: Alignment
    subgraphsA: SubgraphSet
    subgraphsB: SubgraphSet


def twin_task(seed: int = 0, n_concepts: int = 30, n_properties: int = 20, k: int = 15,
              params: WeightParams = WeightParams()) -> TwinTask:
    """Ontology, fully scrambled copy (all labels renamed, comments dropped,
    structure kept), ground truth and semantic subgraphs of both sides."""
    onto = generate_ontology(seed, n_concepts, n_properties)
    scrambled, truth = scramble(onto.graph, ScrambleSpec(seed=seed + 1, label_scramble_rate=1.0, comment_drop_rate=1.0))
    gA, gB = build_graph(onto.graph), build_graph(scrambled)
    return TwinTask(gA, gB, truth, extract_all(gA, params, k), extract_all(gB, params, k))


def sample_seeds(truth: Alignment, fraction: float, seed: int = 0) -> SeedAlignment:
    """A random ``fraction`` of the ground truth as credible seeds at confidence 1.0."""
    pairs = sorted(truth.pairs())
    random.Random(seed).shuffle(pairs)
    n = int(round(fraction * len(pairs)))
    return SeedAlignment.from_pairs(pairs[:n])


def seeds_for_f1(truth: Alignment, f1: float, seed: int = 0) -> SeedAlignment:
    """Correct seeds only, sized so their F1 against ``truth`` is ``f1``.

    With precision 1 the recall is f1 / (2 - f1). For one ``seed`` the sets
    are nested: a larger target contains every smaller one.
    """
    return sample_seeds(truth, f1 / (2.0 - f1), seed)


def seed_report(seeds: SeedAlignment, truth: Alignment, threshold: float = 0.25) -> EvalReport:
    return evaluate(extract_alignment(seeds.matrix, threshold), truth)


def run_twin(task: TwinTask, seeds: SeedAlignment, strategy: str = "S5", threshold: float = 0.25,
             config: PropagationConfig | None = None) -> tuple[EvalReport, SimilarityMatrix]:
    cfg = config or PropagationConfig(strategy=strategy)
    if cfg.strategy != strategy:
        cfg = PropagationConfig(**{**cfg.__dict__, "strategy": strategy})
    sims = run_strategy(task.gA, task.gB, task.subgraphsA, task.subgraphsB, seeds, cfg)
    return evaluate(extract_alignment(sims, threshold), task.truth), sims
