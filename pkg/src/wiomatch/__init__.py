"""Matching of weakly informative ontologies.

Typical use::

    from wiomatch import RunConfig, load_ontology, match_graphs
    result = match_graphs(load_ontology("a.nt"), load_ontology("b.nt"), RunConfig())
"""

__version__ = "0.1.0"

from .alignment import Alignment, Correspondence, EvalReport, evaluate, extract_alignment, read_alignment, write_alignment
from .circuit import SemanticSubgraph, WeightParams, extract_all, extract_subgraph, solve_circuit
from .config import RunConfig, load_config
from .errors import WiomatchError
from .matrix import SimilarityMatrix
from .ontology import HybridOntologyGraph, OntologyGraph, build_graph, build_hybrid_graph, load_ontology, process
from .pipeline import MatchResult, match_graphs, run_match
from .propagation import PropagationConfig, run_fixpoint, run_strategy
from .sdd import SeedAlignment, compute_seeds
from .wio import WioReport, detect_wio

__all__ = [
    "Alignment", "Correspondence", "EvalReport", "HybridOntologyGraph", "MatchResult", "OntologyGraph",
    "PropagationConfig", "RunConfig", "SeedAlignment", "SemanticSubgraph", "SimilarityMatrix", "WeightParams",
    "WioReport", "WiomatchError", "build_graph", "build_hybrid_graph", "compute_seeds", "detect_wio", "evaluate",
    "extract_alignment", "extract_all", "extract_subgraph", "load_config", "load_ontology", "match_graphs",
    "process", "read_alignment", "run_fixpoint", "run_match", "run_strategy", "solve_circuit", "write_alignment",
]
