"""Similarity propagation over the strong-constraint pairwise connectivity graph.

A pair of triples (one from each ontology) is admitted when at least two of
its position pairs are similar above ``theta``, primitive positions carry the
same primitive in both triples, and neither triple holds more than one
primitive. Each admitted triple pair passes the product of two position
similarities to the third, scaled by how many admitted pairs share that
shape. Iteration normalizes, penalizes dense or dominated entries and keeps
credible seeds frozen.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .circuit import SemanticSubgraph
from .errors import DomainError, PcgOverflow, WiomatchError
from .matrix import SimilarityMatrix
from .ontology import ElementKind, HybridOntologyGraph
from .rdf import Resource, Triple
from .sdd import SeedAlignment

log = logging.getLogger(__name__)

STRATEGIES = ("S1", "S2", "S3", "S4", "S5")
PCG_LIMIT = 5_000_000

Pair = tuple[Resource, Resource]
TriplePair = tuple[Triple, Triple]


@dataclass(frozen=True)
class PropagationConfig:
    theta: float = 0.005
    max_iterations: int = 8
    convergence_eps: float = 1e-4
    penalty_alpha: float = 3.0
    strategy: str = "S5"
    subgraph_k: int = 15
    pcg_limit: int = PCG_LIMIT

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError(f"theta must be positive, got {self.theta}")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")
        if self.penalty_alpha < 1:
            raise DomainError(f"penalty_alpha must be >= 1, got {self.penalty_alpha}")
        if self.convergence_eps < 0:
            raise DomainError("convergence_eps must be >= 0")
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}")
        if self.subgraph_k < 1:
            raise DomainError("subgraph_k must be at least 1")


def _is_constant(r: Resource) -> bool:
    return r.is_primitive or r.is_literal


class PairSpace:
    """Two triple sets plus the rules for comparing their resources.

    Primitives and literals are constants: a constant pair is similar (1.0)
    exactly when both sides are the same term and is never updated. Other
    pairs read the matrix, and only pairs of the same kind are comparable.
    """

    def __init__(self, triplesA: Sequence[Triple], triplesB: Sequence[Triple],
                 kindA: Callable[[Resource], str] | None = None,
                 kindB: Callable[[Resource], str] | None = None):
        self.A = list(dict.fromkeys(triplesA))
        self.B = list(dict.fromkeys(triplesB))
        self.kindA = kindA or (lambda r: r.kind.value)
        self.kindB = kindB or (lambda r: r.kind.value)
        self.idxA = self._index(self.A)
        self.idxB = self._index(self.B)
        self.verticesA = {r for t in self.A for r in (t.s, t.p, t.o)}
        self.verticesB = {r for t in self.B for r in (t.s, t.p, t.o)}
        self.shared_constants = {r for r in self.verticesA & self.verticesB if _is_constant(r)}

    @staticmethod
    def _index(triples):
        idx = {"s": defaultdict(list), "p": defaultdict(list), "o": defaultdict(list)}
        for t in triples:
            idx["s"][t.s].append(t)
            idx["p"][t.p].append(t)
            idx["o"][t.o].append(t)
        return idx

    def comparable(self, x: Resource, y: Resource) -> bool:
        if _is_constant(x) or _is_constant(y):
            return x == y
        return self.kindA(x) == self.kindB(y)

    def sim(self, x: Resource, y: Resource, sims: Mapping[Pair, float]) -> float:
        if _is_constant(x) or _is_constant(y):
            return 1.0 if x == y else 0.0
        if self.kindA(x) != self.kindB(y):
            return 0.0
        return sims.get((x, y), 0.0)

    def updatable(self, x: Resource, y: Resource) -> bool:
        return not (_is_constant(x) or _is_constant(y)) and self.kindA(x) == self.kindB(y)

    def above(self, sims: Mapping[Pair, float], theta: float) -> set[Pair]:
        """Position pairs similar above ``theta`` that occur in both triple sets."""
        out = {(c, c) for c in self.shared_constants}
        for (x, y), v in sims.items():
            if v > theta and x in self.verticesA and y in self.verticesB and self.comparable(x, y):
                out.add((x, y))
        return out

    def touching(self, pairs: Iterable[Pair], positions: str = "spo") -> set[TriplePair]:
        """Triple pairs where some position pair is in ``pairs``."""
        out: set[TriplePair] = set()
        for x, y in pairs:
            for pos in positions:
                ta = self.idxA[pos].get(x)
                if not ta:
                    continue
                tb = self.idxB[pos].get(y)
                if not tb:
                    continue
                out.update((a, b) for a in ta for b in tb)
        return out


def _primitive_count(t: Triple) -> int:
    return t.s.is_primitive + t.p.is_primitive + t.o.is_primitive


def sc_admits(ti: Triple, tj: Triple, sims: Mapping[Pair, float], theta: float,
              space: PairSpace | None = None) -> bool:
    """Strong-constraint test for one triple pair."""
    if _primitive_count(ti) > 1 or _primitive_count(tj) > 1:
        return False
    for x, y in ((ti.s, tj.s), (ti.p, tj.p), (ti.o, tj.o)):
        if (x.is_primitive or y.is_primitive) and x != y:
            return False
        if space is not None and not space.comparable(x, y):
            return False
    sim = space.sim if space is not None else _plain_sim
    high = sum(sim(x, y, sims) > theta for x, y in ((ti.s, tj.s), (ti.p, tj.p), (ti.o, tj.o)))
    return high >= 2


def _plain_sim(x: Resource, y: Resource, sims: Mapping[Pair, float]) -> float:
    if _is_constant(x) or _is_constant(y):
        return 1.0 if x == y else 0.0
    return sims.get((x, y), 0.0)


def _shapes(tp: TriplePair):
    a, b = tp
    sp, pp, op = (a.s, b.s), (a.p, b.p), (a.o, b.o)
    return (sp, pp), (pp, op), (sp, op)


@dataclass
class PCG:
    """Admitted triple pairs and the shape counts behind the propagation factors.

    ``f_sp`` counts admitted pairs per (subject pair, predicate pair),
    ``f_po`` per (predicate pair, object pair) and ``f_so`` per
    (subject pair, object pair); the factor of a shape is 1 / count.
    """

    space: PairSpace
    theta: float
    pairs: set[TriplePair] = field(default_factory=set)
    f_sp: Counter = field(default_factory=Counter)
    f_po: Counter = field(default_factory=Counter)
    f_so: Counter = field(default_factory=Counter)
    above: set[Pair] = field(default_factory=set)
    generation: int = 0
    limit: int = PCG_LIMIT

    def _add(self, tp: TriplePair):
        if tp in self.pairs:
            return
        self.pairs.add(tp)
        sp, po, so = _shapes(tp)
        self.f_sp[sp] += 1
        self.f_po[po] += 1
        self.f_so[so] += 1
        if len(self.pairs) > self.limit:
            raise PcgOverflow(self.limit)

    def _remove(self, tp: TriplePair):
        self.pairs.discard(tp)
        for counter, key in zip((self.f_sp, self.f_po, self.f_so), _shapes(tp)):
            counter[key] -= 1
            if counter[key] <= 0:
                del counter[key]

    def signature(self):
        """Comparable snapshot of the triple pairs and factor counts."""
        return (frozenset(self.pairs), dict(self.f_sp), dict(self.f_po), dict(self.f_so))

    def __len__(self) -> int:
        return len(self.pairs)


def build_pcg(space: PairSpace, sims: Mapping[Pair, float], theta: float, limit: int = PCG_LIMIT) -> PCG:
    """All admitted triple pairs.

    An admitted pair has its subject or object pair above ``theta`` (two of
    three positions must be), so candidates come from joining the triple sets
    on those two positions.
    """
    pcg = PCG(space, theta, limit=limit)
    pcg.above = space.above(sims, theta)
    for tp in space.touching(pcg.above, "so"):
        if sc_admits(tp[0], tp[1], sims, theta, space):
            pcg._add(tp)
    return pcg


def update_pcg(pcg: PCG, sims_old: Mapping[Pair, float], sims_new: Mapping[Pair, float], theta: float | None = None) -> PCG:
    """Bring ``pcg`` in line with ``sims_new`` by re-examining only triple pairs
    whose position pairs crossed ``theta`` in either direction."""
    theta = pcg.theta if theta is None else theta
    above_new = pcg.space.above(sims_new, theta)
    changed = above_new ^ pcg.above
    out = PCG(pcg.space, theta, set(pcg.pairs), Counter(pcg.f_sp), Counter(pcg.f_po), Counter(pcg.f_so),
              above_new, pcg.generation + 1, pcg.limit)
    if not changed:
        return out
    for tp in pcg.space.touching(changed):
        if sc_admits(tp[0], tp[1], sims_new, theta, pcg.space):
            out._add(tp)
        elif tp in out.pairs:
            out._remove(tp)
    return out


# -- iteration -----------------------------------------------------------------------------


def _frozen_lines(credible: Iterable[Pair]) -> tuple[set[Resource], set[Resource]]:
    credible = list(credible)
    return {a for a, _ in credible}, {b for _, b in credible}


def propagate_once(pcg: PCG, sims: Mapping[Pair, float], credible: Iterable[Pair] = (),
                   normalize: bool = True) -> SimilarityMatrix:
    """One synchronous propagation step over the admitted triple pairs.

    Each position pair gains the product of the other two position
    similarities times the factor of that shape. Entries in the row or
    column of a credible seed are not updated. The result is divided by its
    maximum and credible seeds are reset to 1.0.
    """
    credible = set(credible)
    rows, cols = _frozen_lines(credible)
    space = pcg.space
    gain: dict[Pair, float] = defaultdict(float)

    def push(target: Pair, amount: float):
        if amount <= 0 or not space.updatable(*target):
            return
        if target[0] in rows or target[1] in cols:
            return
        gain[target] += amount

    for tp in sorted(pcg.pairs, key=_pair_key):
        a, b = tp
        sp, pp, op = (a.s, b.s), (a.p, b.p), (a.o, b.o)
        s_s = space.sim(*sp, sims)
        s_p = space.sim(*pp, sims)
        s_o = space.sim(*op, sims)
        push(op, s_s * s_p / pcg.f_sp[(sp, pp)])
        push(sp, s_p * s_o / pcg.f_po[(pp, op)])
        push(pp, s_s * s_o / pcg.f_so[(sp, op)])

    out = SimilarityMatrix(sims)
    for key, g in gain.items():
        out[key] = out.get(key, 0.0) + g
    if normalize:
        out = normalize_matrix(out)
    for key in credible:
        out[key] = 1.0
    return out


def _pair_key(tp: TriplePair):
    return (tp[0].key, tp[1].key)


def normalize_matrix(sims: Mapping[Pair, float]) -> SimilarityMatrix:
    top = max(sims.values(), default=0.0)
    if top <= 0:
        return SimilarityMatrix(sims)
    return SimilarityMatrix({k: v / top for k, v in sims.items()})


def density_factor(N: int, n_i: int, alpha: float = 3.0) -> float:
    """Logistic penalty 1 / (1 + exp(-alpha t)), t = ((N+1)/(n_i+1)) / log10(N+1)."""
    if N < 1:
        return 1.0
    t = ((N + 1) / (n_i + 1)) / math.log10(N + 1)
    return 1.0 / (1.0 + math.exp(-alpha * t))


def apply_penalty(sims: Mapping[Pair, float], alpha: float = 3.0, credible: Iterable[Pair] = ()) -> SimilarityMatrix:
    """Scale every entry by its ratio to the larger of its row and column
    maxima and by a logistic factor that shrinks with the number of positive
    entries sharing its row or column. Credible seeds are exempt."""
    credible = set(credible)
    row_max: dict[Resource, float] = defaultdict(float)
    col_max: dict[Resource, float] = defaultdict(float)
    row_n: Counter = Counter()
    col_n: Counter = Counter()
    for (a, b), v in sims.items():
        row_max[a] = max(row_max[a], v)
        col_max[b] = max(col_max[b], v)
        if v > 0:
            row_n[a] += 1
            col_n[b] += 1
    N = max(len(row_max), len(col_max))
    out = SimilarityMatrix()
    for (a, b), v in sims.items():
        if (a, b) in credible:
            out[(a, b)] = v
            continue
        if v <= 0:
            out[(a, b)] = 0.0
            continue
        p_a = v / max(row_max[a], col_max[b])
        n_i = row_n[a] + col_n[b] - 1
        out[(a, b)] = v * p_a * density_factor(N, n_i, alpha)
    return out


@dataclass
class IterationRecord:
    iteration: int
    pcg_pairs: int
    delta: float
    frozen: int

    def line(self) -> str:
        return f"iter={self.iteration} pcg_pairs={self.pcg_pairs} delta={self.delta:.6g} frozen={self.frozen}"


@dataclass
class FixpointResult:
    matrix: SimilarityMatrix
    trace: list[IterationRecord]
    reason: str


def run_fixpoint_detail(space: PairSpace, seeds: SeedAlignment, config: PropagationConfig = PropagationConfig()) -> FixpointResult:
    """Iterate propagate, normalize, penalize, renormalize and re-freeze until
    the matrix stops moving, the connectivity graph stops changing or the
    iteration cap is reached."""
    credible = set(seeds.credible)
    sims = SimilarityMatrix(seeds.matrix)
    for key in credible:
        sims[key] = 1.0
    pcg = build_pcg(space, sims, config.theta, config.pcg_limit)
    trace: list[IterationRecord] = []
    reason = "max-iterations"
    for it in range(1, config.max_iterations + 1):
        pairs_used = len(pcg)
        if not pairs_used:
            # nothing to propagate through: the seeds come back untouched
            trace.append(IterationRecord(it, 0, 0.0, len(credible)))
            reason = "pcg-stable"
            break
        new = propagate_once(pcg, sims, credible)
        new = normalize_matrix(apply_penalty(new, config.penalty_alpha, credible))
        for key in credible:
            new[key] = 1.0
        delta = new.linf_distance(sims)
        nxt = update_pcg(pcg, sims, new, config.theta)
        trace.append(IterationRecord(it, pairs_used, delta, len(credible)))
        pcg_changed = nxt.pairs != pcg.pairs
        sims, pcg = new, nxt
        if delta <= config.convergence_eps:
            reason = "converged"
            break
        if not pcg_changed:
            reason = "pcg-stable"
            break
    return FixpointResult(sims, trace, reason)


def run_fixpoint(gA, gB, seeds: SeedAlignment, config: PropagationConfig = PropagationConfig(),
                 trace: list | None = None) -> SimilarityMatrix:
    """Fixpoint between two hybrid graphs or two triple lists."""
    space = _space(gA, gB)
    result = run_fixpoint_detail(space, seeds, config)
    if trace is not None:
        trace.extend(result.trace)
    return result.matrix


def _space(gA, gB, triplesA=None, triplesB=None) -> PairSpace:
    kindA = gA.kind_of if isinstance(gA, HybridOntologyGraph) else None
    kindB = gB.kind_of if isinstance(gB, HybridOntologyGraph) else None
    if triplesA is None:
        triplesA = gA.triples if isinstance(gA, HybridOntologyGraph) else gA
    if triplesB is None:
        triplesB = gB.triples if isinstance(gB, HybridOntologyGraph) else gB
    return PairSpace(triplesA, triplesB, kindA, kindB)


# -- strategies ----------------------------------------------------------------------------


def _same_kind_elements(gA: HybridOntologyGraph, gB: HybridOntologyGraph, kinds=(ElementKind.CONCEPT, ElementKind.PROPERTY)):
    def keep(a, b):
        ka = gA.elements.get(a)
        return ka in kinds and ka is gB.elements.get(b)
    return keep


@dataclass
class StrategyRun:
    matrix: SimilarityMatrix
    runs: int = 0
    failures: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)


def run_strategy_detail(gA: HybridOntologyGraph, gB: HybridOntologyGraph,
                        subgraphsA: Mapping[Resource, SemanticSubgraph] | None,
                        subgraphsB: Mapping[Resource, SemanticSubgraph] | None,
                        seeds: SeedAlignment, config: PropagationConfig = PropagationConfig()) -> StrategyRun:
    run = _run_strategy(gA, gB, subgraphsA, subgraphsB, seeds, config)
    return _keep_credible(run, seeds, _same_kind_elements(gA, gB))


def _run_strategy(gA, gB, subgraphsA, subgraphsB, seeds: SeedAlignment, config: PropagationConfig) -> StrategyRun:
    strategy = config.strategy
    element_pair = _same_kind_elements(gA, gB)
    if strategy != "S1" and (subgraphsA is None or subgraphsB is None):
        raise DomainError(f"strategy {strategy} needs semantic subgraphs")

    def fix(triplesA, triplesB, label) -> FixpointResult:
        space = _space(gA, gB, triplesA, triplesB)
        result = run_fixpoint_detail(space, seeds, config)
        out.runs += 1
        out.trace.extend((label, rec) for rec in result.trace)
        return result

    out = StrategyRun(SimilarityMatrix())
    if strategy == "S1":
        out.matrix = fix(gA.triples, gB.triples, "full").matrix.restrict(element_pair)
        return out

    combinedA = _combined(subgraphsA)
    combinedB = _combined(subgraphsB)
    if strategy == "S3":
        out.matrix = fix(combinedA, combinedB, "combined").matrix.restrict(element_pair)
        return out

    if strategy == "S4":
        matrix = SimilarityMatrix()
        for kind in (ElementKind.CONCEPT, ElementKind.PROPERTY):
            ta = _combined(subgraphsA, gA, kind)
            tb = _combined(subgraphsB, gB, kind)
            part = fix(ta, tb, kind.value).matrix.restrict(_same_kind_elements(gA, gB, (kind,)))
            matrix.update(part)
        out.matrix = matrix
        return out

    if strategy == "S2":
        matrix = SimilarityMatrix()
        for a in sorted(subgraphsA):
            for b in sorted(subgraphsB):
                if not element_pair(a, b):
                    continue
                try:
                    result = fix(subgraphsA[a].triples, subgraphsB[b].triples, f"{a.value}|{b.value}")
                except WiomatchError as exc:
                    out.failures[(a, b)] = str(exc)
                    result = None
                value = result.matrix.get((a, b), 0.0) if result else seeds.matrix.get((a, b), 0.0)
                if value > 0:
                    matrix[(a, b)] = value
        out.matrix = matrix
        return out

    # S5: one element's subgraph against the other side's combined graph
    rows = SimilarityMatrix()
    for a in sorted(subgraphsA):
        try:
            result = fix(subgraphsA[a].triples, combinedB, a.value)
        except WiomatchError as exc:
            out.failures[(a, None)] = str(exc)
            continue
        rows.update({k: v for k, v in result.matrix.items() if k[0] == a and element_pair(*k) and v > 0})
    cols = SimilarityMatrix()
    for b in sorted(subgraphsB):
        try:
            result = fix(combinedA, subgraphsB[b].triples, b.value)
        except WiomatchError as exc:
            out.failures[(None, b)] = str(exc)
            continue
        cols.update({k: v for k, v in result.matrix.items() if k[1] == b and element_pair(*k) and v > 0})
    out.matrix = SimilarityMatrix.average([rows, cols]).positive()
    return out


def _keep_credible(run: StrategyRun, seeds: SeedAlignment, keep) -> StrategyRun:
    # frozen seeds hold 1.0 even when no sub-run covers them
    for pair in seeds.credible:
        if keep(*pair):
            run.matrix[pair] = 1.0
    return run


def run_strategy(gA, gB, subgraphsA, subgraphsB, seeds: SeedAlignment,
                 config: PropagationConfig = PropagationConfig()) -> SimilarityMatrix:
    """Propagate at the scale chosen by ``config.strategy``; returns the
    concept-concept and property-property similarities."""
    return run_strategy_detail(gA, gB, subgraphsA, subgraphsB, seeds, config).matrix


def _combined(subgraphs: Mapping[Resource, SemanticSubgraph], g: HybridOntologyGraph | None = None,
              kind: ElementKind | None = None) -> list[Triple]:
    seen: dict[Triple, None] = {}
    for e in sorted(subgraphs):
        if kind is not None and g is not None and g.elements.get(e) is not kind:
            continue
        for t in subgraphs[e].triples:
            seen.setdefault(t, None)
    return list(seen)
