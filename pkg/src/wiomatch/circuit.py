"""Circuit model over the hybrid ontology graph.

Every statement is a resistor whose conductance comes from the weights of
its subject, predicate and object. Putting +1 V on an element and grounding
every other vertex through a sink, the currents rank how much of the
element's "semantic information" reaches each part of the graph; the
semantic subgraph is the ``k``-triple region capturing the most of it.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse.linalg import spsolve

from .errors import DisconnectedSource, DomainError, NonDownhillPath, SolverDivergence, WiomatchError
from .ontology import ElementKind, HybridOntologyGraph
from .rdf import Resource, Triple, V

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class WeightParams:
    gamma_C: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    gamma_P: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    gamma_I: tuple[float, float] = (0.5, 0.5)
    epsilon: float = 0.01
    lam: float = 0.85

    def __post_init__(self):
        for name in ("gamma_C", "gamma_P", "gamma_I"):
            gammas = getattr(self, name)
            if any(g < 0 or g > 1 for g in gammas) or not math.isclose(sum(gammas), 1.0, abs_tol=1e-9):
                raise DomainError(f"{name} must be non-negative and sum to 1, got {gammas}")
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        if not 0 < self.lam <= 1:
            raise DomainError(f"lambda must lie in (0, 1], got {self.lam}")


def attenuation(x: float, m: float, epsilon: float = 0.01) -> float:
    """Slowly decaying weight ``g(x, m)`` of a count ``x`` out of a maximum ``m``.

    g(1, m) is 1 and g(m, m) approaches 1/(2m) for large m.
    """
    if x < 1 or x > m:
        raise DomainError(f"attenuation needs 1 <= x <= m, got x={x}, m={m}")
    return 0.5 * (1.0 / x + (1.0 - math.log(x) / math.log(m + epsilon)))


# -- element weights ---------------------------------------------------------------


def _hierarchy_depths(members: Iterable[Resource], parent_pairs) -> dict[Resource, int]:
    members = set(members)
    parents: dict[Resource, set[Resource]] = defaultdict(set)
    children: dict[Resource, set[Resource]] = defaultdict(set)
    for child, parent in parent_pairs:
        if child in members and parent in members and child != parent:
            parents[child].add(parent)
            children[parent].add(child)
    depth = {r: 1 for r in members if not parents.get(r)}
    queue = deque(sorted(depth))
    while queue:
        r = queue.popleft()
        for c in sorted(children.get(r, ())):
            if c not in depth:
                depth[c] = depth[r] + 1
                queue.append(c)
    for r in members:
        depth.setdefault(r, 1)
    return depth


def weight_components(g: HybridOntologyGraph, params: WeightParams) -> dict[Resource, dict[str, float | None]]:
    """Per-resource rule weights (``None`` marks a rule that does not apply)."""
    eps = params.epsilon
    idx = g.index

    freq: dict[Resource, int] = defaultdict(int)
    for t in g.triples:
        for r in {t.s, t.p, t.o}:
            freq[r] += 1
    max_f = max(freq.values(), default=1)

    concepts = [r for r, k in g.elements.items() if k is ElementKind.CONCEPT]
    properties = [r for r, k in g.elements.items() if k is ElementKind.PROPERTY]
    instances = [r for r, k in g.elements.items() if k is ElementKind.INSTANCE]

    depth = _hierarchy_depths(concepts, idx.pairs(V.subClassOf))
    depth.update(_hierarchy_depths(properties, idx.pairs(V.subPropertyOf)))
    max_depth = max(depth.values(), default=1)

    isp: dict[Resource, int] = {}
    concept_set = set(concepts)
    members_of: dict[Resource, set[Resource]] = defaultdict(set)
    for a, c in idx.pairs(V.type):
        if c in concept_set:
            members_of[c].add(a)
    for c in concepts:
        isp[c] = len(members_of.get(c, ()))
    for p in properties:
        isp[p] = len(set(idx.pairs(p)))
    max_isp = max(isp.values(), default=0)

    dp: dict[Resource, int] = {}
    op: dict[Resource, int] = {}
    for a in instances:
        preds_lit = {t.p for t in idx.by_s.get(a, ()) if not t.p.is_primitive and t.o.is_literal}
        preds_obj = {t.p for t in idx.by_s.get(a, ()) if not t.p.is_primitive and not t.o.is_literal}
        dp[a], op[a] = len(preds_lit), len(preds_obj)
    id_denominator = max(dp.values(), default=0) + max(op.values(), default=0)

    class_size: dict[Resource, int] = {}
    for a in instances:
        sizes = [len(members_of[c]) for c in idx.objects(a, V.type) if c in concept_set]
        if sizes:
            class_size[a] = max(sizes)
    max_class = max(class_size.values(), default=0)

    def g_or_none(x: int, m: int) -> float | None:
        if m <= 0:
            return None
        # a zero count is the least frequent case, scored like a single one
        return attenuation(max(x, 1), m, eps)

    resources = set(freq)
    resources.update(g.elements)
    out: dict[Resource, dict[str, float | None]] = {}
    for r in resources:
        comp: dict[str, float | None] = {"mu_f": g_or_none(freq.get(r, 0), max_f), "mu_H": None, "mu_Isp": None, "mu_Id": None, "mu_Io": None}
        kind = g.elements.get(r)
        if kind in (ElementKind.CONCEPT, ElementKind.PROPERTY):
            comp["mu_H"] = depth[r] / max_depth
            comp["mu_Isp"] = g_or_none(isp[r], max_isp)
        elif kind is ElementKind.INSTANCE:
            comp["mu_Id"] = (dp[r] + op[r]) / id_denominator if id_denominator else None
            comp["mu_Io"] = g_or_none(class_size[r], max_class) if r in class_size else None
        out[r] = comp
    return out


def _combine(terms: Sequence[tuple[float, float | None]], fallback: float) -> float:
    active = [(gamma, v) for gamma, v in terms if v is not None]
    total = sum(gamma for gamma, _ in active)
    if not active or total <= 0:
        return fallback
    return sum(gamma * v for gamma, v in active) / total


def composite_weight(kind: ElementKind | None, comp: dict[str, float | None], params: WeightParams) -> float:
    mu_f = comp["mu_f"] if comp["mu_f"] is not None else 1.0
    if kind is ElementKind.CONCEPT:
        gc = params.gamma_C
        return _combine([(gc[0], comp["mu_f"]), (gc[1], comp["mu_H"]), (gc[2], comp["mu_Isp"])], mu_f)
    if kind is ElementKind.PROPERTY:
        gp = params.gamma_P
        return _combine([(gp[0], comp["mu_f"]), (gp[1], comp["mu_H"]), (gp[2], comp["mu_Isp"])], mu_f)
    if kind is ElementKind.INSTANCE:
        gi = params.gamma_I
        return _combine([(gi[0], comp["mu_Id"]), (gi[1], comp["mu_Io"])], mu_f)
    return mu_f


def element_weights(g: HybridOntologyGraph, params: WeightParams = WeightParams()) -> dict[Resource, float]:
    comps = weight_components(g, params)
    return {r: composite_weight(g.elements.get(r), c, params) for r, c in comps.items()}


def triple_conductance(t: Triple, mu: dict[Resource, float], degree) -> float:
    return (mu[t.s] / degree[t.s] + mu[t.p] + mu[t.o] / degree[t.o]) / 3.0


def weight_table(g: HybridOntologyGraph, params: WeightParams = WeightParams()) -> str:
    """TSV dump: element, mu_f, mu_H, mu_Isp, mu_Id, mu_Io, mu."""
    comps = weight_components(g, params)
    lines = ["element\tmu_f\tmu_H\tmu_Isp\tmu_Id\tmu_Io\tmu"]
    for r in sorted(comps):
        c = comps[r]
        mu = composite_weight(g.elements.get(r), c, params)
        cells = ["" if c[k] is None else f"{c[k]:.6f}" for k in ("mu_f", "mu_H", "mu_Isp", "mu_Id", "mu_Io")]
        lines.append("\t".join([r.n3(), *cells, f"{mu:.6f}"]))
    return "\n".join(lines) + "\n"


# -- conductance graph and solve --------------------------------------------------------


class CircuitEdge(NamedTuple):
    u: int
    v: int
    conductance: float
    triple: Triple | None  # None for auxiliary property edges


@dataclass
class ConductanceGraph:
    """Weighted resistor network; immutable once built.

    ``aux`` lists, per property, the extra edges (target, conductance) that
    connect the property vertex to the subjects and domain concepts of its
    statements.
    """

    triples: list[Triple]
    w: list[float]
    lam: float = 0.85
    mu: dict[Resource, float] = field(default_factory=dict)
    aux: dict[Resource, list[tuple[Resource, float]]] = field(default_factory=dict)
    base: HybridOntologyGraph | None = None
    # fixed C(u, z) values replacing the lambda rule, for hand-built circuits
    sink_overrides: dict[Resource, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.w) != len(self.triples):
            raise ValueError("one conductance per triple required")
        if any(not (c > 0 and math.isfinite(c)) for c in self.w):
            raise DomainError("conductances must be finite and positive")
        verts = set()
        for t in self.triples:
            verts.add(t.s)
            verts.add(t.o)
        for p, targets in self.aux.items():
            verts.add(p)
            verts.update(r for r, _ in targets)
        self.vertices: list[Resource] = sorted(verts)
        self.vindex: dict[Resource, int] = {r: i for i, r in enumerate(self.vertices)}
        self.edges: list[CircuitEdge] = [
            CircuitEdge(self.vindex[t.s], self.vindex[t.o], c, t)
            for t, c in zip(self.triples, self.w)
            if t.s != t.o
        ]
        n = len(self.vertices)
        rows = [e.u for e in self.edges] + [e.v for e in self.edges]
        cols = [e.v for e in self.edges] + [e.u for e in self.edges]
        vals = [e.conductance for e in self.edges] * 2
        # symmetric conductance matrix of the statement edges (parallel edges summed)
        self.adjacency = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
        self.total_conductance = np.asarray(self.adjacency.sum(axis=1)).ravel()

    @classmethod
    def from_hybrid(cls, g: HybridOntologyGraph, params: WeightParams = WeightParams()) -> "ConductanceGraph":
        mu = element_weights(g, params)
        w = [triple_conductance(t, mu, g.degree) for t in g.triples]
        aux: dict[Resource, list[tuple[Resource, float]]] = {}
        idx = g.hybrid_index
        for p in g.properties():
            targets = {t.s for t in idx.by_p.get(p, ()) if t.s != p}
            targets.update(c for c in g.index.objects(p, V.domain) if c != p)
            if targets:
                aux[p] = [(c, mu.get(p, 1.0)) for c in sorted(targets)]
        return cls(list(g.triples), w, params.lam, mu, aux, g)

    def sink_conductance(self, u: Resource, source: Resource) -> float:
        """C(u, z): lambda times u's conductance to every neighbour except the source."""
        if u == source:
            return 0.0
        if u in self.sink_overrides:
            return self.sink_overrides[u]
        i = self.vindex[u]
        to_source = 0.0
        if source in self.vindex:
            to_source = self.adjacency[i, self.vindex[source]]
        return self.lam * (self.total_conductance[i] - to_source)


@dataclass
class CircuitSolution:
    source: Resource
    vertices: list[Resource]
    voltages: np.ndarray
    edges: list[CircuitEdge]
    currents: np.ndarray  # signed current along each edge, u -> v
    sink_conductance: np.ndarray
    component: np.ndarray  # boolean mask of vertices in the source's component
    residual: float

    def __post_init__(self):
        self.vindex = {r: i for i, r in enumerate(self.vertices)}
        self.source_index = self.vindex[self.source]
        out = np.zeros(len(self.vertices))
        for e, cur in zip(self.edges, self.currents):
            if cur > 0:
                out[e.u] += cur
            elif cur < 0:
                out[e.v] -= cur
        self.sink_current = self.sink_conductance * self.voltages
        self.out_current = out + self.sink_current

    @property
    def voltage(self) -> dict[Resource, float]:
        return {r: float(self.voltages[i]) for i, r in enumerate(self.vertices)}

    def voltage_of(self, r: Resource) -> float:
        i = self.vindex.get(r)
        return 0.0 if i is None else float(self.voltages[i])

    def current(self, u: Resource, v: Resource) -> float:
        """Net current flowing from u to v over all edges joining them."""
        iu, iv = self.vindex[u], self.vindex[v]
        total = 0.0
        for e, cur in zip(self.edges, self.currents):
            if e.u == iu and e.v == iv:
                total += cur
            elif e.u == iv and e.v == iu:
                total -= cur
        return total

    def total_out(self, r: Resource) -> float:
        return float(self.out_current[self.vindex[r]])

    def kirchhoff_residuals(self) -> dict[Resource, float]:
        """Net current leaving every vertex except source and sink (should be 0)."""
        net = self.sink_current.copy()
        for e, cur in zip(self.edges, self.currents):
            net[e.u] += cur
            net[e.v] -= cur
        return {
            r: float(net[i]) for i, r in enumerate(self.vertices) if i != self.source_index and self.component[i]
        }


def solve_circuit(cg: ConductanceGraph, source: Resource) -> CircuitSolution:
    """Solve the network with V(source) = 1 and V(sink) = 0.

    Only the connected component of the source carries current; all other
    vertices sit at 0 V. Property sources get their auxiliary edges.
    """
    aux_targets = cg.aux.get(source, [])
    if source not in cg.vindex:
        raise DisconnectedSource(source)
    n = len(cg.vertices)
    s = cg.vindex[source]
    aux_edges = [CircuitEdge(s, cg.vindex[t], c, None) for t, c in aux_targets if t != source]
    edges = list(cg.edges) + aux_edges
    if not any(e.u == s or e.v == s for e in edges):
        raise DisconnectedSource(source)

    adjacency = cg.adjacency
    if aux_edges:
        rows = [e.u for e in aux_edges] + [e.v for e in aux_edges]
        cols = [e.v for e in aux_edges] + [e.u for e in aux_edges]
        vals = [e.conductance for e in aux_edges] * 2
        adjacency = adjacency + sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    _, labels = csgraph.connected_components(adjacency, directed=False)
    component = labels == labels[s]

    total = np.asarray(adjacency.sum(axis=1)).ravel()
    to_source = adjacency[:, s].toarray().ravel()
    # aux edges are part of the source's neighbourhood, so they never feed the sink
    sink = cg.lam * (total - to_source)
    for r, c in cg.sink_overrides.items():
        sink[cg.vindex[r]] = c
    sink[s] = 0.0
    sink[~component] = 0.0

    interior = np.flatnonzero(component & (np.arange(n) != s))
    voltages = np.zeros(n)
    voltages[s] = 1.0
    residual = 0.0
    if interior.size:
        sub = adjacency[interior][:, interior]
        diag = total[interior] + sink[interior]
        A = (sparse.diags(diag) - sub).tocsc()
        b = to_source[interior]
        x = spsolve(A, b)
        r = A @ x - b
        if np.max(np.abs(r)) > RESIDUAL_TOL * max(1.0, np.max(np.abs(b))):
            # one step of iterative refinement before giving up
            x = x - spsolve(A, r)
            r = A @ x - b
        residual = float(np.max(np.abs(r)))
        if not np.all(np.isfinite(x)) or residual > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(b)))):
            raise SolverDivergence(residual)
        voltages[interior] = np.clip(x, 0.0, 1.0)

    eu = np.fromiter((e.u for e in edges), dtype=np.int64, count=len(edges))
    ev = np.fromiter((e.v for e in edges), dtype=np.int64, count=len(edges))
    ec = np.fromiter((e.conductance for e in edges), dtype=float, count=len(edges))
    currents = ec * (voltages[eu] - voltages[ev]) if edges else np.zeros(0)
    return CircuitSolution(source, cg.vertices, voltages, edges, currents, sink, component, residual)


def delivered_current(path: Sequence[Resource], sol: CircuitSolution) -> float:
    """Current surviving along a downhill prefix path that starts at the source.

    Each hop keeps the fraction of its tail's outgoing current that takes
    that hop; a one-vertex path delivers the source's whole output.
    """
    if not path or path[0] != sol.source:
        raise NonDownhillPath("prefix path must start at the source")
    delivered = sol.total_out(path[0])
    for a, b in zip(path, path[1:]):
        if sol.voltage_of(a) <= sol.voltage_of(b):
            raise NonDownhillPath(f"hop {a} -> {b} does not follow decreasing voltage")
        flow = sol.current(a, b)
        out = sol.total_out(a)
        if flow <= 0 or out <= 0:
            raise NonDownhillPath(f"no current from {a} to {b}")
        delivered *= flow / out
    return delivered


# -- subgraph extraction ------------------------------------------------------------------


@dataclass
class SemanticSubgraph:
    element: Resource
    triples: list[Triple]
    captured_flow: float = 0.0
    prefix_paths: list[tuple[tuple[Resource, ...], float]] = field(default_factory=list)

    def elements(self) -> set[Resource]:
        """Resources occurring in the subgraph, the described element included."""
        out = {self.element}
        for t in self.triples:
            out.update((t.s, t.p, t.o))
        return out

    def to_ntriples(self) -> str:
        head = f"# element={self.element.n3()} CF={self.captured_flow:.10g}\n"
        return head + "".join(t.n3() + "\n" for t in self.triples)

    def __len__(self) -> int:
        return len(self.triples)


class DownhillDag:
    """Edges carrying current from higher to lower voltage, with their split ratios."""

    def __init__(self, sol: CircuitSolution):
        self.sol = sol
        self.source = sol.source_index
        volts = sol.voltages
        self.tail: list[int] = []
        self.head: list[int] = []
        self.ratio: list[float] = []
        self.triple: list[Triple | None] = []
        for e, cur in zip(sol.edges, sol.currents):
            if cur > 0 and volts[e.u] > volts[e.v]:
                u, v, flow = e.u, e.v, cur
            elif cur < 0 and volts[e.v] > volts[e.u]:
                u, v, flow = e.v, e.u, -cur
            else:
                continue
            out = sol.out_current[u]
            if out <= 0:
                continue
            self.tail.append(u)
            self.head.append(v)
            self.ratio.append(flow / out)
            self.triple.append(e.triple)
        self.source_output = float(sol.out_current[self.source])
        # topological order: decreasing voltage, ties by index
        self.order = sorted(range(len(volts)), key=lambda i: (-volts[i], i))

    def __len__(self) -> int:
        return len(self.tail)


def _flows(dag: DownhillDag, chosen: Iterable[int]) -> tuple[dict[int, float], dict[int, float]]:
    """Forward delivered mass F(v) (sum of delivered current over paths ending
    at v) and backward multiplier D(v) (sum over paths leaving v of the
    product of ratios) for the chosen edge set."""
    chosen = list(chosen)
    into: dict[int, list[int]] = defaultdict(list)
    outof: dict[int, list[int]] = defaultdict(list)
    for e in chosen:
        into[dag.head[e]].append(e)
        outof[dag.tail[e]].append(e)
    forward: dict[int, float] = {dag.source: dag.source_output}
    for v in dag.order:
        if v == dag.source:
            continue
        inc = into.get(v)
        if inc:
            forward[v] = sum(forward.get(dag.tail[e], 0.0) * dag.ratio[e] for e in inc)
    backward: dict[int, float] = {}
    for v in reversed(dag.order):
        outs = outof.get(v)
        if outs:
            backward[v] = sum(dag.ratio[e] * (1.0 + backward.get(dag.head[e], 0.0)) for e in outs)
    return forward, backward


def captured_flow(dag: DownhillDag, chosen: Iterable[int]) -> float:
    """Sum of delivered current over every prefix path whose last edge is a statement."""
    chosen = list(chosen)
    forward, _ = _flows(dag, chosen)
    return sum(forward.get(dag.tail[e], 0.0) * dag.ratio[e] for e in chosen if dag.triple[e] is not None)


def _best_path(dag: DownhillDag, chosen: list[int], target: int) -> tuple[tuple[int, ...], float]:
    into: dict[int, list[int]] = defaultdict(list)
    for e in chosen:
        into[dag.head[e]].append(e)
    best: dict[int, tuple[float, tuple[int, ...]]] = {dag.source: (dag.source_output, (dag.source,))}
    for v in dag.order:
        if v == dag.source or v not in into:
            continue
        cands = [
            (best[dag.tail[e]][0] * dag.ratio[e], best[dag.tail[e]][1] + (v,)) for e in into[v] if dag.tail[e] in best
        ]
        if cands:
            best[v] = max(cands, key=lambda c: (c[0], [-i for i in c[1]]))
    value, path = best.get(target, (0.0, ()))
    return path, value


def extract_subgraph(cg: ConductanceGraph, element: Resource, k: int, sol: CircuitSolution | None = None) -> SemanticSubgraph:
    """Greedily assemble the ``k`` statements capturing the most current from ``element``.

    Each step extends the current subgraph by the downhill statement edge
    whose addition raises the captured flow the most (each addition brings
    one new statement, so gain per new statement is the gain itself). Ties
    go to the lexicographically smaller statement.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    if k == 0:
        return SemanticSubgraph(element, [], 0.0, [])
    if sol is None:
        sol = solve_circuit(cg, element)
    dag = DownhillDag(sol)
    aux = [e for e in range(len(dag)) if dag.triple[e] is None]
    real = [e for e in range(len(dag)) if dag.triple[e] is not None]
    sort_key = {e: dag.triple[e].n3() for e in real}

    chosen: list[int] = list(aux)
    chosen_set: set[int] = set()
    reached = {dag.source} | {dag.head[e] for e in aux}
    paths: list[tuple[tuple[Resource, ...], float]] = []
    while len(chosen_set) < k:
        forward, backward = _flows(dag, chosen)
        best_e, best_gain = None, 0.0
        for e in real:
            if e in chosen_set or dag.tail[e] not in reached:
                continue
            gain = forward.get(dag.tail[e], 0.0) * dag.ratio[e] * (1.0 + backward.get(dag.head[e], 0.0))
            if gain > best_gain or (gain == best_gain and best_e is not None and gain > 0 and sort_key[e] < sort_key[best_e]):
                best_e, best_gain = e, gain
        if best_e is None or best_gain <= 0:
            break
        chosen.append(best_e)
        chosen_set.add(best_e)
        reached.add(dag.head[best_e])
        idx_path, value = _best_path(dag, chosen, dag.head[best_e])
        paths.append((tuple(sol.vertices[i] for i in idx_path), float(value)))

    picked = [e for e in chosen if e in chosen_set]
    triples = [dag.triple[e] for e in picked]
    return SemanticSubgraph(element, triples, float(captured_flow(dag, chosen)), paths)


class SubgraphSet(dict):
    """Mapping element -> SemanticSubgraph; ``failures`` records per-element errors."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.failures: dict[Resource, str] = {}

    def combined(self, kinds: Iterable[ElementKind] | None = None, graph: HybridOntologyGraph | None = None) -> list[Triple]:
        """Union of the subgraphs (optionally only of the given element kinds), first-seen order."""
        seen: set[Triple] = set()
        out: list[Triple] = []
        for element in sorted(self):
            if kinds is not None and graph is not None and graph.elements.get(element) not in kinds:
                continue
            for t in self[element].triples:
                if t not in seen:
                    seen.add(t)
                    out.append(t)
        return out


def extract_all(
    g: HybridOntologyGraph,
    params: WeightParams = WeightParams(),
    k: int = 15,
    elements: Iterable[Resource] | None = None,
    cg: ConductanceGraph | None = None,
) -> SubgraphSet:
    """Semantic subgraph of every concept and property of ``g``.

    A failing element gets an empty subgraph and an entry in ``failures``;
    the batch always completes.
    """
    if cg is None:
        cg = ConductanceGraph.from_hybrid(g, params)
    if elements is None:
        elements = g.concepts() + g.properties()
    out = SubgraphSet()
    for e in elements:
        try:
            out[e] = extract_subgraph(cg, e, k)
        except WiomatchError as exc:
            log.debug("subgraph extraction failed for %s: %s", e, exc)
            out.failures[e] = str(exc)
            out[e] = SemanticSubgraph(e, [], 0.0, [])
    return out
