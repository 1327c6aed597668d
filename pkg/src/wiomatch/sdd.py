"""Semantic description documents and the subgraph-constrained seed matcher.

Each concept or property gets a weighted bag of words built from its own
text and from the text of related elements that appear in its semantic
subgraph. Documents of both ontologies share one TF-IDF space whose
vocabulary folds near-identical spellings together; cosine similarity of the
vectors gives the initial matrix, and mutually best pairs above a high
threshold become credible seeds for propagation.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .circuit import SemanticSubgraph
from .matrix import SimilarityMatrix
from .ontology import ElementKind, HybridOntologyGraph
from .rdf import Resource, V
from .text import edit_similarity, preprocess

DEFAULT_PHI = (1.0, 1.0, 0.5, 0.25)
MERGE_THRESHOLD = 0.85


@dataclass
class SDD:
    element: Resource
    terms: dict[str, float] = field(default_factory=dict)

    def add(self, other: Mapping[str, float] | "SDD", weight: float = 1.0) -> "SDD":
        items = other.terms if isinstance(other, SDD) else other
        for tok, w in items.items():
            if w * weight > 0:
                self.terms[tok] = self.terms.get(tok, 0.0) + w * weight
        return self

    def __bool__(self) -> bool:
        return bool(self.terms)


def _field_tokens(texts: Iterable[str], stopwords) -> set[str]:
    out: set[str] = set()
    for text in texts:
        out.update(preprocess(text, stopwords))
    return out


def base_sdd(e: Resource, annotations: Mapping, phi: Sequence[float] = DEFAULT_PHI, stopwords=None) -> SDD:
    """phi1 * local name + phi2 * labels + phi3 * comments + phi4 * other annotations.

    Each field contributes its distinct tokens; fields are summed. Language
    primitives and blank nodes have no text of their own.
    """
    doc = SDD(e)
    if e.is_primitive or e.is_blank:
        return doc
    name = e.value if e.is_literal else e.local_name
    ann = annotations.get(e, {})
    fields = (
        [name],
        ann.get("label", ()),
        ann.get("comment", ()),
        ann.get("other", ()),
    )
    for weight, texts in zip(phi, fields):
        for tok in _field_tokens(texts, stopwords):
            if weight > 0:
                doc.terms[tok] = doc.terms.get(tok, 0.0) + weight
    return doc


def _hops(start: Resource, step) -> dict[Resource, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for n in step(r):
            if n not in dist:
                dist[n] = dist[r] + 1
                queue.append(n)
    del dist[start]
    return dist


class SddBuilder:
    """Builds documents for the elements of one hybrid graph.

    Base documents are cached and shared across equivalence partners
    (owl:equivalentClass, owl:equivalentProperty, owl:sameAs).
    """

    def __init__(self, g: HybridOntologyGraph, phi: Sequence[float] = DEFAULT_PHI, stopwords=None, blank_depth: int = 3):
        self.g = g
        self.phi = tuple(phi)
        self.stopwords = stopwords
        self.blank_depth = blank_depth
        self.idx = g.index
        self._base: dict[Resource, SDD] = {}
        self._partners = self._equivalence_classes()

    def _equivalence_classes(self) -> dict[Resource, frozenset[Resource]]:
        parent: dict[Resource, Resource] = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for p in (V.equivalentClass, V.equivalentProperty, V.sameAs):
            for a, b in self.idx.pairs(p):
                if a.is_iri and b.is_iri:
                    parent.setdefault(a, a)
                    parent.setdefault(b, b)
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        groups: dict[Resource, set[Resource]] = defaultdict(set)
        for x in list(parent):
            groups[find(x)].add(x)
        out = {}
        for members in groups.values():
            frozen = frozenset(members)
            for m in members:
                out[m] = frozen
        return out

    def base(self, e: Resource) -> SDD:
        doc = self._base.get(e)
        if doc is None:
            members = self._partners.get(e, (e,))
            doc = SDD(e)
            for m in sorted(members):
                doc.add(base_sdd(m, self.g.annotations, self.phi, self.stopwords))
            for m in members:
                self._base[m] = SDD(m, dict(doc.terms))
            doc = self._base.setdefault(e, doc)
        return SDD(e, dict(doc.terms))

    # -- blank nodes --------------------------------------------------------------------

    def blank(self, b: Resource, allowed: set[Resource] | None = None, depth_limit: int | None = None) -> SDD:
        """Document of a blank node from the statements around it.

        A statement first reached at hop distance d from ``b`` contributes
        with weight 1/d;
        the walk continues through neighbouring blank nodes and stops on a
        revisit or past ``depth_limit`` hops.
        """
        limit = self.blank_depth if depth_limit is None else depth_limit
        doc = SDD(b)
        if not b.is_blank:
            return doc
        ok = (lambda r: True) if allowed is None else (lambda r: r in allowed)
        visited = {b}
        seen: set = set()  # each statement counts once, at its nearest hop
        frontier = [b]
        dist = 1
        while frontier and dist <= limit:
            alpha = 1.0 / dist
            nxt = []
            for node in frontier:
                for t in self.idx.by_s.get(node, ()):
                    if t.key in seen:
                        continue
                    seen.add(t.key)
                    if ok(t.p):
                        doc.add(self.base(t.p), alpha)
                    if t.o.is_blank:
                        if t.o not in visited:
                            visited.add(t.o)
                            nxt.append(t.o)
                    elif ok(t.o):
                        doc.add(self.base(t.o), alpha)
                for t in self.idx.by_o.get(node, ()):
                    if t.key in seen:
                        continue
                    seen.add(t.key)
                    if ok(t.p):
                        doc.add(self.base(t.p), alpha)
                    if t.s.is_blank:
                        if t.s not in visited:
                            visited.add(t.s)
                            nxt.append(t.s)
                    elif ok(t.s):
                        doc.add(self.base(t.s), alpha)
            frontier = nxt
            dist += 1
        return doc

    # -- concepts and properties ----------------------------------------------------------

    def _is_concept(self, r: Resource) -> bool:
        return self.g.elements.get(r) is ElementKind.CONCEPT

    def concept(self, c: Resource, subgraph: SemanticSubgraph | None = None) -> SDD:
        """Base document plus hierarchy, sibling, domain/range-property and
        instance documents, restricted to elements of the subgraph."""
        allowed = subgraph.elements() if subgraph is not None else None
        ok = (lambda r: True) if allowed is None else (lambda r: r in allowed)
        idx = self.idx
        doc = self.base(c)

        parents = lambda r: [o for o in idx.objects(r, V.subClassOf) if self._is_concept(o)]
        children = lambda r: [s for s in idx.subjects(V.subClassOf, r) if self._is_concept(s)]
        for ci, d in sorted(_hops(c, parents).items()):
            if ok(ci):
                doc.add(self.base(ci), 1.0 / d)
        for ci, d in sorted(_hops(c, children).items()):
            if ok(ci):
                doc.add(self.base(ci), 1.0 / d)
        siblings = {s for p in parents(c) for s in children(p)} - {c}
        for ci in sorted(siblings):
            if ok(ci):
                doc.add(self.base(ci))
        for p in sorted(set(idx.subjects(V.domain, c)) | set(idx.subjects(V.range, c))):
            if ok(p):
                doc.add(self.base(p))
        for i in sorted(set(idx.subjects(V.type, c))):
            if ok(i) and not i.is_blank:
                doc.add(self.base(i))
        blanks = {t.o for t in idx.by_s.get(c, ()) if t.o.is_blank} | {t.s for t in idx.by_o.get(c, ()) if t.s.is_blank}
        for b in sorted(blanks):
            if ok(b):
                doc.add(self.blank(b, allowed))
        return doc

    def property(self, p: Resource, subgraph: SemanticSubgraph | None = None) -> SDD:
        """Base document plus the base documents of its domain and range elements."""
        allowed = subgraph.elements() if subgraph is not None else None
        ok = (lambda r: True) if allowed is None else (lambda r: r in allowed)
        doc = self.base(p)
        for rel in (V.domain, V.range):
            for e in sorted(set(self.idx.objects(p, rel))):
                if not ok(e):
                    continue
                if e.is_blank:
                    doc.add(self.blank(e, allowed))
                else:
                    doc.add(self.base(e))
        return doc

    def document(self, e: Resource, subgraph: SemanticSubgraph | None = None) -> SDD:
        kind = self.g.elements.get(e)
        if kind is ElementKind.CONCEPT:
            return self.concept(e, subgraph)
        if kind is ElementKind.PROPERTY:
            return self.property(e, subgraph)
        return self.base(e)


def concept_sdd(c: Resource, g: HybridOntologyGraph, subgraph: SemanticSubgraph | None = None, phi=DEFAULT_PHI) -> SDD:
    return SddBuilder(g, phi).concept(c, subgraph)


def property_sdd(p: Resource, g: HybridOntologyGraph, subgraph: SemanticSubgraph | None = None, phi=DEFAULT_PHI) -> SDD:
    return SddBuilder(g, phi).property(p, subgraph)


def blank_sdd(b: Resource, g: HybridOntologyGraph, depth_limit: int = 3, phi=DEFAULT_PHI) -> SDD:
    return SddBuilder(g, phi).blank(b, depth_limit=depth_limit)


# -- vector space -------------------------------------------------------------------------


def merge_vocabulary(tokens: Iterable[str], threshold: float = MERGE_THRESHOLD) -> dict[str, int]:
    """Assign tokens to slots; a token joins the first slot whose representative
    has normalized edit similarity above ``threshold``."""
    slots: dict[str, int] = {}
    reps_by_len: dict[int, list[tuple[str, int]]] = defaultdict(list)
    n_slots = 0
    for tok in sorted(set(tokens)):
        target = None
        n = len(tok)
        # sim > t needs |len difference| <= (1 - t) * longer length
        span = int((1 - threshold) * n / threshold) + 1
        for length in range(max(1, n - span), n + span + 1):
            for rep, slot in reps_by_len.get(length, ()):
                if edit_similarity(tok, rep) > threshold:
                    target = slot
                    break
            if target is not None:
                break
        if target is None:
            target = n_slots
            n_slots += 1
            reps_by_len[n].append((tok, target))
        slots[tok] = target
    return slots


@dataclass
class DocumentIndex:
    documents: list[SDD]
    vocabulary: dict[str, int]
    idf: list[float]
    vectors: dict[Resource, dict[int, float]]

    @property
    def dimension(self) -> int:
        return len(self.idf)

    def dense(self, e: Resource) -> list[float]:
        out = [0.0] * self.dimension
        for slot, v in self.vectors[e].items():
            out[slot] = v
        return out

    def similarity(self, a: Resource, b: Resource) -> float:
        return cosine(self.vectors[a], self.vectors[b])


def build_index(sdds: Sequence[SDD], threshold: float = MERGE_THRESHOLD) -> DocumentIndex:
    """TF-IDF vectors over a merged vocabulary.

    TF is the weighted mass of a slot in a document and IDF is
    log(N / df); a one-document index uses log((N+1)/(df+1)) + 1 instead so
    that its vector is not all zeros.
    """
    vocab = merge_vocabulary((t for d in sdds for t in d.terms), threshold)
    n_slots = max(vocab.values(), default=-1) + 1
    tfs: list[dict[int, float]] = []
    df = [0] * n_slots
    for d in sdds:
        tf: dict[int, float] = defaultdict(float)
        for tok, w in d.terms.items():
            tf[vocab[tok]] += w
        tf = {s: w for s, w in tf.items() if w > 0}
        for s in tf:
            df[s] += 1
        tfs.append(tf)
    n_docs = len(sdds)
    if n_docs == 1:
        idf = [math.log((n_docs + 1) / (c + 1)) + 1.0 for c in df]
    else:
        idf = [math.log(n_docs / c) if c else 0.0 for c in df]
    vectors = {}
    for d, tf in zip(sdds, tfs):
        vectors[d.element] = {s: w * idf[s] for s, w in tf.items() if w * idf[s] != 0.0}
    return DocumentIndex(list(sdds), vocab, idf, vectors)


def cosine(a, b) -> float:
    """Cosine of two vectors given as sequences or sparse ``{index: value}`` maps.

    Returns 0 when either vector is zero.
    """
    if isinstance(a, Mapping):
        if len(a) > len(b):
            a, b = b, a
        dot = sum(v * b.get(k, 0.0) for k, v in a.items())
        na = math.sqrt(sum(v * v for v in a.values()))
        nb = math.sqrt(sum(v * v for v in b.values()))
    else:
        if len(a) != len(b):
            raise ValueError("vectors differ in dimension")
        dot = sum(x * y for x, y in zip(a, b))
        na = math.sqrt(sum(x * x for x in a))
        nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 0.0
    return max(0.0, min(1.0, dot / (na * nb)))


# -- seeds -----------------------------------------------------------------------------------


@dataclass
class SeedAlignment:
    matrix: SimilarityMatrix
    credible: set[tuple[Resource, Resource]] = field(default_factory=set)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Resource, Resource]], confidence: float = 1.0) -> "SeedAlignment":
        pairs = list(pairs)
        return cls(SimilarityMatrix({p: confidence for p in pairs}), set(pairs))

    def with_external(self, correspondences: Iterable, credible_threshold: float = 0.9) -> "SeedAlignment":
        """Add correspondences from another source (objects with ``pair`` and
        ``confidence``). External credible pairs override computed credible
        pairs sharing a row or column with them."""
        matrix = self.matrix.copy()
        extra = set()
        for c in correspondences:
            matrix[c.pair] = max(matrix.get(c.pair, 0.0), c.confidence)
            if c.confidence >= credible_threshold:
                extra.add(c.pair)
        rows = {a for a, _ in extra}
        cols = {b for _, b in extra}
        kept = {(a, b) for a, b in self.credible if a not in rows and b not in cols}
        return SeedAlignment(matrix, kept | extra)


def mutual_best(matrix: SimilarityMatrix, threshold: float) -> set[tuple[Resource, Resource]]:
    """Pairs that are the maximum of both their row and column and reach ``threshold``.

    Ties prefer the lexicographically smaller partner.
    """
    best_row: dict[Resource, tuple[float, Resource]] = {}
    best_col: dict[Resource, tuple[float, Resource]] = {}
    for (a, b), v in matrix.items():
        cur = best_row.get(a)
        if cur is None or v > cur[0] or (v == cur[0] and b < cur[1]):
            best_row[a] = (v, b)
        cur = best_col.get(b)
        if cur is None or v > cur[0] or (v == cur[0] and a < cur[1]):
            best_col[b] = (v, a)
    out = set()
    for a, (v, b) in best_row.items():
        if v >= threshold and best_col[b][1] == a:
            out.add((a, b))
    return out


def _kind_pairs(gA: HybridOntologyGraph, gB: HybridOntologyGraph):
    for kind in (ElementKind.CONCEPT, ElementKind.PROPERTY):
        a_elems = [e for e in sorted(gA.elements) if gA.elements[e] is kind]
        b_elems = [e for e in sorted(gB.elements) if gB.elements[e] is kind]
        yield a_elems, b_elems


def compute_seeds(
    gA: HybridOntologyGraph,
    gB: HybridOntologyGraph,
    subgraphsA: Mapping[Resource, SemanticSubgraph] | None = None,
    subgraphsB: Mapping[Resource, SemanticSubgraph] | None = None,
    phi: Sequence[float] = DEFAULT_PHI,
    credible_threshold: float = 0.9,
    merge_threshold: float = MERGE_THRESHOLD,
) -> SeedAlignment:
    """Cosine similarity of the description documents of same-kind element pairs.

    Concepts are compared only with concepts and properties only with
    properties. Without subgraphs the documents are unconstrained.
    """
    builders = (SddBuilder(gA, phi), SddBuilder(gB, phi))
    docs: list[SDD] = []
    tagged: dict[tuple[int, Resource], SDD] = {}
    for side, (g, subgraphs, builder) in enumerate(zip((gA, gB), (subgraphsA, subgraphsB), builders)):
        for e in g.concepts() + g.properties():
            sub = subgraphs.get(e) if subgraphs is not None else None
            d = builder.document(e, sub)
            # same IRI may exist in both ontologies: keep the documents apart
            d = SDD(Resource(e.kind, e.value, f"#{side}"), d.terms)
            tagged[(side, e)] = d
            docs.append(d)
    matrix = SimilarityMatrix()
    if docs:
        index = build_index(docs, merge_threshold)
        for a_elems, b_elems in _kind_pairs(gA, gB):
            for a in a_elems:
                va = index.vectors[tagged[(0, a)].element]
                if not va:
                    continue
                for b in b_elems:
                    sim = cosine(va, index.vectors[tagged[(1, b)].element])
                    if sim > 0:
                        matrix[(a, b)] = sim
    return SeedAlignment(matrix, mutual_best(matrix, credible_threshold))
