"""Ontology graphs: loading, the three processing phases and hybridization."""

from __future__ import annotations

import enum
import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import CyclicList
from .rdf import Kind, Origin, Resource, Triple, V, is_member_predicate, parse_ntriples, serialize_ntriples

log = logging.getLogger(__name__)


class ElementKind(str, enum.Enum):
    CONCEPT = "concept"
    PROPERTY = "property"
    INSTANCE = "instance"


CLASS_TYPES = {V.Class, V.RdfsClass, V.Restriction}
PROPERTY_TYPES = {
    V.Property,
    V.ObjectProperty,
    V.DatatypeProperty,
    V.FunctionalProperty,
    V.InverseFunctionalProperty,
    V.SymmetricProperty,
    V.TransitiveProperty,
}
CONTAINER_TYPES = {V.Bag, V.Seq, V.Alt}
ANNOTATION_PREDICATES = {V.label, V.comment, V.seeAlso, V.isDefinedBy}
VERSION_PREDICATES = {V.versionInfo, V.versionIRI, V.priorVersion, V.backwardCompatibleWith, V.incompatibleWith}


class StatementIndex:
    """Subject/predicate/object lookup tables over a list of triples."""

    def __init__(self, triples: Iterable[Triple]):
        self.triples = list(triples)
        self.by_s: dict[Resource, list[Triple]] = defaultdict(list)
        self.by_p: dict[Resource, list[Triple]] = defaultdict(list)
        self.by_o: dict[Resource, list[Triple]] = defaultdict(list)
        for t in self.triples:
            self.by_s[t.s].append(t)
            self.by_p[t.p].append(t)
            self.by_o[t.o].append(t)

    def objects(self, s: Resource, p: Resource) -> list[Resource]:
        return [t.o for t in self.by_s.get(s, ()) if t.p == p]

    def subjects(self, p: Resource, o: Resource) -> list[Resource]:
        return [t.s for t in self.by_o.get(o, ()) if t.p == p]

    def pairs(self, p: Resource) -> list[tuple[Resource, Resource]]:
        return [(t.s, t.o) for t in self.by_p.get(p, ())]


@dataclass
class OntologyGraph:
    """Raw ontology graph: a multigraph of statements plus side tables.

    ``annotations`` keeps label/comment/other annotation text per resource so
    that it survives refinement; ``elements`` classifies the concepts,
    properties and instances declared by the source file.
    """

    triples: list[Triple]
    annotations: dict[Resource, dict[str, list[str]]] = field(default_factory=dict)
    elements: dict[Resource, ElementKind] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    name: str = ""

    @property
    def is_empty(self) -> bool:
        return not self.triples

    @cached_property
    def vertices(self) -> set[Resource]:
        out = set()
        for t in self.triples:
            out.add(t.s)
            out.add(t.o)
        return out

    @cached_property
    def index(self) -> StatementIndex:
        return StatementIndex(self.triples)

    def with_triples(self, triples: list[Triple]) -> "OntologyGraph":
        return OntologyGraph(triples, self.annotations, self.elements, list(self.warnings), self.name)

    def serialize(self) -> str:
        return serialize_ntriples(self.triples)

    def __len__(self) -> int:
        return len(self.triples)


# -- loading -------------------------------------------------------------------


def _collect_annotations(triples: list[Triple]) -> dict[Resource, dict[str, list[str]]]:
    annotation_props = {t.s for t in triples if t.p == V.type and t.o == V.AnnotationProperty}
    table: dict[Resource, dict[str, list[str]]] = {}
    for t in triples:
        if t.p == V.label:
            slot = "label"
        elif t.p == V.comment:
            slot = "comment"
        elif t.p in ANNOTATION_PREDICATES or t.p in annotation_props:
            slot = "other"
        else:
            continue
        text = t.o.value if t.o.is_literal else t.o.local_name
        if text:
            table.setdefault(t.s, {}).setdefault(slot, []).append(text)
    return table


def classify_elements(triples: list[Triple]) -> dict[Resource, ElementKind]:
    """Classify IRIs declared or used by the statements as concept/property/instance."""
    concepts: set[Resource] = set()
    properties: set[Resource] = set()
    instances: set[Resource] = set()
    annotation_props: set[Resource] = set()
    for t in triples:
        if t.p == V.type:
            if t.o in CLASS_TYPES:
                concepts.add(t.s)
            elif t.o in PROPERTY_TYPES:
                properties.add(t.s)
            elif t.o == V.AnnotationProperty:
                annotation_props.add(t.s)
            elif t.o == V.NamedIndividual:
                instances.add(t.s)
            elif not t.o.is_primitive:
                concepts.add(t.o)
                instances.add(t.s)
        elif t.p in (V.subClassOf, V.equivalentClass):
            concepts.update((t.s, t.o))
        elif t.p in (V.subPropertyOf, V.equivalentProperty):
            properties.update((t.s, t.o))
        elif t.p in (V.domain, V.range):
            properties.add(t.s)
            if t.p == V.domain or not t.o.is_primitive:
                concepts.add(t.o)
        elif not t.p.is_primitive:
            properties.add(t.p)
    for t in triples:
        # the annotation table handles custom annotation properties
        if t.p in annotation_props:
            properties.discard(t.p)
    kinds: dict[Resource, ElementKind] = {}
    for r in instances:
        kinds[r] = ElementKind.INSTANCE
    for r in concepts:
        kinds[r] = ElementKind.CONCEPT
    for r in properties:
        kinds[r] = ElementKind.PROPERTY
    return {r: k for r, k in kinds.items() if r.is_iri and not r.is_primitive and r not in annotation_props}


def graph_from_triples(triples: Iterable[Triple], name: str = "") -> OntologyGraph:
    triples = list(triples)
    g = OntologyGraph(triples, _collect_annotations(triples), classify_elements(triples), name=name)
    if not triples:
        g.warnings.append("empty ontology")
        log.warning("ontology %s contains no triples", name or "<memory>")
    return g


def load_ontology(path: str | os.PathLike, format: str = "ntriples") -> OntologyGraph:
    """Read an N-Triples file into a raw ontology graph.

    Raises ``MalformedLine`` on the first unparseable line. An empty file
    loads as an empty graph carrying a warning.
    """
    if format not in ("ntriples", "nt"):
        raise ValueError(f"unsupported format {format!r}")
    with open(path, encoding="utf-8") as fh:
        triples = list(parse_ntriples(fh))
    return graph_from_triples(triples, name=os.fspath(path))


def parse_ontology(text: str, name: str = "") -> OntologyGraph:
    return graph_from_triples(parse_ntriples(text.splitlines()), name=name)


# -- phase 1: containers and collections -----------------------------------------


def _walk_list(head: Resource, idx: StatementIndex) -> tuple[list[Resource], list[Triple]] | None:
    members: list[Resource] = []
    structure: list[Triple] = []
    seen: set[Resource] = set()
    node = head
    while node != V.nil:
        if node in seen:
            raise CyclicList(head.value)
        seen.add(node)
        node_triples = idx.by_s.get(node, [])
        firsts = [t for t in node_triples if t.p == V.first]
        rests = [t for t in node_triples if t.p == V.rest]
        if not firsts and not rests:
            break
        members.extend(t.o for t in firsts)
        structure.extend(t for t in node_triples if t.p in (V.first, V.rest) or (t.p == V.type and t.o == V.List))
        if not rests:
            break
        node = rests[0].o
    return members, structure


def expand_containers(g: OntologyGraph) -> OntologyGraph:
    """Replace rdf:Bag/Seq/Alt containers and rdf:List chains by direct statements.

    A statement ``<s p c>`` pointing at a blank container or list head ``c``
    becomes one ``<s p m>`` per member ``m``; the container's own triples
    are dropped. Cyclic lists are left as they are and reported in
    ``warnings``.
    """
    idx = g.index
    expansions: dict[Resource, list[Resource]] = {}
    drop: set[int] = set()

    for node, node_triples in idx.by_s.items():
        if not node.is_blank:
            continue
        typed = any(t.p == V.type and t.o in CONTAINER_TYPES for t in node_triples)
        members = sorted(
            ((int(t.p.value.rsplit("_", 1)[1]), t) for t in node_triples if is_member_predicate(t.p)),
            key=lambda x: x[0],
        )
        if typed or members:
            expansions[node] = [t.o for _, t in members]
            drop.update(
                id(t) for t in node_triples if is_member_predicate(t.p) or (t.p == V.type and t.o in CONTAINER_TYPES)
            )

    warnings = list(g.warnings)
    for t in idx.by_p.get(V.first, ()):
        head = t.s
        if not head.is_blank or head in expansions:
            continue
        # a list head is a list node referenced by something other than rdf:rest
        if not any(r.p != V.rest for r in idx.by_o.get(head, ())):
            continue
        try:
            walked = _walk_list(head, idx)
        except CyclicList as exc:
            warnings.append(str(exc))
            log.warning("%s", exc)
            continue
        members, structure = walked
        expansions[head] = members
        drop.update(id(x) for x in structure)

    if not expansions:
        out = g.with_triples(list(g.triples))
        out.warnings = warnings
        return out

    triples: list[Triple] = []
    for t in g.triples:
        if id(t) in drop:
            continue
        if t.o in expansions and t.o.is_blank:
            triples.extend(Triple(t.s, t.p, m, t.origin) for m in expansions[t.o])
            continue
        triples.append(t)
    out = g.with_triples(triples)
    out.warnings = warnings
    return out


# -- phase 2: enrichment -----------------------------------------------------------


def _enrichment_round(triples: list[Triple]) -> list[tuple[Resource, Resource, Resource]]:
    idx = StatementIndex(triples)
    new: list[tuple[Resource, Resource, Resource]] = []
    add = new.append

    # step 1: sub-properties inherit domain and range
    for sub, sup in idx.pairs(V.subPropertyOf):
        for p in (V.domain, V.range):
            for c in idx.objects(sup, p):
                add((sub, p, c))

    # step 2: concept axioms
    equiv: dict[Resource, set[Resource]] = defaultdict(set)
    for a, b in idx.pairs(V.equivalentClass):
        equiv[a].add(b)
        equiv[b].add(a)
        if a.is_iri and b.is_iri and a != b:
            add((a, V.subClassOf, b))
            add((b, V.subClassOf, a))
    for x, part in idx.pairs(V.intersectionOf):
        # X = A n B ... : X and anything equivalent to or below X sits below A
        for c in {x, *equiv.get(x, ()), *idx.subjects(V.subClassOf, x)}:
            if c != part and not c.is_literal:
                add((c, V.subClassOf, part))
    for x, part in idx.pairs(V.unionOf):
        # X = A u B ... : each part sits below X and below whatever X is equivalent to or below
        for c in {x, *equiv.get(x, ()), *idx.objects(x, V.subClassOf)}:
            if c != part and not part.is_literal:
                add((part, V.subClassOf, c))
    for x, member in idx.pairs(V.oneOf):
        for c in {x, *equiv.get(x, ())}:
            if not member.is_literal:
                add((member, V.type, c))

    # step 3: property axioms
    typed = defaultdict(set)
    for s, o in idx.pairs(V.type):
        typed[o].add(s)
    for p in typed[V.SymmetricProperty]:
        for s, o in idx.pairs(p):
            if not o.is_literal:
                add((o, p, s))
    for p in typed[V.TransitiveProperty]:
        succ: dict[Resource, set[Resource]] = defaultdict(set)
        for s, o in idx.pairs(p):
            succ[s].add(o)
        for a, bs in succ.items():
            for b in bs:
                for c in succ.get(b, ()):
                    add((a, p, c))
    for p, q in idx.pairs(V.equivalentProperty):
        for s, o in idx.pairs(p):
            add((s, q, o))
        for s, o in idx.pairs(q):
            add((s, p, o))

    # step 4: owl:sameAs resources share statements
    for a, b in idx.pairs(V.sameAs):
        if a == b:
            continue
        for x, y in ((a, b), (b, a)):
            for t in idx.by_s.get(x, ()):
                if t.p != V.sameAs:
                    add((y, t.p, t.o))
            for t in idx.by_o.get(x, ()):
                if t.p != V.sameAs and not y.is_literal:
                    add((t.s, t.p, y))

    # step 5: sub-concepts inherit domain attachments
    for p, c in idx.pairs(V.domain):
        for sub in idx.subjects(V.subClassOf, c):
            if sub != c:
                add((p, V.domain, sub))
    return new


def enrich_graph(g: OntologyGraph) -> OntologyGraph:
    """Apply the five enrichment rules until no new statement appears.

    New statements are appended with ``Origin.ENRICHED``; existing ones are
    never touched, so the result is a superset of the input.
    """
    triples = list(g.triples)
    seen = {t.key for t in triples}
    while True:
        added = []
        for key in _enrichment_round(triples):
            if key not in seen and not key[0].is_literal:
                seen.add(key)
                added.append(Triple(*key, origin=Origin.ENRICHED))
        if not added:
            break
        triples.extend(added)
    return g.with_triples(triples)


# -- phase 3: refinement ------------------------------------------------------------


def _removable(t: Triple, headers: set[Resource]) -> bool:
    if t.p in ANNOTATION_PREDICATES or t.p in VERSION_PREDICATES or t.p == V.imports:
        return True
    if t.p == V.type and t.o.is_primitive:
        return True
    if V.Thing in (t.s, t.o) or V.Nothing in (t.s, t.o):
        return True
    if t.s in headers and (t.p.is_primitive or t.o.is_primitive):
        return True
    return False


def refine_graph(g: OntologyGraph) -> OntologyGraph:
    """Drop annotation, header, version, metamodel-typing and Thing/Nothing statements.

    Statements built only from non-primitive terms are always kept; their
    annotation text is already available from the side table.
    """
    headers = {t.s for t in g.triples if t.p == V.type and t.o == V.Ontology}
    return g.with_triples([t for t in g.triples if not _removable(t, headers)])


def process(g: OntologyGraph) -> OntologyGraph:
    return refine_graph(enrich_graph(expand_containers(g)))


# -- hybrid graph ---------------------------------------------------------------------


@dataclass
class HybridOntologyGraph:
    """Processed graph where parallel statements between one ordered vertex
    pair are kept as a single direct edge plus reification trios.

    ``reified`` maps each trio node to the statement it stands for.
    """

    triples: list[Triple]
    reified: dict[Resource, Triple]
    elements: dict[Resource, ElementKind]
    annotations: dict[Resource, dict[str, list[str]]]
    degree: Counter
    source: list[Triple]
    name: str = ""

    @cached_property
    def vertices(self) -> set[Resource]:
        out = set()
        for t in self.triples:
            out.add(t.s)
            out.add(t.o)
        return out

    @cached_property
    def index(self) -> StatementIndex:
        """Index over the reconverted statements, used for hierarchy queries."""
        return StatementIndex(self.statements())

    @cached_property
    def hybrid_index(self) -> StatementIndex:
        return StatementIndex(self.triples)

    def statements(self) -> list[Triple]:
        """Reconvert the trios: returns the processed statement multiset."""
        out: list[Triple] = []
        emitted: set[Resource] = set()
        for t in self.triples:
            if t.origin is Origin.BIPARTITE:
                node = t.s
                if node not in emitted:
                    emitted.add(node)
                    out.append(self.reified[node])
            else:
                out.append(t)
        return out

    def kind_of(self, r: Resource) -> str:
        k = self.elements.get(r)
        if k is not None:
            return k.value
        if r in self.reified:
            return "statement"
        if r.is_primitive:
            return "primitive"
        return r.kind.value

    def concepts(self) -> list[Resource]:
        return sorted(r for r, k in self.elements.items() if k is ElementKind.CONCEPT)

    def properties(self) -> list[Resource]:
        return sorted(r for r, k in self.elements.items() if k is ElementKind.PROPERTY)

    def instances(self) -> list[Resource]:
        return sorted(r for r, k in self.elements.items() if k is ElementKind.INSTANCE)

    def __len__(self) -> int:
        return len(self.triples)


def build_hybrid_graph(g: OntologyGraph) -> HybridOntologyGraph:
    """Reify all but one of the parallel edges between each ordered vertex pair.

    The edge kept direct is the one whose predicate IRI sorts first.
    """
    groups: dict[tuple[Resource, Resource], list[int]] = defaultdict(list)
    for i, t in enumerate(g.triples):
        groups[(t.s, t.o)].append(i)

    reify_at: set[int] = set()
    for members in groups.values():
        if len(members) > 1:
            ordered = sorted(members, key=lambda i: (g.triples[i].p.value, i))
            reify_at.update(ordered[1:])

    taken = {r.value for r in g.vertices if r.is_blank}
    counter = 0
    reified: dict[Resource, Triple] = {}
    triples: list[Triple] = []
    for i, t in enumerate(g.triples):
        if i not in reify_at:
            triples.append(t)
            continue
        while f"stmt{counter}" in taken:
            counter += 1
        node = Resource(Kind.BLANK, f"stmt{counter}")
        counter += 1
        reified[node] = t
        triples.append(Triple(node, V.S, t.s, Origin.BIPARTITE))
        triples.append(Triple(node, V.P, t.p, Origin.BIPARTITE))
        triples.append(Triple(node, V.O, t.o, Origin.BIPARTITE))

    degree: Counter = Counter()
    for t in triples:
        degree[t.s] += 1
        degree[t.o] += 1
    elements = {r: k for r, k in g.elements.items()}
    return HybridOntologyGraph(triples, reified, elements, g.annotations, degree, list(g.triples), g.name)


def build_graph(g: OntologyGraph) -> HybridOntologyGraph:
    """Run the three processing phases and hybridize."""
    return build_hybrid_graph(process(g))


def phase_sizes(g: OntologyGraph) -> dict[str, int]:
    """Graph size after each processing step, as reported by ``--stats``."""
    p1 = expand_containers(g)
    p2 = enrich_graph(p1)
    p3 = refine_graph(p2)
    h = build_hybrid_graph(p3)
    return {"raw": len(g), "phase1": len(p1), "phase2": len(p2), "phase3": len(p3), "hybrid": len(h)}
