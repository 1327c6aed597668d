"""Synthetic ontologies and label scrambling for desk-scale matching benchmarks."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .alignment import Alignment
from .errors import DomainError
from .ontology import ANNOTATION_PREDICATES, OntologyGraph, graph_from_triples
from .rdf import Resource, Triple, V

NOUNS = """
paper author review conference person organization event document topic session
chair committee member student professor university department journal article
volume issue publisher editor abstract keyword presentation workshop tutorial
track program deadline submission decision reviewer report slot room venue city
country address sponsor fee registration attendee speaker invitation proceedings
chapter section figure table reference citation award prize grant project fund
meeting seminar lecture course thesis degree laboratory group team role position
contact email phone website library collection book series record catalog
""".split()

VERBS = "has writes reviews organizes attends presents submits chairs belongs cites funds hosts includes describes assigns".split()


def _camel(words, upper=True):
    parts = [w.capitalize() for w in words]
    if not upper:
        parts[0] = words[0]
    return "".join(parts)


@dataclass
class SyntheticOntology:
    graph: OntologyGraph
    concepts: list[Resource]
    properties: list[Resource]
    instances: list[Resource]


def generate_ontology(seed: int = 0, n_concepts: int = 30, n_properties: int = 20, instances_per_concept: float = 1.5,
                      assertions_per_property: int = 3, max_children: int = 3, base: str = "http://example.org/onto#") -> SyntheticOntology:
    """Random ontology with a subclass forest, object properties with domain
    and range, typed instances and property assertions between them.

    Every element carries an English label and comment built from its name.
    """
    rng = random.Random(seed)
    ns = lambda name: Resource.iri(base + name)
    names: set[str] = set()

    def fresh(make):
        for _ in range(1000):
            n = make()
            if n not in names:
                names.add(n)
                return n
        raise DomainError("name space exhausted")

    concepts = [ns(fresh(lambda: _camel(rng.sample(NOUNS, rng.choice((1, 2)))))) for _ in range(n_concepts)]
    triples: list[Triple] = []
    add = lambda s, p, o: triples.append(Triple(s, p, o))

    def describe(r: Resource, words: str):
        add(r, V.label, Resource.literal(words))
        add(r, V.comment, Resource.literal(f"the {words} of the {rng.choice(NOUNS)}"))

    parent: dict[Resource, Resource] = {}
    n_children = {c: 0 for c in concepts}
    for i, c in enumerate(concepts):
        add(c, V.type, V.Class)
        describe(c, " ".join(_split(c.local_name)))
        open_parents = [x for x in concepts[:i] if n_children[x] < max_children]
        if open_parents and rng.random() < 0.8:
            p = rng.choice(open_parents)
            parent[c] = p
            n_children[p] += 1
            add(c, V.subClassOf, p)

    properties = []
    signature = {}
    for _ in range(n_properties):
        name = fresh(lambda: _camel([rng.choice(VERBS), rng.choice(NOUNS)], upper=False))
        p = ns(name)
        properties.append(p)
        dom, rng_c = rng.choice(concepts), rng.choice(concepts)
        signature[p] = (dom, rng_c)
        add(p, V.type, V.ObjectProperty)
        add(p, V.domain, dom)
        add(p, V.range, rng_c)
        describe(p, " ".join(_split(name)))
    for _ in range(max(0, n_properties // 5)):
        a, b = rng.sample(properties, 2)
        if b not in parent and a != b:
            add(a, V.subPropertyOf, b)

    instances = []
    instance_class = []
    members: dict[Resource, list[Resource]] = {c: [] for c in concepts}
    n_inst = int(round(instances_per_concept * n_concepts))
    for i in range(n_inst):
        c = concepts[i % n_concepts] if i < n_concepts else rng.choice(concepts)
        inst = ns(fresh(lambda: f"{c.local_name.lower()}{rng.randrange(1000)}"))
        instances.append(inst)
        instance_class.append(c)
        members[c].append(inst)
        add(inst, V.type, c)
        add(inst, V.label, Resource.literal(" ".join(_split(c.local_name)) + f" {len(members[c])}"))
    children: dict[Resource, list[Resource]] = {c: [] for c in concepts}
    for c, p in parent.items():
        children[p].append(c)

    def closure(c):
        out, stack = [], [c]
        while stack:
            x = stack.pop()
            out.extend(members[x])
            stack.extend(children[x])
        return out

    def ancestors(c):
        out = [c]
        while out[-1] in parent:
            out.append(parent[out[-1]])
        return out

    used: set[Resource] = set()

    def assert_(s, p, o):
        add(s, p, o)
        used.update((s, o))

    for p in properties:
        dom, rng_c = signature[p]
        subj, obj = closure(dom), closure(rng_c)
        if not subj or not obj:
            continue
        for _ in range(assertions_per_property):
            assert_(rng.choice(subj), p, rng.choice(obj))
    # every instance gets at least one property value where the schema allows it
    for inst, c in zip(instances, instance_class):
        if inst in used:
            continue
        up = set(ancestors(c))
        as_subject = [p for p in properties if signature[p][0] in up and closure(signature[p][1])]
        as_object = [p for p in properties if signature[p][1] in up and closure(signature[p][0])]
        if as_subject:
            p = rng.choice(as_subject)
            assert_(inst, p, rng.choice(closure(signature[p][1])))
        elif as_object:
            p = rng.choice(as_object)
            assert_(rng.choice(closure(signature[p][0])), p, inst)

    header = Resource.iri(base.rstrip("#/"))
    add(header, V.type, V.Ontology)
    add(header, V.comment, Resource.literal("synthetic test ontology"))
    g = graph_from_triples(list(dict.fromkeys(triples)), name=base)
    return SyntheticOntology(g, concepts, properties, instances)


def _split(name: str) -> list[str]:
    from .text import tokenize
    return tokenize(name)


@dataclass(frozen=True)
class ScrambleSpec:
    seed: int = 0
    label_scramble_rate: float = 1.0
    comment_drop_rate: float = 1.0
    structure_preserved: bool = True
    namespace: str | None = None

    def __post_init__(self):
        for name in ("label_scramble_rate", "comment_drop_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v}")


def _random_word(rng: random.Random, taken: set[str]) -> str:
    while True:
        w = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(6, 9)))
        if w not in taken:
            taken.add(w)
            return w


def scramble(g: OntologyGraph, spec: ScrambleSpec = ScrambleSpec()) -> tuple[OntologyGraph, Alignment]:
    """Rename local names and labels to random strings and drop comments.

    Each non-primitive IRI is renamed with probability
    ``label_scramble_rate`` (its labels and literal values follow it), each
    comment is dropped with probability ``comment_drop_rate`` and blank nodes
    get fresh ids. With ``structure_preserved`` every other triple is kept,
    so the result is isomorphic to the input. Returns the scrambled graph and
    the ground-truth alignment of concepts and properties.
    """
    rng = random.Random(spec.seed)
    taken: set[str] = set()
    rename: dict[Resource, Resource] = {}
    literal_map: dict[Resource, Resource] = {}
    blank_map: dict[Resource, Resource] = {}
    scrambled: set[Resource] = set()

    def term(r: Resource) -> Resource:
        if r.is_blank:
            if r not in blank_map:
                blank_map[r] = Resource.blank(f"b{len(blank_map)}")
            return blank_map[r]
        if r.is_iri and not r.is_primitive:
            if r not in rename:
                base = r.value[: len(r.value) - len(r.local_name)]
                if spec.namespace is not None:
                    base = spec.namespace
                if rng.random() < spec.label_scramble_rate:
                    scrambled.add(r)
                    rename[r] = Resource.iri(base + _random_word(rng, taken))
                else:
                    rename[r] = Resource.iri(base + r.local_name)
            return rename[r]
        if r.is_literal and spec.label_scramble_rate > 0:
            if r not in literal_map:
                if rng.random() < spec.label_scramble_rate:
                    literal_map[r] = Resource(r.kind, _random_word(rng, taken), r.suffix if r.suffix.startswith("^^") else "")
                else:
                    literal_map[r] = r
            return literal_map[r]
        return r

    out: list[Triple] = []
    for t in g.triples:
        if t.p == V.comment and rng.random() < spec.comment_drop_rate:
            continue
        s, p = term(t.s), term(t.p)
        if t.p in ANNOTATION_PREDICATES and t.o.is_literal:
            subject_scrambled = t.s in scrambled
            if subject_scrambled or rng.random() < spec.label_scramble_rate:
                o = Resource.literal(_random_word(rng, taken))
            else:
                o = t.o
        else:
            o = term(t.o)
        if not spec.structure_preserved and rng.random() < 0.1:
            continue
        out.append(Triple(s, p, o, t.origin))
    scrambled_graph = graph_from_triples(out, name=(g.name or "") + "#scrambled")
    truth = Alignment.from_pairs(
        (e, rename[e]) for e in sorted(g.elements) if g.elements[e].value in ("concept", "property") and e in rename
    )
    return scrambled_graph, truth
