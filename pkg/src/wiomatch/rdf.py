"""RDF terms, statements and a line-oriented N-Triples reader/writer.

Only the subset needed for ontology files is supported: absolute IRIs in
angle brackets (with ``rdf:``/``rdfs:``/``owl:``/``xsd:`` prefixed names
accepted inside the brackets), quoted literals with an optional language
tag or datatype, and ``_:`` blank nodes.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import MalformedLine

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
# namespace of the reification predicates introduced by the hybrid graph
REIFY = "urn:wiomatch:reify#"

PREFIXES = {"rdf": RDF, "rdfs": RDFS, "owl": OWL, "xsd": XSD}
PRIMITIVE_NAMESPACES = (RDF, RDFS, OWL, XSD, REIFY)


class Kind(str, enum.Enum):
    IRI = "iri"
    LITERAL = "literal"
    BLANK = "blank"


class Origin(str, enum.Enum):
    SOURCE = "source"
    ENRICHED = "enriched"
    BIPARTITE = "bipartite"


class Resource(NamedTuple):
    """An IRI, literal or blank node.

    ``suffix`` only applies to literals and holds the raw ``@lang`` or
    ``^^<datatype>`` marker so that serialization is lossless.
    """

    kind: Kind
    value: str
    suffix: str = ""

    @classmethod
    def iri(cls, value: str) -> "Resource":
        return cls(Kind.IRI, expand_iri(value))

    @classmethod
    def literal(cls, value: str, suffix: str = "") -> "Resource":
        return cls(Kind.LITERAL, value, suffix)

    @classmethod
    def blank(cls, value: str) -> "Resource":
        return cls(Kind.BLANK, value)

    @property
    def is_iri(self) -> bool:
        return self.kind is Kind.IRI

    @property
    def is_literal(self) -> bool:
        return self.kind is Kind.LITERAL

    @property
    def is_blank(self) -> bool:
        return self.kind is Kind.BLANK

    @property
    def is_primitive(self) -> bool:
        return self.kind is Kind.IRI and self.value.startswith(PRIMITIVE_NAMESPACES)

    @property
    def local_name(self) -> str:
        if self.kind is not Kind.IRI:
            return self.value if self.kind is Kind.BLANK else ""
        return local_name(self.value)

    def n3(self) -> str:
        if self.kind is Kind.IRI:
            return f"<{self.value}>"
        if self.kind is Kind.BLANK:
            return f"_:{self.value}"
        return f'"{escape_literal(self.value)}"{self.suffix}'

    def __str__(self) -> str:
        return self.n3()


def expand_iri(value: str) -> str:
    prefix, sep, rest = value.partition(":")
    if sep and prefix in PREFIXES and not rest.startswith("//"):
        return PREFIXES[prefix] + rest
    return value


def local_name(iri: str) -> str:
    for sep in ("#", "/", ":"):
        idx = iri.rfind(sep)
        if idx >= 0 and idx < len(iri) - 1:
            return iri[idx + 1 :]
    return iri


@dataclass(frozen=True, slots=True)
class Triple:
    s: Resource
    p: Resource
    o: Resource
    origin: Origin = field(default=Origin.SOURCE, compare=False)

    @property
    def key(self) -> tuple[Resource, Resource, Resource]:
        return (self.s, self.p, self.o)

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."


def uri(ns: str, name: str) -> Resource:
    return Resource(Kind.IRI, ns + name)


class V:
    """Vocabulary terms used by the graph processing phases."""

    type = uri(RDF, "type")
    first = uri(RDF, "first")
    rest = uri(RDF, "rest")
    nil = uri(RDF, "nil")
    Bag = uri(RDF, "Bag")
    Seq = uri(RDF, "Seq")
    Alt = uri(RDF, "Alt")
    List = uri(RDF, "List")
    Property = uri(RDF, "Property")

    subClassOf = uri(RDFS, "subClassOf")
    subPropertyOf = uri(RDFS, "subPropertyOf")
    domain = uri(RDFS, "domain")
    range = uri(RDFS, "range")
    label = uri(RDFS, "label")
    comment = uri(RDFS, "comment")
    seeAlso = uri(RDFS, "seeAlso")
    isDefinedBy = uri(RDFS, "isDefinedBy")
    RdfsClass = uri(RDFS, "Class")
    Datatype = uri(RDFS, "Datatype")

    Class = uri(OWL, "Class")
    Thing = uri(OWL, "Thing")
    Nothing = uri(OWL, "Nothing")
    Ontology = uri(OWL, "Ontology")
    ObjectProperty = uri(OWL, "ObjectProperty")
    DatatypeProperty = uri(OWL, "DatatypeProperty")
    AnnotationProperty = uri(OWL, "AnnotationProperty")
    FunctionalProperty = uri(OWL, "FunctionalProperty")
    InverseFunctionalProperty = uri(OWL, "InverseFunctionalProperty")
    SymmetricProperty = uri(OWL, "SymmetricProperty")
    TransitiveProperty = uri(OWL, "TransitiveProperty")
    NamedIndividual = uri(OWL, "NamedIndividual")
    Restriction = uri(OWL, "Restriction")
    intersectionOf = uri(OWL, "intersectionOf")
    unionOf = uri(OWL, "unionOf")
    oneOf = uri(OWL, "oneOf")
    equivalentClass = uri(OWL, "equivalentClass")
    equivalentProperty = uri(OWL, "equivalentProperty")
    sameAs = uri(OWL, "sameAs")
    versionInfo = uri(OWL, "versionInfo")
    versionIRI = uri(OWL, "versionIRI")
    priorVersion = uri(OWL, "priorVersion")
    backwardCompatibleWith = uri(OWL, "backwardCompatibleWith")
    incompatibleWith = uri(OWL, "incompatibleWith")
    DeprecatedClass = uri(OWL, "DeprecatedClass")
    DeprecatedProperty = uri(OWL, "DeprecatedProperty")
    imports = uri(OWL, "imports")

    S = uri(REIFY, "S")
    P = uri(REIFY, "P")
    O = uri(REIFY, "O")


def is_member_predicate(p: Resource) -> bool:
    """True for the container membership properties ``rdf:_1``, ``rdf:_2`` ..."""
    return p.kind is Kind.IRI and p.value.startswith(RDF + "_") and p.value[len(RDF) + 1 :].isdigit()


# -- parsing -----------------------------------------------------------------

_IRI = r"<([^<>\"{}|^`\\\s]*)>"
_BLANK = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?)"
_LITERAL = r'"((?:[^"\\]|\\.)*)"((?:@[A-Za-z]+(?:-[A-Za-z0-9]+)*)|(?:\^\^<[^<>\s]*>))?'
_TERM = rf"(?:{_IRI}|{_BLANK}|{_LITERAL})"
_LINE = re.compile(rf"\s*{_TERM}\s+{_TERM}\s+{_TERM}\s*\.\s*(?:#.*)?")

_UNESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)")


def unescape_literal(text: str) -> str:
    def sub(m: re.Match) -> str:
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            return chr(int(code[1:], 16))
        return _UNESCAPES.get(code, code)

    return _ESCAPE_RE.sub(sub, text)


_SHORT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_literal(text: str) -> str:
    """Escape for a one-line literal; other control characters and Unicode
    line separators become ``\\uXXXX`` so line splitting never breaks a literal."""
    out = []
    for ch in text:
        if ch in _SHORT_ESCAPES:
            out.append(_SHORT_ESCAPES[ch])
        elif ord(ch) < 0x20 or 0x7F <= ord(ch) <= 0x9F or ch in "\u2028\u2029":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _term(groups: tuple, offset: int) -> Resource:
    iri, blank, lit, suffix = groups[offset : offset + 4]
    if iri is not None:
        return Resource.iri(iri)
    if blank is not None:
        return Resource.blank(blank)
    suffix = suffix or ""
    if suffix.startswith("^^<"):
        suffix = "^^<" + expand_iri(suffix[3:-1]) + ">"
    return Resource.literal(unescape_literal(lit), suffix)


def parse_line(line: str, lineno: int) -> Triple | None:
    """Parse one line; returns None for blank and comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    m = _LINE.fullmatch(line.rstrip("\r\n"))
    if m is None:
        raise MalformedLine(lineno, stripped)
    g = m.groups()
    s, p, o = _term(g, 0), _term(g, 4), _term(g, 8)
    if s.is_literal or not p.is_iri:
        raise MalformedLine(lineno, stripped)
    return Triple(s, p, o)


def parse_ntriples(lines: Iterable[str]) -> Iterator[Triple]:
    for lineno, line in enumerate(lines, start=1):
        t = parse_line(line, lineno)
        if t is not None:
            yield t


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(t.n3() + "\n" for t in triples)
