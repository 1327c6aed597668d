"""Weak informative element and ontology detection."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, EmptyLexicon
from .ontology import ElementKind
from .rdf import Resource
from .text import tokenize


@dataclass(frozen=True)
class ElementWio:
    word_count: int
    lexicon_hits: int
    is_weak: bool


@dataclass
class WioReport:
    per_element: dict[Resource, ElementWio]
    kinds: dict[Resource, ElementKind]
    phi: float
    delta: float
    w: int = field(init=False)
    N: int = field(init=False)

    def __post_init__(self):
        self.w = sum(1 for e in self.per_element.values() if e.is_weak)
        self.N = len(self.per_element)

    @property
    def ratio(self) -> float:
        return self.w / self.N if self.N else 0.0

    @property
    def is_wio(self) -> bool:
        return self.ratio > self.delta

    def weak_elements(self) -> set[Resource]:
        return {r for r, e in self.per_element.items() if e.is_weak}

    def by_kind(self) -> dict[ElementKind, tuple[int, int]]:
        """(weak, total) per element kind."""
        out = {k: [0, 0] for k in ElementKind}
        for r, e in self.per_element.items():
            slot = out[self.kinds[r]]
            slot[1] += 1
            slot[0] += e.is_weak
        return {k: (v[0], v[1]) for k, v in out.items()}

    def table_row(self, name: str = "") -> str:
        counts = self.by_kind()
        cells = [f"{counts[k][0]}/{counts[k][1]}" for k in (ElementKind.CONCEPT, ElementKind.PROPERTY, ElementKind.INSTANCE)]
        verdict = "Yes" if self.is_wio else "No"
        return "\t".join([name, *cells, f"{self.ratio:.2f}", verdict])


def element_words(element: Resource, annotations: dict) -> set[str]:
    """Distinct lowercase words from the local name and all annotation text."""
    words = set(tokenize(element.local_name))
    for texts in annotations.get(element, {}).values():
        for text in texts:
            words.update(tokenize(text))
    if not words:
        words = {element.local_name.lower() or element.value.lower()}
    return words


def detect_wio(g, lexicon, phi: float = 0.25, delta: float = 0.25, annotations: dict | None = None) -> WioReport:
    """Classify each declared element as weak or not and decide whether the
    ontology is weak informative.

    ``g`` is any graph exposing ``elements`` and ``annotations`` (raw or
    hybrid). An element is weak when fewer than ``phi`` of its words are in
    the lexicon; the ontology is weak when more than ``delta`` of its
    elements are.
    """
    if not lexicon:
        raise EmptyLexicon("lexicon is empty")
    if not 0.0 <= phi <= 0.5:
        raise DomainError(f"phi must lie in [0, 0.5], got {phi}")
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    annotations = g.annotations if annotations is None else annotations
    per_element = {}
    for element in sorted(g.elements):
        words = element_words(element, annotations)
        hits = sum(1 for w in words if w in lexicon)
        per_element[element] = ElementWio(len(words), hits, hits / len(words) < phi)
    return WioReport(per_element, dict(g.elements), phi, delta)
