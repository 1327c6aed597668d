"""One-to-one alignment extraction, TSV alignment files and P/R/F1 scoring."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import MalformedAlignmentLine
from .rdf import Resource

HEADER = "entity1\tentity2\trelation\tconfidence"


@dataclass(frozen=True, order=True)
class Correspondence:
    e_i: Resource
    e_j: Resource
    confidence: float = field(default=1.0, compare=False)
    relation: str = field(default="=", compare=False)

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        if self.relation != "=":
            raise ValueError(f"only equivalence is supported, got {self.relation!r}")

    @property
    def pair(self) -> tuple[Resource, Resource]:
        return (self.e_i, self.e_j)


@dataclass
class Alignment:
    correspondences: list[Correspondence] = field(default_factory=list)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Resource, Resource]], confidence: float = 1.0) -> "Alignment":
        return cls([Correspondence(a, b, confidence) for a, b in pairs])

    def pairs(self) -> set[tuple[Resource, Resource]]:
        return {c.pair for c in self.correspondences}

    @property
    def injective(self) -> bool:
        left = [c.e_i for c in self.correspondences]
        right = [c.e_j for c in self.correspondences]
        return len(set(left)) == len(left) and len(set(right)) == len(right)

    def __len__(self) -> int:
        return len(self.correspondences)

    def __iter__(self):
        return iter(self.correspondences)


def extract_alignment(sims: Mapping[tuple[Resource, Resource], float], threshold: float = 0.25) -> Alignment:
    """Greedy one-to-one extraction.

    Take the largest remaining entry at or above ``threshold``, emit it and
    discard its row and column; ties go to the lexicographically smaller pair.
    """
    ordered = sorted(((v, a, b) for (a, b), v in sims.items() if v >= threshold), key=lambda x: (-x[0], x[1], x[2]))
    used_a: set[Resource] = set()
    used_b: set[Resource] = set()
    out = []
    for v, a, b in ordered:
        if a in used_a or b in used_b:
            continue
        used_a.add(a)
        used_b.add(b)
        out.append(Correspondence(a, b, min(1.0, max(0.0, float(v)))))
    return Alignment(out)


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    found: int
    reference: int

    def line(self) -> str:
        return f"P={self.precision:.4f} R={self.recall:.4f} F1={self.f1:.4f}"

    def json(self) -> str:
        return json.dumps({"precision": self.precision, "recall": self.recall, "f1": self.f1,
                           "tp": self.tp, "found": self.found, "reference": self.reference})


def evaluate(q: Alignment | Iterable, t: Alignment | Iterable) -> EvalReport:
    """Precision, recall and F1 of ``q`` against reference ``t`` on element pairs."""
    found = q.pairs() if isinstance(q, Alignment) else set(q)
    ref = t.pairs() if isinstance(t, Alignment) else set(t)
    tp = len(found & ref)
    p = tp / len(found) if found else 0.0
    r = tp / len(ref) if ref else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return EvalReport(p, r, f1, tp, len(found), len(ref))


def _parse_term(text: str) -> Resource:
    if text.startswith("_:"):
        return Resource.blank(text[2:])
    return Resource.iri(text)


def _format_term(r: Resource) -> str:
    return f"_:{r.value}" if r.is_blank else r.value


def write_alignment(a: Alignment, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_alignment(a))


def format_alignment(a: Alignment) -> str:
    lines = [HEADER]
    for c in a:
        lines.append(f"{_format_term(c.e_i)}\t{_format_term(c.e_j)}\t{c.relation}\t{c.confidence!r}")
    return "\n".join(lines) + "\n"


def parse_alignment(text: str) -> Alignment:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if lineno == 1 and line.strip() == HEADER:
            continue
        cells = line.rstrip("\n").split("\t")
        if len(cells) != 4:
            raise MalformedAlignmentLine(lineno, f"expected 4 tab-separated fields, got {len(cells)}")
        e1, e2, rel, conf = cells
        if rel != "=":
            raise MalformedAlignmentLine(lineno, f"unsupported relation {rel!r}")
        try:
            value = float(conf)
        except ValueError:
            raise MalformedAlignmentLine(lineno, f"confidence {conf!r} is not a number") from None
        if not 0.0 <= value <= 1.0:
            raise MalformedAlignmentLine(lineno, f"confidence {conf} outside [0, 1]")
        out.append(Correspondence(_parse_term(e1), _parse_term(e2), value))
    return Alignment(out)


def read_alignment(path: str | os.PathLike) -> Alignment:
    with open(path, encoding="utf-8") as fh:
        return parse_alignment(fh.read())
