"""Sparse similarity matrix shared by the seed matcher, propagation and extraction."""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable

from .rdf import Resource

Pair = tuple[Resource, Resource]


class SimilarityMatrix(dict):
    """Map (element of A, element of B) -> similarity in [0, 1]; absent means 0."""

    def value(self, a: Resource, b: Resource) -> float:
        return self.get((a, b), 0.0)

    def rows(self) -> dict[Resource, dict[Resource, float]]:
        out: dict[Resource, dict[Resource, float]] = defaultdict(dict)
        for (a, b), v in self.items():
            out[a][b] = v
        return out

    def columns(self) -> dict[Resource, dict[Resource, float]]:
        out: dict[Resource, dict[Resource, float]] = defaultdict(dict)
        for (a, b), v in self.items():
            out[b][a] = v
        return out

    def max_value(self) -> float:
        return max(self.values(), default=0.0)

    def positive(self) -> "SimilarityMatrix":
        return SimilarityMatrix({k: v for k, v in self.items() if v > 0})

    def restrict(self, keep: Callable[[Resource, Resource], bool]) -> "SimilarityMatrix":
        return SimilarityMatrix({(a, b): v for (a, b), v in self.items() if keep(a, b)})

    def copy(self) -> "SimilarityMatrix":
        return SimilarityMatrix(self)

    def linf_distance(self, other: "SimilarityMatrix") -> float:
        keys = set(self) | set(other)
        return max((abs(self.get(k, 0.0) - other.get(k, 0.0)) for k in keys), default=0.0)

    def to_tsv(self) -> str:
        """Rows ``elementA  elementB  similarity`` sorted by descending similarity."""
        ordered = sorted(self.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
        lines = ["entity1\tentity2\tsimilarity"]
        lines += [f"{a.value}\t{b.value}\t{v:.6f}" for (a, b), v in ordered]
        return "\n".join(lines) + "\n"

    @classmethod
    def average(cls, matrices: Iterable["SimilarityMatrix"]) -> "SimilarityMatrix":
        """Entry-wise arithmetic mean; a missing entry counts as 0."""
        matrices = list(matrices)
        if not matrices:
            return cls()
        keys = set().union(*matrices)
        n = len(matrices)
        return cls({k: sum(m.get(k, 0.0) for m in matrices) / n for k in keys})
