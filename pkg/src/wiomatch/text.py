"""Tokenization, light stemming and edit-distance similarity for element text."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_CAMEL = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")
_CHUNKS = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split on non-alphanumerics, camelCase and letter/digit boundaries; lowercase.

    >>> tokenize("hasISBNNumber_2nd")
    ['has', 'isbn', 'number', '2', 'nd']
    """
    out: list[str] = []
    for chunk in _CHUNKS.findall(text):
        parts = _CAMEL.findall(chunk)
        if not parts:
            # non-ASCII letters fall outside the camel pattern
            parts = [chunk]
        out.extend(p.lower() for p in parts)
    return out


def stem(token: str) -> str:
    """Strip one common English inflection (-ing, -ed, -es, -s)."""
    if len(token) >= 8 and token.endswith("ing"):
        return token[:-3]
    if len(token) >= 6 and token.endswith("ed"):
        return token[:-2]
    if len(token) > 4 and token.endswith(("ches", "shes", "sses", "xes", "zes")):
        return token[:-2]
    if len(token) > 3 and token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    text = resources.files("wiomatch").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith("#"))


@lru_cache(maxsize=None)
def default_lexicon() -> frozenset[str]:
    """Small bundled English word list used when no lexicon file is given."""
    text = resources.files("wiomatch").joinpath("data/lexicon.txt").read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def load_wordlist(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip() and not w.startswith("#"))


def preprocess(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Tokens ready for document vectors: stop words removed, then stemmed."""
    stop = default_stopwords() if stopwords is None else stopwords
    return [stem(t) for t in tokenize(text) if t not in stop]


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein / max length; 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
