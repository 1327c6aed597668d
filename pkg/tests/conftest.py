import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from wiomatch.ontology import build_graph, graph_from_triples  # noqa: E402
from wiomatch.rdf import Resource, Triple  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EX = "http://ex.org/onto#"

# acceptance criterion number -> one-line verdict, printed after the run
RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])


def term(text: str) -> Resource:
    """``Name`` -> ex IRI, ``rdfs:x`` -> vocabulary IRI, ``"text"`` -> literal, ``_:b`` -> blank."""
    if text.startswith('"'):
        return Resource.literal(text.strip('"'))
    if text.startswith("_:"):
        return Resource.blank(text[2:])
    if ":" in text:
        return Resource.iri(text)
    return Resource.iri(EX + text)


def triples(spec: str) -> list[Triple]:
    """One statement per line, whitespace separated; quoted literals may not contain spaces."""
    out = []
    for line in spec.strip().splitlines():
        line = line.strip()
        if line:
            s, p, o = line.split()
            out.append(Triple(term(s), term(p), term(o)))
    return out


def graph(spec: str, name: str = ""):
    return graph_from_triples(triples(spec), name=name)


def hybrid(spec: str, name: str = ""):
    return build_graph(graph(spec, name))


@pytest.fixture
def ex():
    return term
