import json
import subprocess
import sys

import pytest

import wio_fixtures
from wiomatch.alignment import read_alignment
from wiomatch.cli import main
from wiomatch.config import RunConfig
from wiomatch.ontology import build_graph, load_ontology
from wiomatch.pipeline import match_graphs
from wiomatch.rdf import serialize_ntriples
from wiomatch.synthetic import ScrambleSpec, generate_ontology, scramble
from wiomatch.text import default_lexicon
from wiomatch.wio import detect_wio


@pytest.fixture(scope="module")
def task(tmp_path_factory):
    d = tmp_path_factory.mktemp("task")
    src, tgt, truth = d / "a.nt", d / "b.nt", d / "truth.tsv"
    assert main(["scramble", "--generate", "4", "--concepts", "12", "--properties", "8", "--source-out", str(src),
                 "--seed", "1", "-o", str(tgt), "--truth", str(truth)]) == 0
    return d, src, tgt, truth


def test_self_match_is_identity(task, capsys):
    d, src, _, _ = task
    ref = d / "self.tsv"
    g = load_ontology(src)
    elements = sorted(e for e, k in build_graph(g).elements.items() if k.value in ("concept", "property"))
    ref.write_text("entity1\tentity2\trelation\tconfidence\n" + "".join(f"{e.value}\t{e.value}\t=\t1.0\n" for e in elements))
    out = d / "self_out.tsv"
    assert main(["match", str(src), str(src), "-o", str(out), "--reference", str(ref)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "route=sdd-only"
    assert lines[-1] == "P=1.0000 R=1.0000 F1=1.0000"
    assert {(c.e_i, c.e_j) for c in read_alignment(out)} == {(e, e) for e in elements}


def test_weak_pair_takes_propagation_route(task, capsys):
    d, src, tgt, truth = task
    report = d / "run.jsonl"
    out1, out2 = d / "m1.tsv", d / "m2.tsv"
    assert main(["match", str(src), str(tgt), "-o", str(out1), "--report", str(report), "--reference", str(truth)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "route=propagation strategy=S5"
    events = [json.loads(line) for line in report.read_text().splitlines()]
    kinds = {e["event"] for e in events}
    assert {"route", "seeds", "timing", "alignment", "eval"} <= kinds
    assert main(["match", str(src), str(tgt), "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_routing_follows_detection():
    lex = default_lexicon()
    informative = generate_ontology(5, 8, 5).graph
    weak, _ = scramble(informative, ScrambleSpec(seed=3))
    for a, b in ((informative, informative), (informative, weak), (weak, informative), (weak, weak)):
        flagged = detect_wio(build_graph(a), lex).is_wio or detect_wio(build_graph(b), lex).is_wio
        route = match_graphs(a, b, RunConfig(strategy="S3")).route
        assert route.startswith("route=propagation") is flagged


def test_wio_check_rows(tmp_path, capsys):
    lex = tmp_path / "lex.txt"
    lex.write_text("\n".join(sorted(wio_fixtures.lexicon())) + "\n")
    files = []
    for name in ("101", "202", "203"):
        f = tmp_path / f"{name}.nt"
        f.write_text(serialize_ntriples(wio_fixtures.profile(*wio_fixtures.PROFILES[name][:3])))
        files.append(str(f))
    assert main(["wio-check", *files, "--lexicon", str(lex)]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "ontology\tconcepts\tproperties\tinstances\tratio\tWIO"
    assert rows[1].split("\t")[1:] == ["0/34", "0/72", "0/55", "0.00", "No"]
    assert rows[2].split("\t")[1:] == ["31/34", "65/72", "55/55", "0.94", "Yes"]
    assert rows[3].split("\t")[1:] == ["0/34", "5/72", "15/55", "0.12", "No"]
    assert main(["wio-check", files[1], "--lexicon", str(lex), "--delta", "1.0"]) == 0
    assert capsys.readouterr().out.splitlines()[1].endswith("No")


def test_eval_command(tmp_path, capsys):
    head = "entity1\tentity2\trelation\tconfidence\n"
    q, t = tmp_path / "q.tsv", tmp_path / "t.tsv"
    q.write_text(head + "".join(f"http://a/{i}\thttp://b/{i}\t=\t1.0\n" for i in (1, 2, 8, 9)))
    t.write_text(head + "".join(f"http://a/{i}\thttp://b/{i}\t=\t1.0\n" for i in (1, 2, 3, 4, 5)))
    assert main(["eval", str(q), str(t)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "P=0.5000 R=0.4000 F1=0.4444"
    assert json.loads(out[1])["tp"] == 2
    empty = tmp_path / "e.tsv"
    empty.write_text(head)
    assert main(["eval", str(empty), str(t)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "P=0.0000 R=0.0000 F1=0.0000"


def test_scramble_rate_zero_and_determinism(task, tmp_path):
    _, src, _, _ = task
    o1, o2, o3 = (tmp_path / f"{i}.nt" for i in range(3))
    assert main(["scramble", str(src), "--label-rate", "0", "--comment-rate", "0", "-o", str(o1)]) == 0
    assert [t.key for t in load_ontology(o1).triples] == [t.key for t in load_ontology(src).triples]
    assert main(["scramble", str(src), "--seed", "4", "-o", str(o2)]) == 0
    assert main(["scramble", str(src), "--seed", "4", "-o", str(o3)]) == 0
    assert o2.read_bytes() == o3.read_bytes()


def test_extract_subgraphs(task, capsys):
    _, src, _, _ = task
    element = next(e for e, k in build_graph(load_ontology(src)).elements.items() if k.value == "concept")
    assert main(["extract-subgraphs", str(src), "--element", element.value, "-k", "3"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l and not l.startswith("#")]
    assert 1 <= len(lines) <= 3


def test_config_and_set(task, tmp_path, capsys):
    _, src, tgt, _ = task
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"ontologyA = {src}\nontologyB = {tgt}\nstrategy = S3\n")
    assert main(["match", "--config", str(cfg), "--set", "max_iterations=2"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "route=propagation strategy=S3"


@pytest.mark.parametrize(
    "argv, code",
    [
        ([], 1),
        (["frobnicate"], 1),
        (["match"], 1),
        (["match", "a.nt", "b.nt", "--set", "lam=7"], 1),
        (["match", "a.nt", "b.nt", "--set", "nokey=1"], 1),
        (["match", "/nonexistent/a.nt", "/nonexistent/b.nt"], 2),
        (["eval", "/nonexistent/q.tsv", "/nonexistent/t.tsv"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_malformed_input_is_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.nt"
    bad.write_text("not a statement\n")
    assert main(["wio-check", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wiomatch", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().startswith("wiomatch")
