"""Command-line interface: ``wiomatch <command> ...``.

Exit status: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .alignment import evaluate, format_alignment, read_alignment, write_alignment
from .circuit import extract_all
from .config import RunConfig, load_config
from .errors import ConfigError, WiomatchError
from .ontology import ElementKind, build_graph, load_ontology
from .pipeline import lexicon_for, run_match, subgraphs_for
from .rdf import Resource, serialize_ntriples
from .synthetic import ScrambleSpec, generate_ontology, scramble
from .wio import detect_wio

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("wiomatch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _config(args, **paths) -> RunConfig:
    overrides = list(args.set or [])
    overrides += [f"{k}={v}" for k, v in paths.items() if v is not None]
    return load_config(args.config, overrides)


def cmd_match(args) -> int:
    cfg = _config(args, ontologyA=args.ontologyA, ontologyB=args.ontologyB, output=args.output,
                  reference=args.reference, report=args.report, lexicon=args.lexicon, seeds=args.seeds)
    if not cfg.ontologyA or not cfg.ontologyB:
        raise UsageError("match needs two ontologies (positional or ontologyA/ontologyB in the config)")
    result = run_match(cfg)
    print(result.route)
    if not cfg.output:
        sys.stdout.write(format_alignment(result.alignment))
    if result.evaluation is not None:
        print(result.evaluation.line())
    return EXIT_OK


def cmd_wio_check(args) -> int:
    cfg = _config(args, lexicon=args.lexicon)
    if args.phi is not None or args.delta is not None:
        cfg = cfg.replace(phi=cfg.phi if args.phi is None else args.phi,
                          delta=cfg.delta if args.delta is None else args.delta)
    lexicon = lexicon_for(cfg)
    print("ontology\tconcepts\tproperties\tinstances\tratio\tWIO")
    for path in args.ontology:
        report = detect_wio(build_graph(load_ontology(path)), lexicon, cfg.phi, cfg.delta)
        print(report.table_row(path))
        if args.verbose:
            for element, info in report.per_element.items():
                flag = "weak" if info.is_weak else "ok"
                print(f"  {element.value}\t{info.lexicon_hits}/{info.word_count}\t{flag}")
    return EXIT_OK


def cmd_scramble(args) -> int:
    if args.generate is not None:
        source = generate_ontology(args.generate, args.concepts, args.properties).graph
        if args.source_out:
            with open(args.source_out, "w", encoding="utf-8") as fh:
                fh.write(source.serialize())
    elif args.ontology:
        source = load_ontology(args.ontology)
    else:
        raise UsageError("scramble needs an ontology file or --generate SEED")
    spec = ScrambleSpec(args.seed, args.label_rate, args.comment_rate, not args.perturb_structure, args.namespace)
    scrambled, truth = scramble(source, spec)
    text = serialize_ntriples(scrambled.triples)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.truth:
        write_alignment(truth, args.truth)
    return EXIT_OK


def cmd_eval(args) -> int:
    report = evaluate(read_alignment(args.alignment), read_alignment(args.reference))
    print(report.line())
    print(report.json())
    return EXIT_OK


def cmd_extract_subgraphs(args) -> int:
    cfg = _config(args)
    if args.k is not None:
        cfg = cfg.replace(subgraph_k=args.k)
    g = build_graph(load_ontology(args.ontology))
    if args.element:
        wanted = [Resource.iri(e) for e in args.element]
        missing = [e.value for e in wanted if e not in g.elements]
        if missing:
            raise WiomatchError(f"not an element of the ontology: {', '.join(missing)}")
        subgraphs = extract_all(g, cfg.weight_params(), cfg.subgraph_k, elements=wanted)
    else:
        subgraphs = subgraphs_for(g, cfg)
    out = []
    for element in sorted(subgraphs):
        kind = g.elements.get(element)
        if args.kind and (kind is None or kind.value != args.kind):
            continue
        out.append(subgraphs[element].to_ntriples())
        if element in subgraphs.failures:
            out.append(f"# failed: {subgraphs.failures[element]}\n")
    text = "".join(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wiomatch", description="Match weakly informative ontologies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--log-level", default="WARNING", help="logging level (default WARNING)")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one configuration key")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    m = sub.add_parser("match", parents=[common], help="align two ontologies")
    m.add_argument("ontologyA", nargs="?")
    m.add_argument("ontologyB", nargs="?")
    m.add_argument("-o", "--output", help="alignment TSV (default: stdout)")
    m.add_argument("--reference", help="reference alignment to score against")
    m.add_argument("--report", help="JSON-lines run report")
    m.add_argument("--lexicon", help="word list, one word per line")
    m.add_argument("--seeds", help="extra seed correspondences (alignment TSV)")
    m.set_defaults(func=cmd_match)

    w = sub.add_parser("wio-check", parents=[common], help="weak-informativeness table")
    w.add_argument("ontology", nargs="+")
    w.add_argument("--lexicon")
    w.add_argument("--phi", type=float)
    w.add_argument("--delta", type=float)
    w.add_argument("--verbose", action="store_true", help="also list every element")
    w.set_defaults(func=cmd_wio_check)

    s = sub.add_parser("scramble", help="rename labels and drop comments; emit ground truth")
    s.add_argument("ontology", nargs="?")
    s.add_argument("--generate", type=int, metavar="SEED", help="scramble a synthetic ontology instead of a file")
    s.add_argument("--concepts", type=int, default=30)
    s.add_argument("--properties", type=int, default=20)
    s.add_argument("--source-out", help="where to write the generated source ontology")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--label-rate", type=float, default=1.0)
    s.add_argument("--comment-rate", type=float, default=1.0)
    s.add_argument("--perturb-structure", action="store_true", help="also drop a random tenth of the triples")
    s.add_argument("--namespace")
    s.add_argument("-o", "--output")
    s.add_argument("--truth", help="ground-truth alignment TSV")
    s.set_defaults(func=cmd_scramble)

    e = sub.add_parser("eval", help="precision, recall and F1 of an alignment")
    e.add_argument("alignment")
    e.add_argument("reference")
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("extract-subgraphs", parents=[common], help="semantic subgraphs as N-Triples")
    x.add_argument("ontology")
    x.add_argument("--element", action="append", help="element IRI (repeatable; default: all)")
    x.add_argument("--kind", choices=[k.value for k in (ElementKind.CONCEPT, ElementKind.PROPERTY)])
    x.add_argument("-k", type=int)
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_extract_subgraphs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                            format="%(levelname)s %(name)s: %(message)s")
        if not getattr(args, "func", None):
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"wiomatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"wiomatch: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WiomatchError, OSError, ValueError) as exc:
        print(f"wiomatch: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - last resort
        log.debug("internal error", exc_info=True)
        print(f"wiomatch: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
