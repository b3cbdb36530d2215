"""Command-line front end.

Exit codes: 0 success, 1 validation failures present, 2 input or format
error, 3 external-service error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from aida import __version__
from aida.core import Corpus, load_corpus
from aida.errors import AnnotationError, InputError, ServiceError
from aida.graph import (
    ExportFormat,
    Graph,
    Layer,
    build_graph,
    component_merge_report,
    connected_components,
    export_graph,
    load_graph_json,
    network_stats,
)
from aida.linker import (
    Annotation,
    AnnotatorConfig,
    GazetteerAnnotator,
    SpotlightAnnotator,
    annotate,
    dump_annotations,
    format_mean,
    load_annotations,
    load_gazetteer,
    sample_annotations,
)
from aida.nanopub import NanopubConfig, export_corpus, serialize_trig
from aida.validate import Verdict, load_lexicon, validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_SERVICE = 3

SCHEMA_VERSION = 1

logger = logging.getLogger("aida")


def _unit_interval(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"must be within [0, 1], got {value}")
    return x


def _fraction(value: str) -> float:
    x = _unit_interval(value)
    if x == 0.0:
        raise argparse.ArgumentTypeError("must be greater than 0")
    return x


def _timestamp(value: str) -> datetime:
    try:
        ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO 8601 timestamp: {value!r}") from None
    return ts if ts.tzinfo else ts.replace(tzinfo=timezone.utc)


def _dump_json(obj: object) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _write(out: str | None, data: bytes) -> None:
    if out is None:
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        try:
            Path(out).write_bytes(data)
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc}") from None


def _check_annotations(corpus: Corpus, annotations: Sequence[Annotation]) -> None:
    for ann in annotations:
        claim = corpus.claims.get(ann.claim_id)
        if claim is None:
            raise InputError(f"annotation refers to unknown claim {ann.claim_id}")
        if claim.text[ann.start:ann.end] != ann.surface_form:
            raise InputError(f"annotation {ann.surface_form!r} does not match claim {ann.claim_id} text")


def _load_annotations_for(corpus: Corpus, path: str | None) -> list[Annotation]:
    if path is None:
        return []
    annotations = load_annotations(path)
    _check_annotations(corpus, annotations)
    return annotations


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args: argparse.Namespace) -> int:
    lexicon = load_lexicon(args.lexicon)
    corpus = load_corpus(args.corpus)
    reports = [(cid, validate(claim.text, lexicon)) for cid, claim in corpus.claims.items()]
    counts = {v: sum(1 for _, r in reports if r.verdict is v) for v in Verdict}
    summary = {
        "total": len(reports),
        "pass": counts[Verdict.PASS],
        "warn": counts[Verdict.PASS_WITH_WARNINGS],
        "fail": counts[Verdict.FAIL],
    }
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "reports": [{"claim_id": cid, **r.to_dict()} for cid, r in reports],
            "summary": summary,
        }
        sys.stdout.write(_dump_json(doc))
    else:
        for cid, report in reports:
            sys.stdout.write(f"{report.verdict.value:<18} {cid}  {report.text}\n")
            for f in report.findings:
                sys.stdout.write(
                    f"    {f.severity.value:<7} {f.dimension.value:<11} {f.start}-{f.end} "
                    f"{f.matched!r}: {f.message} [{f.rule_id}]\n"
                )
        sys.stdout.write(
            f"{summary['total']} claims: {summary['pass']} pass, {summary['warn']} warn, {summary['fail']} fail\n"
        )
    return EXIT_VALIDATION if summary["fail"] else EXIT_OK


def cmd_annotate(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    try:
        config = AnnotatorConfig(
            endpoint_url=args.endpoint or "",
            confidence_threshold=args.confidence,
            timeout=args.timeout,
            max_parallel_requests=args.parallel,
            retries=args.retries,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.backend == "gazetteer":
        if not args.gazetteer:
            raise InputError("--gazetteer is required for the gazetteer backend")
        backend = GazetteerAnnotator(load_gazetteer(args.gazetteer))
    else:
        if not config.endpoint_url:
            raise InputError("--endpoint (or AIDA_ENDPOINT) is required for the http backend")
        backend = SpotlightAnnotator(config)

    claims = list(corpus.claims.values())
    annotations = annotate(claims, config, backend)
    _write(args.out, dump_annotations(annotations).encode("utf-8"))
    summary = (
        f"kept {len(annotations)} annotations over {len(claims)} claims, "
        f"mean {format_mean(len(annotations), len(claims))} per claim\n"
    )
    (sys.stderr if args.out is None else sys.stdout).write(summary)
    return EXIT_OK


def _graph_input(args: argparse.Namespace) -> tuple[Corpus | None, Graph | None, list[Annotation]]:
    if args.graph_json:
        try:
            data = Path(args.corpus).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {args.corpus}: {exc}") from None
        graph = load_graph_json(data)
        annotations = load_annotations(args.annotations) if args.annotations else []
        return None, graph, annotations
    corpus = load_corpus(args.corpus)
    return corpus, None, _load_annotations_for(corpus, args.annotations)


def cmd_stats(args: argparse.Namespace) -> int:
    corpus, graph, annotations = _graph_input(args)
    if graph is not None:
        partition = connected_components(graph)
        doc = {"schema_version": SCHEMA_VERSION, "layer": None,
               **network_stats(graph, partition, annotations).to_dict()}
        sys.stdout.write(_dump_json(doc))
        return EXIT_OK

    layers = list(Layer) if args.compare_layers else [Layer(args.layer.upper())]
    if Layer.LINKED in layers and args.annotations is None:
        raise InputError("--annotations is required for the linked layer")
    results = {}
    for layer in layers:
        g = build_graph(corpus, annotations, layer)
        p = connected_components(g)
        results[layer] = (p, network_stats(g, p, annotations))

    if not args.compare_layers:
        layer = layers[0]
        doc = {"schema_version": SCHEMA_VERSION, "layer": layer.value.lower(), **results[layer][1].to_dict()}
    else:
        pairs = [(Layer.BASE, Layer.CURATED), (Layer.CURATED, Layer.LINKED), (Layer.BASE, Layer.LINKED)]
        doc = {
            "schema_version": SCHEMA_VERSION,
            "layers": {layer.value.lower(): stats.to_dict() for layer, (_, stats) in results.items()},
            "merges": [
                {"from": a.value.lower(), "to": b.value.lower(),
                 **component_merge_report(results[a][0], results[b][0]).to_dict()}
                for a, b in pairs
            ],
        }
    sys.stdout.write(_dump_json(doc))
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    annotations = _load_annotations_for(corpus, args.annotations)
    layer = Layer(args.layer.upper())
    if layer is Layer.LINKED and args.annotations is None and args.format != "nanopub-trig":
        raise InputError("--annotations is required for the linked layer")

    if args.format in ("edge-tsv", "graph-json"):
        if args.per_claim:
            raise InputError("--per-claim applies to nanopub-trig only")
        fmt = ExportFormat.EDGE_TSV if args.format == "edge-tsv" else ExportFormat.GRAPH_JSON
        _write(args.out, export_graph(build_graph(corpus, annotations, layer), fmt))
        return EXIT_OK

    try:
        config = NanopubConfig(base_namespace=args.base_namespace, created=args.timestamp)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    bundles = export_corpus(corpus, annotations, config)
    if not args.per_claim:
        _write(args.out, serialize_trig(bundles))
        return EXIT_OK
    if args.out is None:
        raise InputError("--per-claim needs --out pointing to a directory")
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {outdir}: {exc}") from None
    for bundle in bundles:
        _write(str(outdir / f"{bundle.claim_id}.trig"), serialize_trig([bundle]))
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    annotations = load_annotations(args.annotations)
    picked = sample_annotations(annotations, args.fraction, args.seed)
    sys.stdout.write(dump_annotations(picked))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aida", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check every corpus sentence against the AIDA constraints")
    p.add_argument("corpus")
    p.add_argument("--lexicon", help="lexicon TSV (default: built-in)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("annotate", help="link corpus sentences to entity IRIs")
    p.add_argument("corpus")
    p.add_argument("--backend", choices=("http", "gazetteer"), default="http")
    p.add_argument("--endpoint", default=os.environ.get("AIDA_ENDPOINT"),
                   help="annotation service URL (default: $AIDA_ENDPOINT)")
    p.add_argument("--gazetteer", help="phrase<TAB>iri file for the gazetteer backend")
    p.add_argument("--confidence", type=_unit_interval, default=0.5)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--parallel", type=int, default=4, help="maximum concurrent requests")
    p.add_argument("--retries", type=int, default=2)
    p.add_argument("--out", help="annotation JSON Lines file (default: stdout)")
    p.set_defaults(func=cmd_annotate)

    for name, func, help_text in (
        ("stats", cmd_stats, "network statistics as JSON"),
        ("export", cmd_export, "export the network or nanopublications"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("corpus")
        p.add_argument("--annotations", help="annotation JSON Lines file")
        p.add_argument("--layer", choices=("base", "curated", "linked"), default="base")
        p.set_defaults(func=func)
        if name == "stats":
            p.add_argument("--compare-layers", action="store_true",
                           help="report all three layers and the component merges between them")
            p.add_argument("--graph-json", action="store_true",
                           help="read the input as a graph-json export instead of a corpus")
        else:
            p.add_argument("--format", required=True, choices=("edge-tsv", "graph-json", "nanopub-trig"))
            p.add_argument("--out", help="output file, or directory with --per-claim (default: stdout)")
            p.add_argument("--timestamp", type=_timestamp, help="pin the nanopublication creation time")
            p.add_argument("--base-namespace", default=NanopubConfig().base_namespace)
            p.add_argument("--per-claim", action="store_true", help="one TriG file per claim")

    p = sub.add_parser("sample", help="draw a reproducible random sample of annotations")
    p.add_argument("--annotations", required=True)
    p.add_argument("--fraction", type=_fraction, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"aida: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnnotationError as exc:
        print(f"aida: error: {exc}", file=sys.stderr)
        return EXIT_SERVICE if isinstance(exc.cause, ServiceError) else EXIT_INPUT
    except ServiceError as exc:
        print(f"aida: error: {exc}", file=sys.stderr)
        return EXIT_SERVICE
    except BrokenPipeError:
        # downstream reader closed early, e.g. ``| head``
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
