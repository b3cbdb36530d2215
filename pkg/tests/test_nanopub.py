from __future__ import annotations

from datetime import datetime, timezone

import pytest
import rdflib

from aida import vocab
from aida.core import claim_id, ingest_corpus
from aida.errors import InputError
from aida.fixtures import paper_fixture
from aida.linker import Annotation, AnnotatorConfig, GazetteerAnnotator, annotate
from aida.nanopub import (
    Literal,
    NanopubBundle,
    NanopubConfig,
    export_corpus,
    export_nanopub,
    publication_iri,
    serialize_trig,
    substitute_vocabulary,
)
from conftest import DATA

PINNED = NanopubConfig(created=datetime(2024, 1, 1, tzinfo=timezone.utc))
TEENS = "Teenagers reply on average faster to emails than adults."
GENERAL = "Cholinesterase inhibitors cause adverse events in Alzheimer's disease."
SPECIFIC = "Donepezil causes anorexia in Alzheimer's disease."


def parse(data: bytes) -> rdflib.Dataset:
    ds = rdflib.Dataset()
    ds.parse(data=data.decode("utf-8"), format="trig")
    return ds


def named_graphs(ds: rdflib.Dataset) -> dict[str, rdflib.Graph]:
    return {str(g.identifier): g for g in ds.graphs() if g.identifier != rdflib.graph.DATASET_DEFAULT_GRAPH_ID}


def test_minimal_bundle_golden():
    corpus = ingest_corpus([{"text": TEENS}])
    bundle = export_nanopub(claim_id(TEENS), corpus, config=PINNED)
    assert len(bundle.assertion) == 1
    assert [p for _, p, _ in bundle.provenance] == [vocab.WAS_GENERATED_BY]
    assert serialize_trig([bundle]) == (DATA / "minimal_nanopub.trig").read_bytes()


def test_counts_for_publication_and_two_entities():
    corpus = ingest_corpus([{
        "text": TEENS,
        "publications": ["10.1145/2736277.2741130"],
        "entities": [{"uri": "http://identifiers.org/taxonomy/9606", "kind": "ORGANISM"},
                     {"uri": "http://dbpedia.org/resource/Email", "kind": "DBPEDIA"}],
    }])
    bundle = export_nanopub(claim_id(TEENS), corpus, config=PINNED)
    assert len(bundle.assertion) == 3
    attributions = [t for t in bundle.provenance if t[1] == vocab.ATTRIBUTED_TO]
    assert attributions == [(bundle.graph_iris["assertion"], vocab.ATTRIBUTED_TO,
                             "https://doi.org/10.1145/2736277.2741130")]


def test_more_specific_relation_triple():
    corpus = ingest_corpus([
        {"text": SPECIFIC, "relations": [{"type": "MORE_SPECIFIC_THAN", "target": GENERAL}]},
        {"text": GENERAL},
    ])
    specific = export_nanopub(claim_id(SPECIFIC), corpus, config=PINNED)
    assert (PINNED.claim_iri(claim_id(SPECIFIC)), vocab.MORE_SPECIFIC_THAN,
            PINNED.claim_iri(claim_id(GENERAL))) in specific.assertion
    general = export_nanopub(claim_id(GENERAL), corpus, config=PINNED)
    assert all(p != vocab.MORE_SPECIFIC_THAN for _, p, _ in general.assertion)


def test_annotations_become_mentions():
    corpus = ingest_corpus([{"text": TEENS}])
    cid = claim_id(TEENS)
    ann = Annotation(cid, "emails", 37, 43, "http://dbpedia.org/resource/Email", 0.9)
    bundle = export_nanopub(cid, corpus, [ann], PINNED)
    assert (PINNED.claim_iri(cid), vocab.MENTIONS, ann.entity_uri) in bundle.assertion
    other = Annotation("0123456789abcdef", "emails", 37, 43, ann.entity_uri, 0.9)
    with pytest.raises(InputError):
        export_nanopub(cid, corpus, [other], PINNED)
    with pytest.raises(InputError):
        export_corpus(corpus, [other], PINNED)


def test_unknown_claim():
    with pytest.raises(InputError, match="0123456789abcdef"):
        export_nanopub("0123456789abcdef", ingest_corpus([]), config=PINNED)


def test_head_declares_graphs():
    corpus = ingest_corpus([{"text": TEENS}])
    b = export_nanopub(claim_id(TEENS), corpus, config=PINNED)
    iris = b.graph_iris
    assert set(b.head) == {
        (b.uri, vocab.RDF_TYPE, vocab.NANOPUBLICATION),
        (b.uri, vocab.HAS_ASSERTION, iris["assertion"]),
        (b.uri, vocab.HAS_PROVENANCE, iris["provenance"]),
        (b.uri, vocab.HAS_PUBLICATION_INFO, iris["pubinfo"]),
    }
    with pytest.raises(ValueError):
        NanopubBundle(b.uri, b.claim_id, b.head, (), b.provenance, b.pubinfo)


def test_empty_bundle_list_is_prefixes_only():
    out = serialize_trig([]).decode()
    assert out.splitlines() == [f"@prefix {k}: <{v}> ." for k, v in sorted(vocab.PREFIXES.items())]


def test_publication_iris():
    assert publication_iri("10.1109/ASRU.2011.6163930") == "https://doi.org/10.1109/ASRU.2011.6163930"
    assert publication_iri("https://example.com/paper") == "https://example.com/paper"
    assert publication_iri("PMID12345") == "http://example.org/aida/publication/PMID12345"


def test_config_validation_and_timestamp():
    with pytest.raises(ValueError):
        NanopubConfig(base_namespace="not absolute")
    assert NanopubConfig(base_namespace="https://claims.example/x/").claim_iri("ab") == "https://claims.example/x/ab"
    assert NanopubConfig(created=datetime(2024, 1, 1, 5, 30)).timestamp() == "2024-01-01T05:30:00Z"
    assert NanopubConfig().timestamp().endswith("Z")


def test_literal_escaping_round_trips():
    text = 'Mice "prefer" the back\\slash route.'
    corpus = ingest_corpus([{"text": text}])
    data = serialize_trig(export_corpus(corpus, config=PINNED))
    values = {str(o) for _, _, o, _ in parse(data).quads((None, rdflib.URIRef(vocab.STATEMENT_TEXT), None, None))}
    assert values == {text}


@pytest.fixture(scope="module")
def paper_export():
    fx = paper_fixture()
    corpus = ingest_corpus(fx.records)
    anns = annotate(list(corpus.claims.values()), AnnotatorConfig(), GazetteerAnnotator(fx.gazetteer))
    bundles = export_corpus(corpus, anns, PINNED)
    return corpus, anns, bundles, serialize_trig(bundles)


def test_independent_parser_sees_four_graphs_per_claim(paper_export):
    corpus, _, bundles, data = paper_export
    graphs = named_graphs(parse(data))
    assert len(graphs) == 4 * len(corpus.claims)
    for b in bundles:
        for name, iri in b.graph_iris.items():
            assert len(graphs[iri]) == len(getattr(b, name))


def test_bundle_completeness(paper_export):
    corpus, anns, bundles, _ = paper_export
    by_claim = {b.claim_id: b for b in bundles}
    for cid in corpus.claims:
        b = by_claim[cid]
        objects = {o for _, _, o in b.assertion + b.provenance if isinstance(o, str)}
        assert {e.uri for e in corpus.entities_of(cid)} <= objects
        assert {a.entity_uri for a in anns if a.claim_id == cid} <= objects
        assert {publication_iri(p, PINNED) for p in corpus.publications_of(cid)} <= objects


def test_serialization_is_deterministic(paper_export):
    corpus, anns, bundles, data = paper_export
    assert serialize_trig(reversed(bundles)) == data
    assert serialize_trig(export_corpus(corpus, list(reversed(anns)), PINNED)) == data


def test_every_iri_is_absolute(paper_export):
    _, _, _, data = paper_export
    for quad in parse(data).quads():
        for term in quad:
            if isinstance(term, rdflib.URIRef):
                assert ":" in term and " " not in term


def test_public_vocabulary_substitution():
    corpus = ingest_corpus([{"text": SPECIFIC, "publications": ["10.1/a"],
                             "relations": [{"type": "MORE_SPECIFIC_THAN", "target": GENERAL}]}, {"text": GENERAL}])
    b = substitute_vocabulary(export_nanopub(claim_id(SPECIFIC), corpus, config=PINNED))
    preds = {p for _, p, _ in b.assertion + b.provenance}
    assert vocab.SKOS + "broader" in preds and vocab.RDFS + "label" in preds
    assert vocab.PROV + "hadPrimarySource" in preds
    assert not any(p.startswith(vocab.AIDA) for p in preds)
    assert len(named_graphs(parse(serialize_trig([b])))) == 4


def test_literal_type():
    assert Literal("x") < Literal("y")
