from __future__ import annotations

import json
import random
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aida.core import (
    Claim,
    Corpus,
    DomainEntity,
    Edge,
    EntityKind,
    Publication,
    Relation,
    claim_id,
    dump_corpus,
    ingest_corpus,
    load_corpus,
    normalize_text,
    parse_records,
    round_half_up,
)
from aida.errors import CorpusFormatError, InputError
from aida.fixtures import PAPER_TARGETS, paper_fixture
from oracles import sha_claim_id

# frozen from `printf '%s' TEXT | sha256sum | cut -c1-16`
GOLDEN_IDS = {
    "Deep learning is a powerful and accurate method for automatic speech recognition.": "a3a5d17e206b647c",
    "Teenagers reply on average faster to emails than adults.": "fecbd963d9c07ba8",
}


def assert_endpoints_resolve(corpus: Corpus) -> None:
    nodes = set(corpus.claims) | set(corpus.publications) | set(corpus.entities)
    for e in corpus.edges:
        assert e.source in nodes and e.target in nodes


# -- normalization ----------------------------------------------------------


def test_normalize_collapses_whitespace():
    raw = "  Teenagers reply\n on average faster to emails than adults. "
    assert normalize_text(raw) == "Teenagers reply on average faster to emails than adults."


def test_normalize_fixpoint_and_empty():
    assert normalize_text("X.") == "X."
    assert normalize_text("") == ""
    assert normalize_text(" \t\n") == ""


def test_normalize_composes_unicode_and_keeps_case():
    decomposed = "Café Owners Agree."
    assert normalize_text(decomposed) == "Café Owners Agree."
    assert normalize_text("MiXeD case.") == "MiXeD case."


@settings(max_examples=300)
@given(st.text())
def test_normalize_idempotent(s):
    once = normalize_text(s)
    assert normalize_text(once) == once


@settings(max_examples=200)
@given(st.text())
def test_normalize_nfc_and_nfd_agree(s):
    assert normalize_text(unicodedata.normalize("NFD", s)) == normalize_text(unicodedata.normalize("NFC", s))


# -- claim ids --------------------------------------------------------------


@pytest.mark.parametrize("text,expected", sorted(GOLDEN_IDS.items()))
def test_claim_id_golden(text, expected):
    assert claim_id(text) == expected
    assert sha_claim_id(text) == expected


def test_claim_id_rejects_bad_input():
    with pytest.raises(ValueError):
        claim_id("")
    with pytest.raises(ValueError):
        claim_id("  not normalized ")


@settings(max_examples=200)
@given(st.text(min_size=1).map(normalize_text).filter(bool))
def test_claim_id_matches_oracle(text):
    cid = claim_id(text)
    assert cid == sha_claim_id(text)
    assert len(cid) == 16 and cid == cid.lower()


@settings(max_examples=200)
@given(
    st.text(alphabet=st.characters(blacklist_categories=("Z", "C")), min_size=1, max_size=60),
    st.integers(min_value=0),
    st.characters(blacklist_categories=("Z", "C")),
)
def test_one_character_change_changes_id(text, pos, ch):
    a = normalize_text(text)
    i = pos % len(a)
    b = normalize_text(a[:i] + ch + a[i + 1:])
    if a != b:
        assert claim_id(a) != claim_id(b)


def test_round_half_up():
    assert round_half_up(1726 / 650, 2) == 2.66
    assert round_half_up(0.8012048, 3) == 0.801
    assert round_half_up(0.125, 2) == 0.13
    assert round_half_up(2.5, 0) == 3.0


# -- domain types -----------------------------------------------------------


def test_claim_invariants():
    with pytest.raises(ValueError):
        Claim("0" * 16, "Some text.")
    with pytest.raises(ValueError):
        Claim.from_text("   ")
    c = Claim.from_text(" Aspirin  reduces fever. ")
    assert c.text == "Aspirin reduces fever." and c.id == claim_id(c.text)


def test_publication_and_entity_invariants():
    with pytest.raises(ValueError):
        Publication("")
    with pytest.raises(ValueError):
        Publication("10.1/a b")
    with pytest.raises(ValueError):
        DomainEntity("not an iri", kind=EntityKind.GENE)
    assert DomainEntity("http://identifiers.org/ncbigene/1", kind=EntityKind.GENE).kind is EntityKind.GENE


def test_relation_endpoint_kinds():
    assert {r for r in Relation if r.is_claim_relation} == {
        Relation.MORE_SPECIFIC_THAN,
        Relation.SAME_MEANING,
        Relation.FOLLOWS_FROM,
    }
    with pytest.raises(ValueError):
        Corpus({}, {"10.1/x": Publication("10.1/x")}, {}, (Edge("10.1/x", Relation.MENTIONS, "10.1/x"),))


def test_corpus_rejects_self_loop_and_dangling_edges():
    c = Claim.from_text("Aspirin reduces fever.")
    with pytest.raises(ValueError):
        Corpus({c.id: c}, edges=(Edge(c.id, Relation.MORE_SPECIFIC_THAN, c.id),))
    with pytest.raises(ValueError):
        Corpus({c.id: c}, edges=(Edge(c.id, Relation.MORE_SPECIFIC_THAN, "f" * 16),))


# -- ingestion --------------------------------------------------------------


def test_empty_corpus():
    corpus = ingest_corpus([])
    assert len(corpus.claims) == len(corpus.publications) == len(corpus.entities) == len(corpus.edges) == 0
    assert corpus.record_count == 0


def test_identical_text_two_dois_merge():
    text = "Teenagers reply on average faster to emails than adults."
    corpus = ingest_corpus([
        {"text": text, "publications": ["10.1145/2736277.2741130"]},
        {"text": " " + text.replace(" ", "\n", 1), "publications": ["10.1000/other"]},
    ])
    assert list(corpus.claims) == ["fecbd963d9c07ba8"]
    has_claim = [e for e in corpus.edges if e.relation is Relation.HAS_CLAIM]
    assert len(has_claim) == 2
    assert corpus.record_count == 2
    assert len(corpus.claims["fecbd963d9c07ba8"].raw_texts) == 2
    assert_endpoints_resolve(corpus)


def test_duplicate_links_dropped():
    rec = {"text": "Aspirin reduces fever.", "publications": ["10.1/a"],
           "entities": [{"uri": "http://identifiers.org/taxonomy/9606", "kind": "ORGANISM"}]}
    corpus = ingest_corpus([rec, rec])
    assert len(corpus.edges) == 2
    assert corpus.claims[claim_id("Aspirin reduces fever.")].raw_texts == ("Aspirin reduces fever.",)


def test_relation_target_by_text_and_id():
    general = "Cholinesterase inhibitors cause adverse events."
    middle = "Donepezil causes adverse events."
    corpus = ingest_corpus([
        {"text": "Donepezil causes anorexia.", "relations": [{"type": "MORE_SPECIFIC_THAN", "target": claim_id(middle)}]},
        {"text": middle, "relations": [{"type": "MORE_SPECIFIC_THAN", "target": "  " + general}]},
        {"text": general},
    ])
    rels = [e for e in corpus.edges if e.relation is Relation.MORE_SPECIFIC_THAN]
    assert len(rels) == 2
    # stored one way only: specific -> general
    assert Edge(claim_id(middle), Relation.MORE_SPECIFIC_THAN, claim_id(general)) in rels
    assert all(e.target != claim_id("Donepezil causes anorexia.") for e in rels)


@pytest.mark.parametrize(
    "lines,fragment,line",
    [
        (['{"text": "Fine sentence here."}', "{not json"], "invalid JSON", 2),
        (['{"text": 3}'], "text", 1),
        (['{"text": "A b c.", "relations": [{"type": "IS_LIKE", "target": "x"}]}'], "IS_LIKE", 1),
        (['{"text": "A b c.", "relations": [{"type": "HAS_CLAIM", "target": "x"}]}'], "HAS_CLAIM", 1),
        (['{"text": "A b c.", "entities": [{"uri": "http://x.org/1", "kind": "PLANET"}]}'], "PLANET", 1),
        (['{"text": "A b c.", "colour": "red"}'], "colour", 1),
        (['', '{"text": "   "}'], "empty", 2),
    ],
)
def test_malformed_records_carry_line_numbers(lines, fragment, line):
    with pytest.raises(CorpusFormatError) as info:
        ingest_corpus(parse_records(lines))
    assert info.value.line == line
    assert fragment in str(info.value)


def test_unknown_target_id_is_named():
    missing = "0123456789abcdef"
    with pytest.raises(CorpusFormatError, match=missing):
        ingest_corpus([{"text": "A b c.", "relations": [{"type": "FOLLOWS_FROM", "target": missing}]}])


def test_unknown_target_text_and_self_relation():
    with pytest.raises(CorpusFormatError, match="not a known claim"):
        ingest_corpus([{"text": "A b c.", "relations": [{"type": "FOLLOWS_FROM", "target": "Nobody wrote this."}]}])
    with pytest.raises(CorpusFormatError, match="itself"):
        ingest_corpus([{"text": "A b c.", "relations": [{"type": "SAME_MEANING", "target": "A  b c."}]}])


def test_conflicting_entity_kind():
    uri = "http://identifiers.org/ncbigene/7"
    with pytest.raises(CorpusFormatError, match="GENE"):
        ingest_corpus([
            {"text": "A b c.", "entities": [{"uri": uri, "kind": "GENE"}]},
            {"text": "D e f.", "entities": [{"uri": uri, "kind": "ORGANISM"}]},
        ])


def test_load_corpus_errors(tmp_path):
    with pytest.raises(InputError, match="missing.jsonl"):
        load_corpus(tmp_path / "missing.jsonl")
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"text": "Fine sentence here."}\n[1]\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError) as info:
        load_corpus(bad)
    assert info.value.line == 2 and info.value.path == str(bad)
    assert f"{bad}:2:" in str(info.value)


def test_paper_fixture_dedup():
    fx = paper_fixture()
    corpus = ingest_corpus(fx.records)
    assert corpus.record_count == PAPER_TARGETS["records"] == 650
    assert len(corpus.claims) == PAPER_TARGETS["claims"] == 615
    assert len(corpus.publications) == PAPER_TARGETS["publications"] == 374
    assert_endpoints_resolve(corpus)


def test_dump_round_trip_paper_fixture():
    corpus = ingest_corpus(paper_fixture().records)
    again = ingest_corpus(parse_records(dump_corpus(corpus).splitlines()))
    assert again == corpus
    assert again.claims == corpus.claims
    assert dump_corpus(again) == dump_corpus(corpus)


# -- properties -------------------------------------------------------------

WORDS = ["Aspirin", "reduces", "fever", "pain", "mice", "adults", "sleep"]

sentences = st.lists(st.sampled_from(WORDS), min_size=1, max_size=4).map(lambda ws: " ".join(ws) + ".")
spacing = st.sampled_from(["", " ", "  ", "\n", "\t "])


@st.composite
def record_lists(draw):
    texts = draw(st.lists(sentences, min_size=1, max_size=12))
    records = []
    for t in texts:
        rec = {"text": draw(spacing) + t.replace(" ", draw(st.sampled_from([" ", "  ", "\n"]))) + draw(spacing)}
        pubs = draw(st.lists(st.sampled_from(["10.1/a", "10.1/b", "10.1/c"]), max_size=2, unique=True))
        if pubs:
            rec["publications"] = pubs
        if draw(st.booleans()):
            rec["entities"] = [{"uri": f"http://identifiers.org/ncbigene/{draw(st.integers(1, 3))}", "kind": "GENE"}]
        others = [normalize_text(o) for o in texts if normalize_text(o) != normalize_text(t)]
        if others and draw(st.booleans()):
            rec["relations"] = [{"type": draw(st.sampled_from(["MORE_SPECIFIC_THAN", "SAME_MEANING", "FOLLOWS_FROM"])),
                                 "target": draw(st.sampled_from(others))}]
        records.append(rec)
    return records


@settings(max_examples=150, deadline=None)
@given(record_lists(), st.randoms(use_true_random=False))
def test_ingestion_order_invariance(records, rnd):
    shuffled = list(records)
    rnd.shuffle(shuffled)
    a, b = ingest_corpus(records), ingest_corpus(shuffled)
    assert len(a.claims) == len(b.claims)
    # raw_texts keeps first-seen order, so only its contents are order-free
    assert {k: (v.text, frozenset(v.raw_texts)) for k, v in a.claims.items()} == {
        k: (v.text, frozenset(v.raw_texts)) for k, v in b.claims.items()
    }
    assert a.edges == b.edges and a.publications == b.publications and a.entities == b.entities
    assert_endpoints_resolve(a)
    assert_endpoints_resolve(b)


@settings(max_examples=100, deadline=None)
@given(record_lists())
def test_ingestion_idempotent_over_serialization(records):
    corpus = ingest_corpus(records)
    again = ingest_corpus(json.loads(line) for line in dump_corpus(corpus).splitlines())
    assert again == corpus
    assert_endpoints_resolve(again)


def test_order_invariance_on_paper_fixture():
    records = paper_fixture().records
    shuffled = list(records)
    random.Random(7).shuffle(shuffled)
    assert len(ingest_corpus(shuffled).claims) == 615
