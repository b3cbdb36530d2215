"""Domain types, sentence normalization and corpus ingestion.

A corpus file is UTF-8 JSON Lines. Each line describes one sentence::

    {"text": "Aspirin reduces fever.",
     "publications": ["10.1000/xyz"],
     "relations": [{"type": "MORE_SPECIFIC_THAN", "target": "<claim id or text>"}],
     "entities": [{"uri": "http://identifiers.org/ncbigene/1017", "kind": "GENE"}]}

Sentences are merged when their normalized text is identical; the links of
merged duplicates are unioned.
"""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping

from aida.errors import CorpusFormatError

logger = logging.getLogger(__name__)

CLAIM_ID_LENGTH = 16

_CLAIM_ID_RE = re.compile(r"[0-9a-f]{16}")
# scheme ":" then at least one character; no whitespace or IRI-forbidden delimiters
_ABSOLUTE_IRI_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+")


def normalize_text(raw: str) -> str:
    """Canonicalize Unicode form (NFC) and whitespace; case and punctuation are kept."""
    return " ".join(unicodedata.normalize("NFC", raw).split())


def claim_id(normalized_text: str) -> str:
    """Return the content-derived identifier of a normalized sentence.

    The identifier is the first 16 lowercase hex characters of the SHA-256
    digest of the UTF-8 encoded text.
    """
    if not normalized_text:
        raise ValueError("claim_id requires non-empty text")
    if normalize_text(normalized_text) != normalized_text:
        raise ValueError(f"claim_id requires normalized text, got {normalized_text!r}")
    return hashlib.sha256(normalized_text.encode("utf-8")).hexdigest()[:CLAIM_ID_LENGTH]


def round_half_up(value: float, places: int) -> float:
    """Round for reporting; avoids banker's rounding and binary-float surprises."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def is_claim_id(value: str) -> bool:
    return _CLAIM_ID_RE.fullmatch(value) is not None


def is_absolute_iri(value: str) -> bool:
    return _ABSOLUTE_IRI_RE.fullmatch(value) is not None


class NodeKind(str, enum.Enum):
    CLAIM = "CLAIM"
    PUBLICATION = "PUBLICATION"
    ENTITY = "ENTITY"


class EntityKind(str, enum.Enum):
    DBPEDIA = "DBPEDIA"
    GENE = "GENE"
    ORGANISM = "ORGANISM"
    OTHER = "OTHER"


class Relation(str, enum.Enum):
    """Edge labels. Each variant fixes the node kinds it may connect."""

    HAS_CLAIM = "HAS_CLAIM"
    MORE_SPECIFIC_THAN = "MORE_SPECIFIC_THAN"
    SAME_MEANING = "SAME_MEANING"
    FOLLOWS_FROM = "FOLLOWS_FROM"
    MENTIONS = "MENTIONS"

    @property
    def endpoint_kinds(self) -> tuple[NodeKind, NodeKind]:
        return _ENDPOINTS[self]

    @property
    def is_claim_relation(self) -> bool:
        return self in CLAIM_RELATIONS


_ENDPOINTS = {
    Relation.HAS_CLAIM: (NodeKind.PUBLICATION, NodeKind.CLAIM),
    Relation.MORE_SPECIFIC_THAN: (NodeKind.CLAIM, NodeKind.CLAIM),
    Relation.SAME_MEANING: (NodeKind.CLAIM, NodeKind.CLAIM),
    Relation.FOLLOWS_FROM: (NodeKind.CLAIM, NodeKind.CLAIM),
    Relation.MENTIONS: (NodeKind.CLAIM, NodeKind.ENTITY),
}

CLAIM_RELATIONS = frozenset(
    {Relation.MORE_SPECIFIC_THAN, Relation.SAME_MEANING, Relation.FOLLOWS_FROM}
)


@dataclass(frozen=True)
class Claim:
    """A deduplicated sentence. ``raw_texts`` keeps every distinct surface form seen."""

    id: str
    text: str
    raw_texts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("claim text must be non-empty")
        if normalize_text(self.text) != self.text:
            raise ValueError(f"claim text is not normalized: {self.text!r}")
        if self.id != claim_id(self.text):
            raise ValueError(f"claim id {self.id} does not match its text")

    @classmethod
    def from_text(cls, raw: str) -> Claim:
        text = normalize_text(raw)
        return cls(id=claim_id(text), text=text, raw_texts=(raw,))


@dataclass(frozen=True)
class Publication:
    id: str
    label: str | None = None

    def __post_init__(self) -> None:
        if not self.id or any(ch.isspace() for ch in self.id):
            raise ValueError(f"publication id must be non-empty without whitespace: {self.id!r}")


@dataclass(frozen=True)
class DomainEntity:
    uri: str
    label: str | None = None
    kind: EntityKind = EntityKind.OTHER

    def __post_init__(self) -> None:
        if not is_absolute_iri(self.uri):
            raise ValueError(f"entity uri is not an absolute IRI: {self.uri!r}")


@dataclass(frozen=True, order=True)
class Edge:
    source: str
    relation: Relation
    target: str


@dataclass(frozen=True)
class Corpus:
    """Claims, publications, entities and the typed edges between them.

    Construction validates that every edge endpoint exists with the node kind
    its relation requires, that no triple is repeated, and that no claim is
    related to itself. Edges are stored in sorted order.
    """

    claims: Mapping[str, Claim] = field(default_factory=dict)
    publications: Mapping[str, Publication] = field(default_factory=dict)
    entities: Mapping[str, DomainEntity] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()
    record_count: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "claims", MappingProxyType(dict(self.claims)))
        object.__setattr__(self, "publications", MappingProxyType(dict(self.publications)))
        object.__setattr__(self, "entities", MappingProxyType(dict(self.entities)))
        edges = tuple(sorted(self.edges))
        if len(set(edges)) != len(edges):
            raise ValueError("corpus contains duplicate edges")
        for edge in edges:
            src_kind, dst_kind = edge.relation.endpoint_kinds
            if not self._has(src_kind, edge.source):
                raise ValueError(f"edge source {edge.source!r} is not a known {src_kind.value.lower()}")
            if not self._has(dst_kind, edge.target):
                raise ValueError(f"edge target {edge.target!r} is not a known {dst_kind.value.lower()}")
            if edge.source == edge.target:
                raise ValueError(f"self-loop {edge.relation.value} on {edge.source}")
        object.__setattr__(self, "edges", edges)

    def _has(self, kind: NodeKind, node_id: str) -> bool:
        if kind is NodeKind.CLAIM:
            return node_id in self.claims
        if kind is NodeKind.PUBLICATION:
            return node_id in self.publications
        return node_id in self.entities

    @cached_property
    def _by_claim(self) -> dict[str, list[Edge]]:
        index: dict[str, list[Edge]] = {cid: [] for cid in self.claims}
        for edge in self.edges:
            if edge.relation is Relation.HAS_CLAIM:
                index[edge.target].append(edge)
            else:
                index[edge.source].append(edge)
        return index

    def publications_of(self, cid: str) -> list[str]:
        return [e.source for e in self._by_claim[cid] if e.relation is Relation.HAS_CLAIM]

    def entities_of(self, cid: str) -> list[DomainEntity]:
        return [self.entities[e.target] for e in self._by_claim[cid] if e.relation is Relation.MENTIONS]

    def relations_of(self, cid: str) -> list[Edge]:
        """Outgoing claim-to-claim edges of ``cid``."""
        return [e for e in self._by_claim[cid] if e.relation.is_claim_relation]

    def __len__(self) -> int:
        return len(self.claims)


@dataclass(frozen=True)
class CorpusRecord:
    """One parsed line of a corpus file."""

    text: str
    publications: tuple[str, ...] = ()
    relations: tuple[tuple[str, str], ...] = ()
    entities: tuple[tuple[str, str], ...] = ()
    line: int | None = None

    _FIELDS = frozenset({"text", "publications", "relations", "entities"})

    @classmethod
    def from_mapping(cls, obj: Any, line: int | None = None) -> CorpusRecord:
        def fail(message: str) -> CorpusFormatError:
            return CorpusFormatError(message, line=line)

        if not isinstance(obj, Mapping):
            raise fail("record must be a JSON object")
        unknown = set(obj) - cls._FIELDS
        if unknown:
            raise fail(f"unknown field(s): {', '.join(sorted(unknown))}")
        text = obj.get("text")
        if not isinstance(text, str):
            raise fail("field 'text' is required and must be a string")

        pubs = obj.get("publications", [])
        if not isinstance(pubs, list) or not all(isinstance(p, str) for p in pubs):
            raise fail("field 'publications' must be an array of strings")

        rels = obj.get("relations", [])
        if not isinstance(rels, list):
            raise fail("field 'relations' must be an array")
        relations = []
        for rel in rels:
            if not isinstance(rel, Mapping) or not isinstance(rel.get("type"), str) \
                    or not isinstance(rel.get("target"), str):
                raise fail("each relation needs string fields 'type' and 'target'")
            relations.append((rel["type"], rel["target"]))

        ents = obj.get("entities", [])
        if not isinstance(ents, list):
            raise fail("field 'entities' must be an array")
        entities = []
        for ent in ents:
            if not isinstance(ent, Mapping) or not isinstance(ent.get("uri"), str):
                raise fail("each entity needs a string field 'uri'")
            kind = ent.get("kind", EntityKind.OTHER.value)
            if not isinstance(kind, str):
                raise fail("entity 'kind' must be a string")
            entities.append((ent["uri"], kind))

        return cls(text, tuple(pubs), tuple(relations), tuple(entities), line)


def parse_records(lines: Iterable[str]) -> Iterator[CorpusRecord]:
    """Parse JSON Lines; blank lines are skipped, line numbers start at 1."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
        yield CorpusRecord.from_mapping(obj, line=lineno)


def ingest_corpus(records: Iterable[CorpusRecord | Mapping[str, Any]]) -> Corpus:
    """Build a deduplicated :class:`Corpus` from corpus records.

    Relation targets may name a claim defined anywhere in the stream, so
    targets are resolved after all records have been read.

    Raises
    ------
    CorpusFormatError
        On a malformed record, an unknown relation or entity kind, an
        unresolvable relation target, or a claim related to itself.
    """
    raw_texts: dict[str, list[str]] = {}
    texts: dict[str, str] = {}
    publications: dict[str, Publication] = {}
    entities: dict[str, DomainEntity] = {}
    edges: dict[Edge, None] = {}
    pending: list[tuple[str, Relation, str, int | None]] = []
    count = 0

    for index, rec in enumerate(records):
        if not isinstance(rec, CorpusRecord):
            rec = CorpusRecord.from_mapping(rec, line=index + 1)
        count += 1
        line = rec.line

        text = normalize_text(rec.text)
        if not text:
            raise CorpusFormatError("sentence text is empty", line=line)
        cid = claim_id(text)
        if cid not in texts:
            texts[cid] = text
            raw_texts[cid] = []
        if rec.text not in raw_texts[cid]:
            raw_texts[cid].append(rec.text)

        for pub_id in rec.publications:
            if pub_id not in publications:
                try:
                    publications[pub_id] = Publication(pub_id)
                except ValueError as exc:
                    raise CorpusFormatError(str(exc), line=line) from None
            edges[Edge(pub_id, Relation.HAS_CLAIM, cid)] = None

        for uri, kind_name in rec.entities:
            try:
                kind = EntityKind(kind_name)
            except ValueError:
                raise CorpusFormatError(f"unknown entity kind {kind_name!r}", line=line) from None
            known = entities.get(uri)
            if known is None:
                try:
                    entities[uri] = DomainEntity(uri, kind=kind)
                except ValueError as exc:
                    raise CorpusFormatError(str(exc), line=line) from None
            elif known.kind is not kind:
                raise CorpusFormatError(
                    f"entity {uri} declared as {kind.value} but earlier as {known.kind.value}", line=line
                )
            edges[Edge(cid, Relation.MENTIONS, uri)] = None

        for type_name, target in rec.relations:
            try:
                relation = Relation(type_name)
            except ValueError:
                relation = None
            if relation is None or not relation.is_claim_relation:
                raise CorpusFormatError(f"unknown relation {type_name!r}", line=line)
            pending.append((cid, relation, target, line))

    for cid, relation, target, line in pending:
        if is_claim_id(target) and target in texts:
            target_id = target
        elif is_claim_id(target):
            raise CorpusFormatError(f"relation target {target} is not a known claim id", line=line)
        else:
            norm = normalize_text(target)
            target_id = claim_id(norm) if norm else ""
            if target_id not in texts:
                raise CorpusFormatError(
                    f"relation target {target_id or '<empty>'} ({target!r}) is not a known claim", line=line
                )
        if target_id == cid:
            raise CorpusFormatError(f"claim {cid} is related to itself by {relation.value}", line=line)
        edges[Edge(cid, relation, target_id)] = None

    claims = {cid: Claim(cid, texts[cid], tuple(raw_texts[cid])) for cid in texts}
    corpus = Corpus(claims, publications, entities, tuple(edges), record_count=count)
    logger.info("ingested %d records into %d unique claims", count, len(claims))
    return corpus


def load_corpus(path: str | Path) -> Corpus:
    """Read and ingest a corpus file."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return ingest_corpus(parse_records(fh))
    except CorpusFormatError as exc:
        raise CorpusFormatError(exc.message, line=exc.line, path=str(path)) from None
    except OSError as exc:
        raise CorpusFormatError(f"cannot read corpus: {exc.strerror or exc}", path=str(path)) from None
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"not UTF-8: {exc.reason}", path=str(path)) from None


def corpus_records(corpus: Corpus) -> list[dict[str, Any]]:
    """Serialize a corpus as records that ingest back into an equal corpus.

    Relation targets are written as claim ids. Additional surface forms of a
    claim are emitted as bare ``{"text": ...}`` records after the first.
    """
    out: list[dict[str, Any]] = []
    for cid in sorted(corpus.claims):
        claim = corpus.claims[cid]
        first: dict[str, Any] = {"text": claim.raw_texts[0] if claim.raw_texts else claim.text}
        pubs = corpus.publications_of(cid)
        if pubs:
            first["publications"] = pubs
        rels = corpus.relations_of(cid)
        if rels:
            first["relations"] = [{"type": e.relation.value, "target": e.target} for e in rels]
        ents = corpus.entities_of(cid)
        if ents:
            first["entities"] = [{"uri": e.uri, "kind": e.kind.value} for e in ents]
        out.append(first)
        out.extend({"text": raw} for raw in claim.raw_texts[1:])
    return out


def dump_corpus(corpus: Corpus) -> str:
    return "".join(
        json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n" for rec in corpus_records(corpus)
    )
