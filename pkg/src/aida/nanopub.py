"""Nanopublication export of claims as TriG.

Each claim becomes one nanopublication with four named graphs: head,
assertion (the sentence, its entity mentions and its relations to other
claims), provenance (the publications it was taken from) and publication
info (generator and creation time). Output is deterministic once the
creation timestamp is pinned in :class:`NanopubConfig`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence, Union
from urllib.parse import quote

from aida import __version__, vocab
from aida.core import Claim, Corpus, Relation, is_absolute_iri
from aida.errors import InputError
from aida.linker import Annotation

GENERATOR = "aida"

_DOI_RE = re.compile(r"10\.\d{4,9}/\S+")
_LOCAL_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_IRI_SAFE = "/:;?#[]@!$&'()*+,=-._~%"

_RELATION_PREDICATES = {
    Relation.MORE_SPECIFIC_THAN: vocab.MORE_SPECIFIC_THAN,
    Relation.SAME_MEANING: vocab.SAME_MEANING,
    Relation.FOLLOWS_FROM: vocab.FOLLOWS_FROM,
}


@dataclass(frozen=True, order=True)
class Literal:
    value: str
    datatype: str | None = None


Term = Union[str, Literal]  # a plain str is an IRI
Triple = tuple[str, str, Term]


@dataclass(frozen=True)
class NanopubConfig:
    base_namespace: str = vocab.DEFAULT_BASE_NAMESPACE
    created: datetime | None = None
    generator: str = GENERATOR
    generator_version: str = __version__

    def __post_init__(self) -> None:
        if not is_absolute_iri(self.base_namespace):
            raise ValueError(f"base namespace is not an absolute IRI: {self.base_namespace!r}")
        object.__setattr__(self, "base_namespace", self.base_namespace.rstrip("/"))

    def timestamp(self) -> str:
        created = self.created or datetime.now(timezone.utc)
        if created.tzinfo is None:
            created = created.replace(tzinfo=timezone.utc)
        return created.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")

    def claim_iri(self, claim_id: str) -> str:
        return f"{self.base_namespace}/{claim_id}"

    def nanopub_iri(self, claim_id: str) -> str:
        return f"{self.base_namespace}/np/{claim_id}"


def publication_iri(pub_id: str, config: NanopubConfig | None = None) -> str:
    """IRI for a publication identifier: DOIs resolve via doi.org, IRIs are kept."""
    if _DOI_RE.fullmatch(pub_id):
        return "https://doi.org/" + quote(pub_id, safe=_IRI_SAFE)
    if is_absolute_iri(pub_id):
        return pub_id
    config = config or NanopubConfig()
    return f"{config.base_namespace}/publication/{quote(pub_id, safe='')}"


@dataclass(frozen=True)
class NanopubBundle:
    uri: str
    claim_id: str
    head: tuple[Triple, ...]
    assertion: tuple[Triple, ...]
    provenance: tuple[Triple, ...]
    pubinfo: tuple[Triple, ...]

    def __post_init__(self) -> None:
        if not self.assertion:
            raise ValueError("assertion graph must not be empty")

    @property
    def graph_iris(self) -> dict[str, str]:
        return {name: f"{self.uri}#{name}" for name in ("head", "assertion", "provenance", "pubinfo")}

    def graphs(self) -> list[tuple[str, tuple[Triple, ...]]]:
        iris = self.graph_iris
        return [
            (iris["head"], self.head),
            (iris["assertion"], self.assertion),
            (iris["provenance"], self.provenance),
            (iris["pubinfo"], self.pubinfo),
        ]


def export_nanopub(
    claim: Claim | str,
    corpus: Corpus,
    annotations: Sequence[Annotation] = (),
    config: NanopubConfig | None = None,
) -> NanopubBundle:
    """Package one claim with its links and provenance.

    Raises
    ------
    InputError
        ``claim`` is not in ``corpus`` or an annotation belongs to another claim.
    """
    config = config or NanopubConfig()
    cid = claim if isinstance(claim, str) else claim.id
    if cid not in corpus.claims:
        raise InputError(f"unknown claim {cid}")
    claim = corpus.claims[cid]
    for ann in annotations:
        if ann.claim_id != cid:
            raise InputError(f"annotation for claim {ann.claim_id} passed with claim {cid}")

    np_iri = config.nanopub_iri(cid)
    subject = config.claim_iri(cid)
    assertion_g, provenance_g, pubinfo_g = (f"{np_iri}#{n}" for n in ("assertion", "provenance", "pubinfo"))

    mentioned = {e.uri for e in corpus.entities_of(cid)} | {a.entity_uri for a in annotations}
    assertion: list[Triple] = [(subject, vocab.STATEMENT_TEXT, Literal(claim.text))]
    assertion += [(subject, vocab.MENTIONS, uri) for uri in mentioned]
    assertion += [
        (subject, _RELATION_PREDICATES[e.relation], config.claim_iri(e.target))
        for e in corpus.relations_of(cid)
    ]

    provenance: list[Triple] = [(assertion_g, vocab.WAS_GENERATED_BY, f"{np_iri}#activity")]
    provenance += [
        (assertion_g, vocab.ATTRIBUTED_TO, publication_iri(p, config)) for p in corpus.publications_of(cid)
    ]

    pubinfo: list[Triple] = [
        (np_iri, vocab.CREATED, Literal(config.timestamp(), vocab.XSD_DATETIME)),
        (np_iri, vocab.GENERATOR_NAME, Literal(config.generator)),
        (np_iri, vocab.GENERATOR_VERSION, Literal(config.generator_version)),
    ]

    head: list[Triple] = [
        (np_iri, vocab.RDF_TYPE, vocab.NANOPUBLICATION),
        (np_iri, vocab.HAS_ASSERTION, assertion_g),
        (np_iri, vocab.HAS_PROVENANCE, provenance_g),
        (np_iri, vocab.HAS_PUBLICATION_INFO, pubinfo_g),
    ]
    return NanopubBundle(
        np_iri, cid, _sorted(head), _sorted(assertion), _sorted(provenance), _sorted(pubinfo)
    )


def export_corpus(
    corpus: Corpus,
    annotations: Iterable[Annotation] = (),
    config: NanopubConfig | None = None,
) -> list[NanopubBundle]:
    """One bundle per claim, in claim-id order."""
    config = config or NanopubConfig()
    by_claim: dict[str, list[Annotation]] = {}
    for ann in annotations:
        by_claim.setdefault(ann.claim_id, []).append(ann)
    unknown = set(by_claim) - set(corpus.claims)
    if unknown:
        raise InputError(f"annotation refers to unknown claim {min(unknown)}")
    return [export_nanopub(cid, corpus, by_claim.get(cid, ()), config) for cid in sorted(corpus.claims)]


def substitute_vocabulary(bundle: NanopubBundle, mapping: Mapping[str, str] = vocab.PUBLIC_MAPPING) -> NanopubBundle:
    """Replace predicate IRIs according to ``mapping`` in every graph."""

    def sub(triples: tuple[Triple, ...]) -> tuple[Triple, ...]:
        return _sorted((s, mapping.get(p, p), o) for s, p, o in triples)

    return replace(
        bundle,
        head=sub(bundle.head),
        assertion=sub(bundle.assertion),
        provenance=sub(bundle.provenance),
        pubinfo=sub(bundle.pubinfo),
    )


# ---------------------------------------------------------------------------
# TriG


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _iri(iri: str) -> str:
    for prefix, ns in vocab.PREFIXES.items():
        if iri.startswith(ns) and _LOCAL_NAME_RE.fullmatch(iri[len(ns):]):
            return f"{prefix}:{iri[len(ns):]}"
    return f"<{iri}>"


def _term(term: Term) -> str:
    if isinstance(term, Literal):
        text = f'"{_escape(term.value)}"'
        return f"{text}^^{_iri(term.datatype)}" if term.datatype else text
    return _iri(term)


def _ntriples_key(triple: Triple) -> tuple[str, str, str]:
    s, p, o = triple
    obj = f'"{o.value}"^^<{o.datatype or ""}>' if isinstance(o, Literal) else f"<{o}>"
    return (f"<{s}>", f"<{p}>", obj)


def _sorted(triples: Iterable[Triple]) -> tuple[Triple, ...]:
    return tuple(sorted(set(triples), key=_ntriples_key))


def serialize_trig(bundles: Iterable[NanopubBundle]) -> bytes:
    """Shared prefixes, then per bundle the head, assertion, provenance and pubinfo graphs."""
    out = [f"@prefix {name}: <{ns}> .\n" for name, ns in sorted(vocab.PREFIXES.items())]
    for bundle in sorted(bundles, key=lambda b: b.uri):
        for graph_iri, triples in bundle.graphs():
            out.append(f"\n{_iri(graph_iri)} {{\n")
            for s, p, o in triples:
                out.append(f"  {_iri(s)} {_iri(p)} {_term(o)} .\n")
            out.append("}\n")
    return "".join(out).encode("utf-8")
