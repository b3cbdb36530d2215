"""Synthetic corpora with the aggregate shape of the published network study.

The original 650-sentence dataset is not bundled. :func:`paper_fixture`
builds a corpus and a gazetteer whose network reproduces the published
totals exactly by construction:

* 650 records merging into 615 unique claims with 374 publications
  (989 base nodes in 332 components, the largest holding 62 claims);
* gene and organism links joining one component of 149 claims;
* 711 distinct concept IRIs found by gazetteer annotation (1726
  annotations) that reduce the network to 66 components, the largest
  holding 296 claims.

:func:`mean_fixture` builds 650 claims that receive exactly 1726
annotations.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from aida.core import claim_id

PAPER_TARGETS = {
    "records": 650,
    "claims": 615,
    "publications": 374,
    "base_nodes": 989,
    "base_components": 332,
    "base_largest_claims": 62,
    "curated_largest_claims": 149,
    "linked_new_entities": 711,
    "linked_components": 66,
    "linked_largest_claims": 296,
    "annotations": 1726,
}

META_REVIEW_DOI = "10.1002/14651858.CD005593"
CONCEPT_IRI = "http://dbpedia.org/resource/Synthetic_concept_{:04d}"
GENE_IRI = "http://identifiers.org/ncbigene/{}"
ORGANISM_IRI = "http://identifiers.org/taxonomy/10090"


@dataclass
class _Component:
    claims: list[int]
    pubs: list[str]
    duplicated: bool = False


@dataclass(frozen=True)
class Fixture:
    records: list[dict[str, Any]]
    gazetteer: dict[str, str]

    def write(self, directory: str | Path) -> tuple[Path, Path]:
        """Write ``corpus.jsonl`` and ``gazetteer.tsv`` into ``directory``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        corpus = directory / "corpus.jsonl"
        gazetteer = directory / "gazetteer.tsv"
        corpus.write_text(
            "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in self.records),
            encoding="utf-8",
        )
        gazetteer.write_text(
            "".join(f"{phrase}\t{iri}\n" for phrase, iri in sorted(self.gazetteer.items())),
            encoding="utf-8",
        )
        return corpus, gazetteer


def _doi(k: int) -> str:
    return f"10.5555/aida.{k:04d}"


def paper_fixture() -> Fixture:
    t = PAPER_TARGETS
    next_claim = 0
    next_pub = 0

    def claims(n: int) -> list[int]:
        nonlocal next_claim
        ids = list(range(next_claim, next_claim + n))
        next_claim += n
        return ids

    def pubs(n: int) -> list[str]:
        nonlocal next_pub
        out = [_doi(next_pub + i) for i in range(n)]
        next_pub += n
        return out

    # base components: the meta-review, 20 biomedical components, 311 small ones
    alz = _Component(claims(62), [META_REVIEW_DOI])
    curated = [_Component(claims(8 if i < 9 else 7), pubs(1)) for i in range(20)]
    pairs = [_Component(claims(2), pubs(1)) for _ in range(93)]
    singles = [_Component(claims(1), pubs(2 if i < 42 else 1), duplicated=i < 35) for i in range(218)]
    base = [alz, *curated, *pairs, *singles]
    assert next_claim == t["claims"] and next_pub + 1 == t["publications"] and len(base) == t["base_components"]
    assert sum(len(c.claims) for c in curated) == t["curated_largest_claims"]

    mentions: dict[int, list[int]] = {c: [] for c in range(next_claim)}
    genes: dict[int, list[tuple[str, str]]] = {c: [] for c in range(next_claim)}
    for i in range(len(curated) - 1):
        uri = GENE_IRI.format(1000 + i)
        genes[curated[i].claims[0]].append((uri, "GENE"))
        genes[curated[i + 1].claims[-1]].append((uri, "GENE"))
    for comp in curated[::4]:
        genes[comp.claims[1]].append((ORGANISM_IRI, "ORGANISM"))

    # linked groups: the largest joins the meta-review, the biomedical block and 85 more claims
    extra = pairs[:40] + singles[42:47]
    assert 62 + 149 + sum(len(c.claims) for c in extra) == t["linked_largest_claims"]
    rest = pairs[40:] + singles[:42] + singles[47:]
    isolated = rest[-60:]
    chained = rest[:-60]
    size, spare = divmod(len(chained), 5)
    groups = [[alz, curated[0], *extra]]
    start = 0
    for g in range(5):
        n = size + (1 if g >= 5 - spare else 0)
        groups.append(chained[start:start + n])
        start += n
    groups += [[c] for c in isolated]
    assert len(groups) == t["linked_components"]

    cursor: dict[int, int] = {}

    def pick(comp: _Component) -> int:
        k = cursor.get(id(comp), 0)
        cursor[id(comp)] = k + 1
        return comp.claims[k % len(comp.claims)]

    concept = 0
    for group in groups:
        for a, b in zip(group, group[1:]):
            mentions[pick(a)].append(concept)
            mentions[pick(b)].append(concept)
            concept += 1
    heap = [(len(mentions[c]), c) for c in range(next_claim)]
    heapq.heapify(heap)
    while concept < t["linked_new_entities"]:
        _, c = heapq.heappop(heap)
        mentions[c].append(concept)
        heapq.heappush(heap, (len(mentions[c]), c))
        concept += 1

    # repeat concepts already present in the same linked group until the annotation total is met
    group_of = {c: gi for gi, group in enumerate(groups) for comp in group for c in comp.claims}
    group_of.update({c: 0 for comp in curated for c in comp.claims})  # joined through genes
    pool: dict[int, list[int]] = {}
    for c, ms in mentions.items():
        pool.setdefault(group_of[c], []).extend(ms)
    total = sum(len(m) for m in mentions.values())
    while total < t["annotations"]:
        progressed = False
        for c in sorted(mentions, key=lambda c: (len(mentions[c]), c)):
            candidates = [m for m in sorted(set(pool[group_of[c]])) if m not in mentions[c]]
            if candidates:
                mentions[c].append(candidates[(c * 7) % len(candidates)])
                total += 1
                progressed = True
                if total == t["annotations"]:
                    break
        if not progressed:  # pragma: no cover - construction guard
            raise RuntimeError("fixture construction cannot reach the annotation total")

    def text(c: int) -> str:
        head = "Cholinesterase inhibitor finding" if c in alz.claims else "Synthetic finding"
        if not mentions[c]:
            return f"{head} {c:04d} holds in the studied population."
        phrases = " and ".join(f"concept {m:04d}" for m in mentions[c])
        return f"{head} {c:04d} relates {phrases} to the outcome."

    records: list[dict[str, Any]] = []
    duplicates: list[dict[str, Any]] = []
    for comp in base:
        for c in comp.claims:
            rec: dict[str, Any] = {"text": text(c)}
            if comp.duplicated:
                rec["publications"] = comp.pubs[:1]
                duplicates.append({"text": "  " + text(c).replace(" ", "  ", 1) + "\n", "publications": comp.pubs[1:]})
            else:
                rec["publications"] = list(comp.pubs)
            if genes[c]:
                rec["entities"] = [{"uri": u, "kind": k} for u, k in genes[c]]
            records.append(rec)

    # three-level hierarchy in the meta-review component: specific -> general
    top, middle, low = alz.claims[0], alz.claims[1:6], alz.claims[6:]
    by_claim = {c: records[i] for i, c in enumerate(alz.claims)}
    for m in middle:
        by_claim[m]["relations"] = [{"type": "MORE_SPECIFIC_THAN", "target": text(top)}]
    for i, c in enumerate(low):
        target = claim_id(text(middle[i % len(middle)]))
        by_claim[c]["relations"] = [{"type": "MORE_SPECIFIC_THAN", "target": target}]

    records += duplicates
    assert len(records) == t["records"]
    gazetteer = {f"concept {m:04d}": CONCEPT_IRI.format(m) for m in range(t["linked_new_entities"])}
    return Fixture(records, gazetteer)


def mean_fixture() -> Fixture:
    """650 claims annotated 1726 times in total: 426 with three terms, 224 with two."""
    gazetteer: dict[str, str] = {}
    records = []
    term = 0
    for c in range(650):
        n = 3 if c < 426 else 2
        phrases = []
        for _ in range(n):
            phrase = f"term {term:04d}"
            gazetteer[phrase] = f"http://dbpedia.org/resource/Synthetic_term_{term:04d}"
            phrases.append(phrase)
            term += 1
        records.append({"text": f"Sentence {c:04d} connects {' and '.join(phrases)}.", "publications": [_doi(c)]})
    return Fixture(records, gazetteer)
