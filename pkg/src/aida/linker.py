"""Entity annotation of claims.

Two backends implement the same contract (text in, ``Match`` list out):

* :class:`SpotlightAnnotator` posts each sentence to a Spotlight-style HTTP
  annotation service;
* :class:`GazetteerAnnotator` does exact, offline, longest-match lookup in a
  phrase-to-IRI dictionary.

:func:`annotate` runs a backend over a list of claims, applies the confidence
threshold and removes overlapping spans.
"""
from __future__ import annotations

import json
import logging
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Protocol, Sequence

import requests

from aida.core import Claim, is_absolute_iri, normalize_text, round_half_up
from aida.errors import AnnotationError, DataError, GazetteerError, InputError, ProtocolError, TransportError
from aida.matching import longest_match_pattern

logger = logging.getLogger(__name__)

DEFAULT_CONFIDENCE = 0.5


class Match(NamedTuple):
    """A backend result: character span, entity IRI and confidence."""

    start: int
    end: int
    uri: str
    confidence: float


class Annotator(Protocol):
    def __call__(self, text: str) -> list[Match]: ...


@dataclass(frozen=True)
class AnnotatorConfig:
    endpoint_url: str = ""
    confidence_threshold: float = DEFAULT_CONFIDENCE
    timeout: float = 30.0
    max_parallel_requests: int = 4
    retries: int = 2
    retry_backoff: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(f"confidence_threshold must be in [0, 1], got {self.confidence_threshold}")
        if self.max_parallel_requests < 1:
            raise ValueError("max_parallel_requests must be >= 1")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class Annotation:
    claim_id: str
    surface_form: str
    start: int
    end: int
    entity_uri: str
    confidence: float

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span ({self.start}, {self.end})")
        if self.end - self.start != len(self.surface_form):
            raise ValueError("span length does not match surface form")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")
        if not is_absolute_iri(self.entity_uri):
            raise ValueError(f"entity uri is not an absolute IRI: {self.entity_uri!r}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> Annotation:
        return cls(
            claim_id=str(obj["claim_id"]),
            surface_form=str(obj["surface_form"]),
            start=int(obj["start"]),
            end=int(obj["end"]),
            entity_uri=str(obj["entity_uri"]),
            confidence=float(obj["confidence"]),
        )


# ---------------------------------------------------------------------------
# HTTP backend


def parse_spotlight_response(text: str, body: str | bytes) -> list[Match]:
    """Decode a Spotlight JSON response and check every offset against ``text``.

    Raises
    ------
    ProtocolError
        The body is not the documented JSON shape.
    DataError
        A resource's ``@surfaceForm`` is not found at its ``@offset``.
    """
    try:
        payload = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"response is not JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ProtocolError("response JSON is not an object")
    resources = payload.get("Resources")
    if resources is None:
        return []
    if not isinstance(resources, list):
        raise ProtocolError("'Resources' is not an array")

    matches = []
    for res in resources:
        if not isinstance(res, dict):
            raise ProtocolError("resource entry is not an object")
        try:
            uri = res["@URI"]
            surface = res["@surfaceForm"]
            offset = int(res["@offset"])
            score = float(res["@similarityScore"])
        except KeyError as exc:
            raise ProtocolError(f"resource is missing field {exc.args[0]}") from None
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"resource has a malformed number: {exc}") from None
        if not isinstance(uri, str) or not isinstance(surface, str) or not surface:
            raise ProtocolError("resource '@URI' and '@surfaceForm' must be non-empty strings")
        if not (0.0 <= score <= 1.0):
            raise ProtocolError(f"resource {uri} has similarity score {score} outside [0, 1]")
        end = offset + len(surface)
        if offset < 0 or text[offset:end] != surface:
            raise DataError(
                f"resource {uri}: surface form {surface!r} not found at offset {offset}"
            )
        matches.append(Match(offset, end, uri, score))
    return matches


def spotlight_annotate(
    text: str,
    config: AnnotatorConfig,
    post: Callable[..., requests.Response] | None = None,
) -> list[Match]:
    """Annotate one sentence through the HTTP annotation service.

    The request is a form-encoded POST of ``text`` and ``confidence``.
    Connection failures and HTTP error statuses are retried
    ``config.retries`` times before :class:`TransportError` is raised;
    malformed responses are not retried.
    """
    if not text:
        raise ValueError("cannot annotate empty text")
    if not config.endpoint_url:
        raise TransportError("no annotation endpoint configured")
    post = post or requests.post
    form = {"text": text, "confidence": repr(config.confidence_threshold)}
    last_error = ""
    for attempt in range(config.retries + 1):
        if attempt:
            time.sleep(config.retry_backoff * attempt)
        try:
            resp = post(
                config.endpoint_url,
                data=form,
                headers={"Accept": "application/json"},
                timeout=config.timeout,
            )
        except requests.RequestException as exc:
            last_error = f"request failed: {exc}"
            continue
        if resp.status_code >= 400:
            last_error = f"HTTP {resp.status_code}"
            continue
        return parse_spotlight_response(text, resp.content)
    raise TransportError(
        f"{config.endpoint_url}: {last_error} (after {config.retries + 1} attempts)"
    )


class SpotlightAnnotator:
    """HTTP backend; safe to call from several threads."""

    concurrent = True

    def __init__(self, config: AnnotatorConfig, post: Callable[..., requests.Response] | None = None) -> None:
        self.config = config
        self._post = post

    def __call__(self, text: str) -> list[Match]:
        return spotlight_annotate(text, self.config, self._post)


# ---------------------------------------------------------------------------
# Gazetteer backend


def gazetteer_annotate(text: str, gazetteer: Mapping[str, str]) -> list[Match]:
    """Longest-match-first, left-to-right, non-overlapping dictionary lookup.

    Matching is case-insensitive and respects word boundaries. All matches
    have confidence 1.0.
    """
    pattern = longest_match_pattern(gazetteer)
    if pattern is None:
        return []
    return _scan(text, pattern, gazetteer)


def _scan(text: str, pattern, gazetteer: Mapping[str, str]) -> list[Match]:
    folded = None
    matches = []
    for m in pattern.finditer(text):
        key = normalize_text(m.group()).lower()
        iri = gazetteer.get(key)
        if iri is None:
            # case-insensitive regex matching is per-character folding; str.lower() can differ
            if folded is None:
                folded = {p.casefold(): v for p, v in gazetteer.items()}
            iri = folded[key.casefold()]
        matches.append(Match(m.start(), m.end(), iri, 1.0))
    return matches


class GazetteerAnnotator:
    concurrent = False

    def __init__(self, gazetteer: Mapping[str, str]) -> None:
        for phrase, iri in gazetteer.items():
            if not phrase or normalize_text(phrase).lower() != phrase:
                raise ValueError(f"gazetteer phrase must be lowercase and normalized: {phrase!r}")
            if not is_absolute_iri(iri):
                raise ValueError(f"gazetteer IRI is not absolute: {iri!r}")
        self.gazetteer = dict(gazetteer)
        self._pattern = longest_match_pattern(self.gazetteer)

    def __call__(self, text: str) -> list[Match]:
        if self._pattern is None:
            return []
        return _scan(text, self._pattern, self.gazetteer)


def parse_gazetteer(lines: Iterable[str], source: str = "<gazetteer>") -> dict[str, str]:
    """Parse ``<phrase>\\t<iri>`` lines; ``#`` comments and blank lines are skipped."""
    gazetteer: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise GazetteerError("expected <phrase>\\t<iri>", line=lineno, path=source)
        phrase = normalize_text(parts[0]).lower()
        iri = parts[1].strip()
        if not phrase:
            raise GazetteerError("empty phrase", line=lineno, path=source)
        if not is_absolute_iri(iri):
            raise GazetteerError(f"not an absolute IRI: {iri!r}", line=lineno, path=source)
        if gazetteer.get(phrase, iri) != iri:
            raise GazetteerError(f"phrase {phrase!r} mapped to two IRIs", line=lineno, path=source)
        gazetteer[phrase] = iri
    return gazetteer


def load_gazetteer(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise GazetteerError(f"cannot read gazetteer: {exc}", path=str(path)) from None
    return parse_gazetteer(text.splitlines(), source=str(path))


# ---------------------------------------------------------------------------
# Batch annotation


def filter_by_confidence(annotations: Iterable[Annotation], threshold: float) -> list[Annotation]:
    """Keep annotations with ``confidence >= threshold`` (inclusive), in order."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    return [a for a in annotations if a.confidence >= threshold]


def resolve_overlaps(matches: Iterable[Match]) -> list[Match]:
    """Drop overlapping spans, preferring higher confidence, then longer span, then earlier start.

    The survivors are returned sorted by start offset.
    """
    kept: list[Match] = []
    for m in sorted(matches, key=lambda m: (-m.confidence, -(m.end - m.start), m.start, m.end, m.uri)):
        if all(m.end <= k.start or k.end <= m.start for k in kept):
            kept.append(m)
    return sorted(kept, key=lambda m: (m.start, m.end))


def _check_match(text: str, m: Match) -> None:
    if not (0 <= m.start < m.end <= len(text)):
        raise DataError(f"span ({m.start}, {m.end}) for {m.uri} outside the text")
    if not is_absolute_iri(m.uri):
        raise DataError(f"backend returned a non-absolute IRI {m.uri!r}")
    if not 0.0 <= m.confidence <= 1.0:
        raise DataError(f"confidence {m.confidence} for {m.uri} outside [0, 1]")


def annotate(claims: Sequence[Claim], config: AnnotatorConfig, backend: Annotator) -> list[Annotation]:
    """Annotate ``claims`` in order with ``backend``.

    Backends flagged ``concurrent`` are called from up to
    ``config.max_parallel_requests`` threads; results keep input order.
    Matches below the threshold are dropped before overlap resolution.

    Raises
    ------
    AnnotationError
        When the backend fails for any claim. No partial result is returned.
    """
    def run(claim: Claim) -> list[Annotation]:
        try:
            matches = backend(claim.text)
            for m in matches:
                _check_match(claim.text, m)
        except Exception as exc:
            raise AnnotationError(claim.id, exc) from exc
        kept = [m for m in matches if m.confidence >= config.confidence_threshold]
        return [
            Annotation(claim.id, claim.text[m.start:m.end], m.start, m.end, m.uri, m.confidence)
            for m in resolve_overlaps(kept)
        ]

    if getattr(backend, "concurrent", False) and config.max_parallel_requests > 1 and len(claims) > 1:
        with ThreadPoolExecutor(max_workers=config.max_parallel_requests) as pool:
            futures = [pool.submit(run, c) for c in claims]
            try:
                per_claim = [f.result() for f in futures]
            except AnnotationError:
                for f in futures:
                    f.cancel()
                raise
    else:
        per_claim = [run(c) for c in claims]

    result = [a for group in per_claim for a in group]
    logger.info("kept %d annotations over %d claims", len(result), len(claims))
    return result


def sample_annotations(annotations: Sequence[Annotation], fraction: float, seed: int) -> list[Annotation]:
    """Uniform sample without replacement of ``ceil(fraction * n)`` annotations.

    The result is sorted by claim id and start offset for review.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    # decimal arithmetic: 0.1 * 1730 must give 173, not 173.00000000000003
    size = math.ceil(Decimal(repr(fraction)) * len(annotations))
    picked = random.Random(seed).sample(list(annotations), size)
    return sorted(picked, key=lambda a: (a.claim_id, a.start, a.end, a.entity_uri))


def mean_per_claim(annotation_count: int, claim_count: int) -> float:
    return annotation_count / claim_count if claim_count else 0.0


def format_mean(annotation_count: int, claim_count: int) -> str:
    return f"{round_half_up(mean_per_claim(annotation_count, claim_count), 2):.2f}"


# ---------------------------------------------------------------------------
# Annotation files


def dump_annotations(annotations: Iterable[Annotation]) -> str:
    return "".join(json.dumps(a.to_dict(), ensure_ascii=False, sort_keys=True) + "\n" for a in annotations)


def parse_annotations(lines: Iterable[str], source: str = "<annotations>") -> list[Annotation]:
    out = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            out.append(Annotation.from_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc.msg}", line=lineno, path=source) from None
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"invalid annotation: {exc}", line=lineno, path=source) from None
    return out


def load_annotations(path: str | Path) -> list[Annotation]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read annotations: {exc}", path=str(path)) from None
    return parse_annotations(text.splitlines(), source=str(path))
