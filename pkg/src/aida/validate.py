"""Heuristic linter for the four AIDA constraints.

A sentence is checked along four dimensions: atomic (one thought),
independent (no references to outside context), declarative (a complete
sentence ending with a full stop) and absolute (no hedging and no account of
how the result was found). Structural rules are built in; vocabulary rules
come from a :class:`Lexicon`, loaded from a tab-separated file.

Example
-------
>>> report = validate("We probably saw this effect, and it was strong.")
>>> report.verdict
<Verdict.FAIL: 'FAIL'>
>>> sorted({f.dimension.value for f in report.findings})
['ABSOLUTE', 'ATOMIC', 'INDEPENDENT']
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from aida.core import normalize_text
from aida.errors import LexiconError
from aida.matching import find_phrase


class Dimension(str, enum.Enum):
    ATOMIC = "ATOMIC"
    INDEPENDENT = "INDEPENDENT"
    DECLARATIVE = "DECLARATIVE"
    ABSOLUTE = "ABSOLUTE"


_DIMENSION_ORDER = {d: i for i, d in enumerate(Dimension)}


class Severity(str, enum.Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


class Verdict(str, enum.Enum):
    PASS = "PASS"
    PASS_WITH_WARNINGS = "PASS_WITH_WARNINGS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class Finding:
    """One rule violation; ``matched == text[start:end]`` of the normalized text."""

    dimension: Dimension
    severity: Severity
    start: int
    end: int
    matched: str
    message: str
    rule_id: str

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def sort_key(self) -> tuple:
        return (self.start, _DIMENSION_ORDER[self.dimension], self.end, self.rule_id, self.matched)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension.value,
            "severity": self.severity.value,
            "span": [self.start, self.end],
            "matched": self.matched,
            "message": self.message,
            "rule_id": self.rule_id,
        }


@dataclass(frozen=True)
class ValidationReport:
    text: str
    findings: tuple[Finding, ...]
    verdict: Verdict

    @classmethod
    def from_findings(cls, text: str, findings: Iterable[Finding]) -> ValidationReport:
        ordered = tuple(sorted(findings, key=Finding.sort_key))
        if any(f.severity is Severity.ERROR for f in ordered):
            verdict = Verdict.FAIL
        elif ordered:
            verdict = Verdict.PASS_WITH_WARNINGS
        else:
            verdict = Verdict.PASS
        return cls(text, ordered, verdict)

    @property
    def dimensions(self) -> set[Dimension]:
        return {f.dimension for f in self.findings}

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "verdict": self.verdict.value,
            "findings": [f.to_dict() for f in self.findings],
        }


Term = tuple[str, Severity]


@dataclass(frozen=True)
class Lexicon:
    """Phrase lists driving the vocabulary rules.

    Phrases are lowercase and whitespace-normalized. A leading ``^`` anchors
    a phrase to the start of the sentence.
    """

    independence_terms: tuple[Term, ...] = ()
    hedge_terms: tuple[Term, ...] = ()
    discovery_phrases: tuple[Term, ...] = ()
    atomicity_markers: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        for name in ("independence_terms", "hedge_terms", "discovery_phrases", "atomicity_markers"):
            terms = tuple((phrase, Severity(sev)) for phrase, sev in getattr(self, name))
            for phrase, _ in terms:
                if _normalize_phrase(phrase) != phrase or phrase in ("", "^"):
                    raise ValueError(f"lexicon phrase must be non-empty, lowercase, normalized: {phrase!r}")
            object.__setattr__(self, name, terms)


def _normalize_phrase(phrase: str) -> str:
    return normalize_text(phrase).lower()


# file list name -> Lexicon field; "absolute" and "discovery" are both checked as ABSOLUTE
_LIST_FIELDS = {
    "independent": "independence_terms",
    "absolute": "hedge_terms",
    "discovery": "discovery_phrases",
    "atomic": "atomicity_markers",
}
_ABSOLUTE_LISTS = ("absolute", "discovery")


def parse_lexicon(lines: Iterable[str], source: str = "<lexicon>") -> Lexicon:
    lists: dict[str, list[Term]] = {name: [] for name in _LIST_FIELDS}
    seen: dict[str, set[str]] = {"independent": set(), "absolute": set(), "atomic": set()}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconError("expected <list>\\t<severity>\\t<phrase>", line=lineno, path=source)
        list_name, severity_name, raw_phrase = (p.strip() for p in parts)
        list_name = list_name.lower()
        if list_name not in _LIST_FIELDS:
            raise LexiconError(f"unknown list {list_name!r}", line=lineno, path=source)
        try:
            severity = Severity(severity_name.upper())
        except ValueError:
            raise LexiconError(f"unknown severity {severity_name!r}", line=lineno, path=source) from None
        phrase = _normalize_phrase(raw_phrase)
        if phrase in ("", "^"):
            raise LexiconError("empty phrase", line=lineno, path=source)
        group = "absolute" if list_name in _ABSOLUTE_LISTS else list_name
        if phrase in seen[group]:
            raise LexiconError(f"duplicate phrase {phrase!r} in list {group!r}", line=lineno, path=source)
        seen[group].add(phrase)
        lists[list_name].append((phrase, severity))
    return Lexicon(**{field: tuple(lists[name]) for name, field in _LIST_FIELDS.items()})


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Load a lexicon file, or the built-in default lexicon when ``path`` is None."""
    if path is None:
        return default_lexicon()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise LexiconError(f"lexicon file not found: {path}", path=str(path)) from None
    except (OSError, UnicodeDecodeError) as exc:
        raise LexiconError(f"cannot read lexicon: {exc}", path=str(path)) from None
    return parse_lexicon(text.splitlines(), source=str(path))


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    source = resources.files("aida").joinpath("data/default_lexicon.tsv")
    return parse_lexicon(source.read_text(encoding="utf-8").splitlines(), source="default_lexicon.tsv")


def _lexicon_findings(
    text: str, terms: Iterable[Term], dimension: Dimension, rule_id: str, message: str
) -> list[Finding]:
    findings = []
    for phrase, severity in terms:
        rule = rule_id if not phrase.startswith("^") else f"{rule_id}-initial"
        for start, end in find_phrase(text, phrase):
            matched = text[start:end]
            findings.append(
                Finding(dimension, severity, start, end, matched, message.format(matched=matched), rule)
            )
    return findings


def check_declarative(text: str) -> list[Finding]:
    """Structural checks: full stop at the end, capitalized start, at least three tokens."""
    dim, err = Dimension.DECLARATIVE, Severity.ERROR
    if not text:
        return [Finding(dim, err, 0, 0, "", "sentence is empty", "declarative.empty")]
    n = len(text)
    findings = []
    last = text[-1]
    if last in "?!":
        findings.append(Finding(dim, err, n - 1, n, last, f"sentence ends with {last!r} instead of a full stop",
                                "declarative.terminal-punctuation"))
    elif last != ".":
        findings.append(Finding(dim, err, n - 1, n, last, "sentence does not end with a full stop",
                                "declarative.missing-full-stop"))
    elif text.endswith(".."):
        start = n - (len(text) - len(text.rstrip(".")))
        findings.append(Finding(dim, err, start, n, text[start:], "sentence must end with exactly one full stop",
                                "declarative.repeated-full-stop"))

    for i, ch in enumerate(text):
        if ch.isalpha():
            if not ch.isupper():
                findings.append(Finding(dim, err, i, i + 1, ch, "sentence does not start with a capital letter",
                                        "declarative.lowercase-start"))
            break

    if len(text.split()) < 3:
        findings.append(Finding(dim, err, 0, n, text, "fewer than three words; not a complete sentence",
                                "declarative.too-short"))
    return findings


def check_independent(text: str, lexicon: Lexicon | None = None) -> list[Finding]:
    if lexicon is None:
        lexicon = default_lexicon()
    return _lexicon_findings(text, lexicon.independence_terms, Dimension.INDEPENDENT, "independent.reference",
                             "{matched!r} refers to context outside the sentence")


def check_absolute(text: str, lexicon: Lexicon | None = None) -> list[Finding]:
    if lexicon is None:
        lexicon = default_lexicon()
    return (
        _lexicon_findings(text, lexicon.hedge_terms, Dimension.ABSOLUTE, "absolute.hedge",
                          "{matched!r} expresses (un)certainty about the claim")
        + _lexicon_findings(text, lexicon.discovery_phrases, Dimension.ABSOLUTE, "absolute.discovery",
                            "{matched!r} describes how the claim was discovered")
    )


# a terminator ends an inner sentence when followed by whitespace and a capital
_INNER_TERMINATOR_RE = re.compile(r"[.?!]+(?=\s+[\"'(\[]?[A-Z])")
_ABBREVIATIONS = frozenset(
    {"dr", "mr", "mrs", "ms", "prof", "st", "vs", "al", "fig", "figs", "no", "approx", "ca", "cf", "resp"}
)


def _is_abbreviation(text: str, dot: int) -> bool:
    word = re.search(r"(?:\w\.)*(\w+)$", text[:dot])
    if word is None:
        return False
    token = word.group(1)
    dotted = word.group() != token  # e.g. / i.e. / U.S.
    return dotted or (len(token) == 1 and token.isupper()) or token.lower() in _ABBREVIATIONS


def check_atomic(text: str, lexicon: Lexicon | None = None) -> list[Finding]:
    """Semicolons and inner sentence terminators are errors; lexicon markers as configured."""
    if lexicon is None:
        lexicon = default_lexicon()
    dim, err = Dimension.ATOMIC, Severity.ERROR
    findings = [
        Finding(dim, err, m.start(), m.end(), ";", "semicolon joins separate clauses", "atomic.semicolon")
        for m in re.finditer(";", text)
    ]
    for m in _INNER_TERMINATOR_RE.finditer(text):
        if m.group() == "." and _is_abbreviation(text, m.start()):
            continue
        findings.append(Finding(dim, err, m.start(), m.end(), m.group(),
                                "more than one sentence; split into separate claims", "atomic.multiple-sentences"))
    findings += _lexicon_findings(text, lexicon.atomicity_markers, dim, "atomic.marker",
                                  "{matched!r} may join two separate claims")
    return findings


def validate(raw: str, lexicon: Lexicon | None = None) -> ValidationReport:
    """Normalize ``raw`` and run all four checks."""
    if lexicon is None:
        lexicon = default_lexicon()
    text = normalize_text(raw)
    findings = (
        check_atomic(text, lexicon)
        + check_independent(text, lexicon)
        + check_declarative(text)
        + check_absolute(text, lexicon)
    )
    return ValidationReport.from_findings(text, findings)
