"""Word-bounded, case-insensitive phrase matching shared by the linter and the gazetteer."""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable


def _phrase_regex(body: str) -> str:
    pattern = r"\s+".join(re.escape(part) for part in body.split(" "))
    # boundaries only where the phrase begins/ends with a word character;
    # "x." followed by a letter (as in "i.e.") does not count as a boundary
    if re.match(r"\w", body[0]):
        pattern = r"(?<!\w)(?<!\w\.)" + pattern
    if re.match(r"\w", body[-1]):
        pattern += r"(?!\w)(?!\.\w)"
    return pattern


@lru_cache(maxsize=4096)
def phrase_pattern(phrase: str) -> re.Pattern[str]:
    """Compile one lexicon phrase; a leading ``^`` anchors it to the text start."""
    if phrase.startswith("^"):
        return re.compile(r"\A" + _phrase_regex(phrase[1:]), re.IGNORECASE)
    return re.compile(_phrase_regex(phrase), re.IGNORECASE)


def find_phrase(text: str, phrase: str) -> list[tuple[int, int]]:
    return [m.span() for m in phrase_pattern(phrase).finditer(text)]


def _is_word(ch: str) -> bool:
    return re.match(r"\w", ch) is not None


def _trie_regex(node: dict, last: str) -> str:
    """Regex for a phrase trie; longer continuations are tried before stopping."""
    alts = [
        (r"\s+" if ch == " " else re.escape(ch)) + _trie_regex(child, ch)
        for ch, child in sorted(node.items())
        if ch
    ]
    end = None
    if "" in node:
        end = r"(?!\w)(?!\.\w)" if _is_word(last) else ""
    if not alts:
        return end or ""
    body = alts[0] if len(alts) == 1 else "(?:" + "|".join(alts) + ")"
    if end is None:
        return body
    return f"(?:{body})?" if end == "" else f"(?:{body}|{end})"


def longest_match_pattern(phrases: Iterable[str]) -> re.Pattern[str] | None:
    """A trie-shaped alternation so that a left-to-right scan is leftmost-longest.

    Returns None for an empty phrase set. The result does not depend on
    the iteration order of ``phrases``.
    """
    trie: dict = {}
    for phrase in set(phrases):
        if not phrase:
            continue
        node = trie
        for ch in phrase:
            node = node.setdefault(ch, {})
        node[""] = {}
    if not trie:
        return None
    word = {ch: child for ch, child in trie.items() if _is_word(ch)}
    other = {ch: child for ch, child in trie.items() if not _is_word(ch)}
    parts = []
    if word:
        parts.append(r"(?<!\w)(?<!\w\.)(?:" + _trie_regex(word, "") + ")")
    if other:
        parts.append("(?:" + _trie_regex(other, "") + ")")
    return re.compile("|".join(parts), re.IGNORECASE)
