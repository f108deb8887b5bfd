"""Acronym long-form mining via parenthetical pattern matching.

Handles both "long form (SHORT)" and "SHORT (long form)" patterns. A long
form is accepted only when every alphanumeric character of the short form,
scanned right to left, appears in order, and the short form's first character
starts a long-form word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .concepts import is_acronym
from .corpus import CorpusSentence, DomainCorpus

_PAREN = re.compile(r"\(([^()]*)\)")
_MAX_SHORT_CHARS = 10
_MAX_SHORT_WORDS = 2


@dataclass(frozen=True)
class AcronymPair:
    short: str
    long: str
    evidence: CorpusSentence


def long_form_word_limit(short: str) -> int:
    return min(len(short) + 5, len(short) * 2)


def match_long_form(short: str, candidate: str) -> str | None:
    """Right-to-left scan of ``short`` against ``candidate``.

    Returns the matched suffix of ``candidate`` starting at a word boundary,
    or None when the characters cannot be aligned.
    """
    s = len(short) - 1
    c = len(candidate) - 1
    while s >= 0:
        ch = short[s].lower()
        if not ch.isalnum():
            s -= 1
            continue
        while c >= 0 and (
            candidate[c].lower() != ch
            or (s == 0 and c > 0 and candidate[c - 1].isalnum())
        ):
            c -= 1
        if c < 0:
            return None
        s -= 1
        c -= 1
    start = c + 1
    while start > 0 and not candidate[start - 1].isspace():
        start -= 1
    return candidate[start:].strip() or None


def _plausible_short(text: str) -> bool:
    return (
        2 <= len(text) <= _MAX_SHORT_CHARS
        and len(text.split()) <= _MAX_SHORT_WORDS
        and is_acronym(text)
    )


def _last_words(text: str, count: int) -> str:
    """Trailing slice of ``text`` containing at most ``count`` words, spacing kept."""
    spans = [m.span() for m in re.finditer(r"\S+", text)]
    if not spans:
        return ""
    start = spans[max(0, len(spans) - count)][0]
    return text[start:]


def find_pairs_in_text(text: str) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for match in _PAREN.finditer(text):
        inner = match.group(1).strip()
        before = text[: match.start()].rstrip()
        if _plausible_short(inner):
            short = inner
            candidate = _last_words(before, long_form_word_limit(short))
            long = match_long_form(short, candidate)
        else:
            prev = before.split()[-1] if before.split() else ""
            prev = prev.strip(".,;:")
            if not _plausible_short(prev):
                continue
            short = prev
            long = match_long_form(short, inner)
        if long is None:
            continue
        if len(long.split()) > long_form_word_limit(short):
            continue
        if long.lower() == short.lower():
            continue
        pairs.append((short, long))
    return pairs


def extract_acronym_pairs(corpus: DomainCorpus) -> list[AcronymPair]:
    """Mine (short, long) pairs from the corpus, merging duplicates.

    Duplicates share the short form and the case-folded long form; the first
    evidence sentence is kept. The raw, unfolded text is scanned since acronym
    case matters.
    """
    out: list[AcronymPair] = []
    seen: set[tuple[str, str]] = set()
    for sentence in corpus:
        for short, long in find_pairs_in_text(sentence.text):
            dedupe_key = (short, long.lower())
            if dedupe_key in seen:
                continue
            seen.add(dedupe_key)
            out.append(AcronymPair(short=short, long=long, evidence=sentence))
    return out
