"""Rule-based sentence segmentation for plain prose."""

from __future__ import annotations

import re
from importlib import resources

_TERMINATORS = ".?!"
_WORD_BEFORE = re.compile(r"[A-Za-z][A-Za-z.]*$")


def default_abbreviations() -> frozenset[str]:
    text = resources.files("trace_explain.data").joinpath("abbreviations.txt").read_text("utf-8")
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def _is_split_point(text: str, i: int, abbreviations: frozenset[str]) -> bool:
    ch = text[i]
    if ch not in _TERMINATORS:
        return False
    if ch == ".":
        match = _WORD_BEFORE.search(text, 0, i)
        if match:
            word = match.group(0).rstrip(".")
            # no split after a single upper-case letter ("X.") or a known
            # abbreviation ("Dr.", "e.g.")
            if len(word) == 1 and word.isupper():
                return False
            if word.lower() in abbreviations:
                return False
    j = i + 1
    if j >= len(text):
        return True
    if not text[j].isspace():
        return False
    while j < len(text) and text[j].isspace():
        j += 1
    return j >= len(text) or text[j].isupper()


def segment_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[tuple[int, str]]:
    """Split prose into (offset, sentence) spans.

    Splits after '.', '?' or '!' followed by whitespace and an upper-case
    letter, or at end of text. Spans are trimmed of surrounding whitespace and
    cover all non-whitespace characters of the input.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    spans: list[tuple[int, str]] = []
    start = 0
    for i, ch in enumerate(text):
        if ch in _TERMINATORS and _is_split_point(text, i, abbreviations):
            piece = text[start : i + 1]
            stripped = piece.strip()
            if stripped:
                offset = start + len(piece) - len(piece.lstrip())
                spans.append((offset, stripped))
            start = i + 1
    tail = text[start:]
    stripped = tail.strip()
    if stripped:
        offset = start + len(tail) - len(tail.lstrip())
        spans.append((offset, stripped))
    return spans
