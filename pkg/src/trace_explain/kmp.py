"""Knuth-Morris-Pratt substring search with case-insensitive folding."""

from __future__ import annotations


def _fold(s: str) -> str:
    # per-character lowering keeps offsets valid even for the few code points
    # whose lower() expands
    return "".join(c.lower() if len(c.lower()) == 1 else c for c in s)


def failure_function(pattern: str) -> list[int]:
    """Longest proper prefix of pattern[:i+1] that is also its suffix."""
    lps = [0] * len(pattern)
    length = 0
    i = 1
    while i < len(pattern):
        if pattern[i] == pattern[length]:
            length += 1
            lps[i] = length
            i += 1
        elif length:
            length = lps[length - 1]
        else:
            lps[i] = 0
            i += 1
    return lps


def kmp_find(pattern: str, text: str) -> list[int]:
    """All (possibly overlapping) match offsets of pattern in text, ascending.

    Matching is case-insensitive. Runs in O(|pattern| + |text|).
    """
    if not pattern:
        raise ValueError("pattern must be non-empty")
    pat = _fold(pattern)
    txt = _fold(text)
    lps = failure_function(pat)
    matches: list[int] = []
    i = j = 0
    while i < len(txt):
        if txt[i] == pat[j]:
            i += 1
            j += 1
            if j == len(pat):
                matches.append(i - j)
                j = lps[j - 1]
        elif j:
            j = lps[j - 1]
        else:
            i += 1
    return matches


def word_boundary_matches(pattern: str, text: str) -> list[int]:
    """Match offsets whose neighbors are non-alphanumeric or string edges."""
    out = []
    for offset in kmp_find(pattern, text):
        end = offset + len(pattern)
        left_ok = offset == 0 or not text[offset - 1].isalnum()
        right_ok = end == len(text) or not text[end].isalnum()
        if left_ok and right_ok:
            out.append(offset)
    return out
