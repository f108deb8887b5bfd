"""Shared fixture helpers for hand-written parses and corpus sentences."""

from __future__ import annotations

from trace_explain.corpus import CorpusSentence
from trace_explain.model import DependencyArc, Origin, ParsedSentence, Token


def sentence(text, rows, sid="s1", origin=None):
    """Build a ParsedSentence from (form, lemma, pos, head, label) rows.

    Token indices are implicit (1-based row order).
    """
    tokens = tuple(
        Token(index=i + 1, text=form, lemma=lemma, pos=pos)
        for i, (form, lemma, pos, _, _) in enumerate(rows)
    )
    arcs = tuple(
        DependencyArc(head=head, dependent=i + 1, label=label)
        for i, (_, _, _, head, label) in enumerate(rows)
    )
    return ParsedSentence(
        id=sid, raw_text=text, tokens=tokens, arcs=arcs, origin=origin or Origin()
    )


def corpus_sentence(parse, matched, uri="fixture://test"):
    return CorpusSentence(
        text=parse.raw_text,
        source_uri=uri,
        matched_concepts=frozenset(matched),
        parse=parse,
    )
