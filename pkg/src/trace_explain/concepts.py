"""Noun-phrase concept detection, the general-concept blacklist, and importance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .kmp import word_boundary_matches
from .model import Artifact, ParsedSentence, Project

NOUN_TAGS = {"NN", "NNS", "NNP", "NNPS", "NOUN", "PROPN"}
PROPER_TAGS = {"NNP", "NNPS", "PROPN"}
MODIFIER_LABELS = {"compound", "amod", "flat"}


def canonical_key(surface: str) -> str:
    """Lower-cased, single-spaced form used as the concept identity."""
    return " ".join(surface.lower().split())


@dataclass(frozen=True)
class Concept:
    """A detected domain noun phrase.

    ``token_span`` is an inclusive 1-based range in the source sentence;
    ``char_span`` is a half-open offset range, sentence-local until the concept
    is anchored to an artifact.
    """

    id: str
    surface: str
    token_span: tuple[int, int]
    head_index: int
    char_span: tuple[int, int]
    sentence_id: str | None = None
    artifact_id: str | None = None

    def __post_init__(self) -> None:
        lo, hi = self.token_span
        if lo > hi:
            raise ValueError(f"empty token span for concept {self.surface!r}")
        if not (lo <= self.head_index <= hi):
            raise ValueError(f"head outside span for concept {self.surface!r}")


def _token_offsets(sentence: ParsedSentence) -> list[tuple[int, int]]:
    """Locate each token's character range in raw_text by sequential search."""
    offsets = []
    cursor = 0
    for token in sentence.tokens:
        pos = sentence.raw_text.find(token.text, cursor)
        if pos < 0:
            pos = sentence.raw_text.lower().find(token.text.lower(), cursor)
        if pos < 0:
            raise ValueError(
                f"token {token.text!r} not found in sentence {sentence.id}"
            )
        offsets.append((pos, pos + len(token.text)))
        cursor = pos + len(token.text)
    return offsets


def _is_all_upper(text: str) -> bool:
    letters = [c for c in text if c.isalpha()]
    return bool(letters) and all(c.isupper() for c in letters)


def detect_concepts(sentence: ParsedSentence) -> list[Concept]:
    """Detect noun-phrase concepts from a dependency parse.

    A noun that is not itself a compound/amod/flat modifier heads a concept
    spanning the maximal contiguous run of tokens reaching it through those
    labels. Bare single nouns qualify only when tagged proper or written in
    upper case.
    """
    incoming = {a.dependent: a for a in sentence.arcs}
    modifier_children: dict[int, list[int]] = {}
    for arc in sentence.arcs:
        if arc.label in MODIFIER_LABELS and arc.head >= 1:
            modifier_children.setdefault(arc.head, []).append(arc.dependent)

    offsets = _token_offsets(sentence)
    concepts: list[Concept] = []
    for token in sentence.tokens:
        if token.pos not in NOUN_TAGS:
            continue
        arc = incoming.get(token.index)
        if arc is not None and arc.label in MODIFIER_LABELS:
            continue
        members = {token.index}
        frontier = [token.index]
        while frontier:
            node = frontier.pop()
            for child in modifier_children.get(node, ()):
                if child not in members:
                    members.add(child)
                    frontier.append(child)
        lo = hi = token.index
        while lo - 1 in members:
            lo -= 1
        while hi + 1 in members:
            hi += 1
        if lo == hi and not (token.pos in PROPER_TAGS or _is_all_upper(token.text)):
            continue
        start = offsets[lo - 1][0]
        end = offsets[hi - 1][1]
        surface = sentence.raw_text[start:end]
        concepts.append(
            Concept(
                id=canonical_key(surface),
                surface=surface,
                token_span=(lo, hi),
                head_index=token.index,
                char_span=(start, end),
                sentence_id=sentence.id,
            )
        )
    concepts.sort(key=lambda c: c.char_span)
    return concepts


def artifact_concepts(artifact: Artifact) -> list[Concept]:
    """Detect concepts over an artifact, anchored to artifact character offsets."""
    anchored: list[Concept] = []
    for offset, sentence in zip(artifact.sentence_offsets, artifact.sentences):
        for concept in detect_concepts(sentence):
            start, end = concept.char_span
            anchored.append(
                Concept(
                    id=concept.id,
                    surface=concept.surface,
                    token_span=concept.token_span,
                    head_index=concept.head_index,
                    char_span=(start + offset, end + offset),
                    sentence_id=concept.sentence_id,
                    artifact_id=artifact.id,
                )
            )
    return anchored


@dataclass(frozen=True)
class Blacklist:
    """General concepts excluded from explanation."""

    entries: frozenset[str]
    min_count: int = 1000
    top_fraction: float = 0.015
    counts: tuple[tuple[str, int], ...] = ()


def build_blacklist(
    frequencies: Iterable[tuple[str, int]],
    min_count: int = 1000,
    top_fraction: float = 0.015,
) -> Blacklist:
    """Keep keys occurring more than ``min_count`` times, capped to the top
    ``top_fraction`` of all distinct keys ranked by descending count."""
    if not 0 < top_fraction <= 1:
        raise ValueError(f"top_fraction must be in (0, 1], got {top_fraction}")
    totals: dict[str, int] = {}
    for key, count in frequencies:
        if count < 0:
            raise ValueError(f"negative count for {key!r}")
        totals[key] = totals.get(key, 0) + count
    cap = math.ceil(top_fraction * len(totals))
    passing = [(k, c) for k, c in totals.items() if c > min_count]
    passing.sort(key=lambda kc: (-kc[1], kc[0]))
    kept = passing[:cap]
    return Blacklist(
        entries=frozenset(k for k, _ in kept),
        min_count=min_count,
        top_fraction=top_fraction,
        counts=tuple(sorted(kept)),
    )


def save_blacklist(blacklist: Blacklist, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, count in sorted(blacklist.counts):
            fh.write(f"{key}\t{count}\n")


def load_blacklist(path, min_count: int = 1000, top_fraction: float = 0.015) -> Blacklist:
    counts: list[tuple[str, int]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, count = line.rpartition("\t")
            counts.append((key, int(count)))
    return Blacklist(
        entries=frozenset(k for k, _ in counts),
        min_count=min_count,
        top_fraction=top_fraction,
        counts=tuple(sorted(counts)),
    )


def concept_frequencies(sentences: Iterable[ParsedSentence]) -> Iterator[tuple[str, int]]:
    """Aggregate concept occurrence counts over a parsed corpus."""
    totals: dict[str, int] = {}
    for sentence in sentences:
        for concept in detect_concepts(sentence):
            totals[concept.id] = totals.get(concept.id, 0) + 1
    yield from sorted(totals.items())


def filter_general(concepts: Sequence[Concept], blacklist: Blacklist) -> list[Concept]:
    """Drop concepts whose canonical key is blacklisted; order preserved."""
    return [c for c in concepts if c.id not in blacklist.entries]


def is_acronym(concept: Concept | str) -> bool:
    """True when the surface has >= 2 letters and every letter is upper-case."""
    surface = concept.surface if isinstance(concept, Concept) else concept
    letters = [c for c in surface if c.isalpha()]
    return len(letters) >= 2 and all(c.isupper() for c in letters)


def count_occurrences(key: str, text: str) -> int:
    return len(word_boundary_matches(key, text))


def tfidf_weight(key: str, artifact_id: str, project: Project) -> float:
    """Raw importance: in-artifact occurrences x log(1 + N / containing)."""
    artifact = project.artifact(artifact_id)
    occurrences = count_occurrences(key, artifact.text)
    containing = sum(1 for a in project.artifacts if count_occurrences(key, a.text))
    if occurrences == 0 or containing == 0:
        raise ValueError(f"concept {key!r} does not occur in artifact {artifact_id}")
    return occurrences * math.log(1 + len(project.artifacts) / containing)


def importance_scores(
    keys_by_artifact: Mapping[str, Iterable[str]], project: Project
) -> dict[tuple[str, str], float]:
    """Min-max normalize raw tf-idf weights over an artifact pair's concepts.

    Returns (artifact_id, key) -> score in [0, 1]. A singleton (or all-tied)
    batch maps to 1.0.
    """
    raw: dict[tuple[str, str], float] = {}
    for artifact_id, keys in keys_by_artifact.items():
        for key in set(keys):
            raw[(artifact_id, key)] = tfidf_weight(key, artifact_id, project)
    if not raw:
        return {}
    lo = min(raw.values())
    hi = max(raw.values())
    if hi == lo:
        return {pair: 1.0 for pair in raw}
    return {pair: (value - lo) / (hi - lo) for pair, value in raw.items()}


def compute_importance(
    concept: Concept, project: Project, pair_keys: Mapping[str, Iterable[str]] | None = None
) -> float:
    """Importance of one concept normalized over its artifact pair's concepts."""
    if concept.artifact_id is None:
        raise ValueError(f"concept {concept.id!r} is not anchored to an artifact")
    batch = dict(pair_keys) if pair_keys else {concept.artifact_id: [concept.id]}
    batch.setdefault(concept.artifact_id, [])
    keys = set(batch[concept.artifact_id])
    keys.add(concept.id)
    batch[concept.artifact_id] = keys
    scores = importance_scores(batch, project)
    return scores[(concept.artifact_id, concept.id)]
