"""Project-affinity scoring and candidate filtering/ranking.

The scorer is pluggable; the default is a deterministic lexical contrast
between the project's own vocabulary and a background vocabulary. A learned
scorer can be mounted without touching the pipeline.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .model import Project

_TOKEN = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _counts(tokens: Iterable[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for token in tokens:
        out[token] = out.get(token, 0) + 1
    return out


def _cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if not a or not b:
        return 0.0
    dot = sum(value * b[term] for term, value in a.items() if term in b)
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    return dot / (norm_a * norm_b)


@dataclass(frozen=True)
class ProjectProfile:
    """Vocabulary profile of a project versus background text."""

    positive_tf: Mapping[str, int]
    doc_freq: Mapping[str, int]
    n_artifacts: int
    background_tf: Mapping[str, int]

    def __post_init__(self) -> None:
        if not self.positive_tf:
            raise ValueError("positive vocabulary must be non-empty")

    @classmethod
    def build(cls, project: Project, background_texts: Sequence[str] = ()) -> "ProjectProfile":
        positive: dict[str, int] = {}
        doc_freq: dict[str, int] = {}
        for artifact in project.artifacts:
            tokens = tokenize(artifact.text)
            for term, count in _counts(tokens).items():
                positive[term] = positive.get(term, 0) + count
                doc_freq[term] = doc_freq.get(term, 0) + 1
        background: dict[str, int] = {}
        for text in background_texts:
            for term, count in _counts(tokenize(text)).items():
                background[term] = background.get(term, 0) + count
        return cls(
            positive_tf=positive,
            doc_freq=doc_freq,
            n_artifacts=len(project.artifacts),
            background_tf=background,
        )

    def _idf(self, term: str) -> float:
        df = max(self.doc_freq.get(term, 0), 1)
        return math.log(1 + max(self.n_artifacts, 1) / df)

    @cached_property
    def positive_centroid(self) -> dict[str, float]:
        return {t: c * self._idf(t) for t, c in self.positive_tf.items()}

    @cached_property
    def background_centroid(self) -> dict[str, float]:
        return {t: c * self._idf(t) for t, c in self.background_tf.items()}


def score_affinity(text: str, profile: ProjectProfile) -> float:
    """Affinity of a sentence to the project domain, in [0, 1].

    Cosine of the text's term counts against the positive tf-idf centroid,
    minus the cosine against the background centroid, mapped through
    (x + 1) / 2. Uninformative inputs land on 0.5.
    """
    vec = _counts(tokenize(text))
    if not vec:
        return 0.5
    diff = _cosine(vec, profile.positive_centroid) - _cosine(vec, profile.background_centroid)
    return (diff + 1.0) / 2.0


class Normalization(enum.Enum):
    PER_BATCH_MINMAX = "per_batch_minmax"
    NONE = "none"


@dataclass(frozen=True)
class FilterConfig:
    threshold: float = 0.5
    normalization: Normalization = Normalization.PER_BATCH_MINMAX

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= 1:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")


@dataclass(frozen=True)
class ScoredElement:
    element: object
    text: str
    score: float

    def __post_init__(self) -> None:
        if not 0 <= self.score <= 1:
            raise ValueError(f"score must be in [0, 1], got {self.score}")


def _rescored(item: ScoredElement, score: float) -> ScoredElement:
    return ScoredElement(element=item.element, text=item.text, score=score)


def _normalize_batch(batch: Sequence[ScoredElement]) -> list[ScoredElement]:
    scores = [item.score for item in batch]
    lo, hi = min(scores), max(scores)
    if hi == lo:
        # degenerate batch: nothing to separate, keep everything
        return [_rescored(item, 1.0) for item in batch]
    return [_rescored(item, (item.score - lo) / (hi - lo)) for item in batch]


@dataclass
class FilterResult:
    best: dict[tuple[str, str], ScoredElement | None]
    survivors: dict[tuple[str, str], list[ScoredElement]]


def filter_rank_select(
    batches: Mapping[tuple[str, str], Sequence[ScoredElement]],
    config: FilterConfig = FilterConfig(),
) -> FilterResult:
    """Normalize, threshold, rank and pick the best element per batch.

    Batches are keyed by (concept, category). Survivors are ranked by
    descending score with ties broken by ascending folded text; an empty
    survivor set yields an explicit None best, not an error.
    """
    best: dict[tuple[str, str], ScoredElement | None] = {}
    survivors: dict[tuple[str, str], list[ScoredElement]] = {}
    for batch_key, items in batches.items():
        scored = list(items)
        if config.normalization is Normalization.PER_BATCH_MINMAX and scored:
            scored = _normalize_batch(scored)
        kept = [item for item in scored if item.score >= config.threshold]
        kept.sort(key=lambda item: (-item.score, item.text.lower()))
        survivors[batch_key] = kept
        best[batch_key] = kept[0] if kept else None
    return FilterResult(best=best, survivors=survivors)


Scorer = Callable[[str], float]


def make_scorer(profile: ProjectProfile) -> Scorer:
    return lambda text: score_affinity(text, profile)


def score_elements(
    elements: Iterable[tuple[object, str]], scorer: Scorer
) -> list[ScoredElement]:
    """Score (element, text) pairs with any scorer returning values in [0, 1]."""
    return [ScoredElement(element=el, text=text, score=scorer(text)) for el, text in elements]
