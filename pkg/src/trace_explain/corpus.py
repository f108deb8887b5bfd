"""Build the concept domain corpus by filtering sentence streams and by
query-driven collection through a pluggable search provider."""

from __future__ import annotations

import abc
import hashlib
import json
import logging
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .conllu import ParseIndex, fold_text
from .kmp import word_boundary_matches
from .model import ParsedSentence
from .segment import segment_sentences

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusSentence:
    text: str
    source_uri: str
    matched_concepts: frozenset[str]
    parse: ParsedSentence | None = None

    def __post_init__(self) -> None:
        if not self.matched_concepts:
            raise ValueError(f"corpus sentence has no matched concepts: {self.text!r}")
        for key in self.matched_concepts:
            if not word_boundary_matches(key, self.text):
                raise ValueError(f"concept {key!r} does not occur in {self.text!r}")


class DomainCorpus:
    """Sentences that each mention at least one project concept, with a
    bidirectional concept index."""

    def __init__(self, sentences: Iterable[CorpusSentence] = ()):
        self.sentences: list[CorpusSentence] = list(sentences)
        self._index: dict[str, list[int]] = {}
        for i, sentence in enumerate(self.sentences):
            for key in sentence.matched_concepts:
                self._index.setdefault(key, []).append(i)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[CorpusSentence]:
        return iter(self.sentences)

    @property
    def index(self) -> dict[str, list[int]]:
        return {k: list(v) for k, v in self._index.items()}

    def keys(self) -> list[str]:
        return sorted(self._index)

    def sentences_for(self, key: str) -> list[CorpusSentence]:
        return [self.sentences[i] for i in self._index.get(key, ())]

    def with_parses(self, parse_index: ParseIndex) -> "DomainCorpus":
        attached = []
        for sentence in self.sentences:
            parse = parse_index.lookup(sentence.text)
            if parse is not None and sentence.parse is None:
                sentence = CorpusSentence(
                    text=sentence.text,
                    source_uri=sentence.source_uri,
                    matched_concepts=sentence.matched_concepts,
                    parse=parse,
                )
            attached.append(sentence)
        return DomainCorpus(attached)


def topdown_filter(
    sentence_stream: Iterable[tuple[str, str] | str],
    concept_keys: Iterable[str],
    default_uri: str = "",
) -> DomainCorpus:
    """Retain sentences containing at least one concept at word boundaries.

    Stream items are (text, source_uri) pairs or bare strings. Every matching
    key is recorded on the retained sentence; order is preserved.
    """
    keys = sorted({k for k in concept_keys if k.strip()})
    if not keys:
        raise ValueError("concept set must be non-empty")
    retained: list[CorpusSentence] = []
    for item in sentence_stream:
        text, uri = (item, default_uri) if isinstance(item, str) else item
        matched = frozenset(k for k in keys if word_boundary_matches(k, text))
        if matched:
            retained.append(CorpusSentence(text=text, source_uri=uri, matched_concepts=matched))
    return DomainCorpus(retained)


def make_query(concept, domain_name: str) -> str:
    """Search query template targeting one concept within a project domain."""
    surface = concept if isinstance(concept, str) else concept.surface
    surface = " ".join(surface.split())
    domain = " ".join(domain_name.split())
    if not surface or not domain:
        raise ValueError("concept and domain name must be non-empty")
    return f"what is inbody:{surface} in {domain}"


class SearchProvider(abc.ABC):
    """Source of (uri, plain-text body) results for a query string."""

    @abc.abstractmethod
    def query(self, query: str) -> list[tuple[str, str]]:
        raise NotImplementedError


def query_digest(query: str) -> str:
    return hashlib.sha256(query.encode("utf-8")).hexdigest()


class FixtureSearchProvider(SearchProvider):
    """Offline provider backed by a directory of page bodies.

    Each page lives in a file named by the sha256 hex digest of the query
    string, with a ``.txt`` suffix. Missing file means no results.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def path_for(self, query: str) -> Path:
        return self.directory / f"{query_digest(query)}.txt"

    def query(self, query: str) -> list[tuple[str, str]]:
        path = self.path_for(query)
        if not path.is_file():
            return []
        return [(f"fixture://{path.name}", path.read_text("utf-8"))]

    def store(self, query: str, body: str) -> Path:
        path = self.path_for(query)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(body, encoding="utf-8")
        return path

    def parse_index(self) -> ParseIndex:
        return ParseIndex.from_files(sorted(self.directory.glob("*.conllu")))


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__()
        self._chunks: list[str] = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in ("script", "style"):
            self._skip += 1

    def handle_endtag(self, tag):
        if tag in ("script", "style") and self._skip:
            self._skip -= 1

    def handle_data(self, data):
        if not self._skip:
            self._chunks.append(data)

    def text(self) -> str:
        return " ".join(" ".join(self._chunks).split())


def html_to_text(html: str) -> str:
    extractor = _TextExtractor()
    extractor.feed(html)
    return extractor.text()


class HttpSearchProvider(SearchProvider):
    """Live engine adapter; excluded from the test suite by design."""

    def __init__(self, endpoint: str, max_results: int = 10, timeout: float = 10.0):
        self.endpoint = endpoint
        self.max_results = max_results
        self.timeout = timeout

    def query(self, query: str) -> list[tuple[str, str]]:
        import urllib.parse
        import urllib.request

        url = self.endpoint + urllib.parse.quote(query)
        with urllib.request.urlopen(url, timeout=self.timeout) as response:
            payload = response.read().decode("utf-8", errors="replace")
        return [(url, html_to_text(payload))][: self.max_results]


@dataclass
class CollectionReport:
    """Per-concept outcome of a bottom-up collection run."""

    hits: list[str] = field(default_factory=list)
    misses: list[str] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (key, error)


def bottomup_collect(
    concepts: Sequence,
    provider: SearchProvider,
    domain_name: str,
    segmenter=segment_sentences,
) -> tuple[DomainCorpus, CollectionReport]:
    """Query the provider per concept and keep sentences mentioning any concept.

    Returned pages are segmented and passed through the same word-boundary
    filter as the top-down path, against the full concept set. Duplicate
    sentences (by folded text) keep their first source uri. Provider failures
    are recorded and skipped, never fatal.
    """
    surfaces: dict[str, str] = {}
    for concept in concepts:
        surface = concept if isinstance(concept, str) else concept.surface
        key = fold_text(surface)
        surfaces.setdefault(key, surface)
    all_keys = sorted(surfaces)
    report = CollectionReport()
    retained: list[CorpusSentence] = []
    seen: set[str] = set()
    for key in all_keys:
        query = make_query(surfaces[key], domain_name)
        try:
            results = provider.query(query)
        except Exception as exc:  # partial results beat an aborted run
            log.warning("provider failed for %r: %s", query, exc)
            report.failures.append((key, str(exc)))
            continue
        stream = [
            (text, uri)
            for uri, body in results
            for _, text in segmenter(body)
        ]
        hit = False
        if stream:
            matched = topdown_filter(stream, all_keys)
            for sentence in matched:
                hit = hit or key in sentence.matched_concepts
                folded = fold_text(sentence.text)
                if folded in seen:
                    continue
                seen.add(folded)
                retained.append(sentence)
        if hit:
            report.hits.append(key)
        else:
            report.misses.append(key)
    return DomainCorpus(retained), report


def save_corpus(corpus: DomainCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sentence in corpus:
            fh.write(
                json.dumps(
                    {
                        "text": sentence.text,
                        "uri": sentence.source_uri,
                        "concepts": sorted(sentence.matched_concepts),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_corpus(path) -> DomainCorpus:
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            sentences.append(
                CorpusSentence(
                    text=row["text"],
                    source_uri=row.get("uri", ""),
                    matched_concepts=frozenset(row["concepts"]),
                )
            )
    return DomainCorpus(sentences)
