"""Core domain types: tokens, dependency parses, artifacts, links, projects."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping


class OriginKind(enum.Enum):
    PROJECT_ARTIFACT = "project_artifact"
    CORPUS_DOCUMENT = "corpus_document"
    SEARCH_RESULT = "search_result"


@dataclass(frozen=True)
class Origin:
    kind: OriginKind = OriginKind.CORPUS_DOCUMENT
    locator: str = ""


@dataclass(frozen=True)
class Token:
    """One token of a parsed sentence. ``index`` is 1-based."""

    index: int
    text: str
    lemma: str
    pos: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if not self.text:
            raise ValueError(f"token {self.index} has empty text")


@dataclass(frozen=True)
class DependencyArc:
    """A labeled head -> dependent arc; head 0 denotes the virtual root."""

    head: int
    dependent: int
    label: str

    def __post_init__(self) -> None:
        if self.dependent < 1:
            raise ValueError(f"arc dependent must be >= 1, got {self.dependent}")
        if self.head < 0:
            raise ValueError(f"arc head must be >= 0, got {self.head}")
        if self.head == self.dependent:
            raise ValueError(f"arc {self.head}->{self.dependent} is a self-loop")


def check_arc_tree(n_tokens: int, arcs: tuple[DependencyArc, ...], sentence_id: str) -> None:
    """Verify the arcs form a tree over token indices rooted at 0.

    Every token must be the dependent of exactly one arc, arc endpoints must
    reference valid indices, and following heads from any token must reach 0
    without cycling.
    """
    head_of: dict[int, int] = {}
    for arc in arcs:
        if arc.dependent > n_tokens or arc.head > n_tokens:
            raise ValueError(
                f"arc {arc.head}->{arc.dependent} out of range, sentence {sentence_id}"
            )
        if arc.dependent in head_of:
            raise ValueError(f"multiple heads, sentence {sentence_id}")
        head_of[arc.dependent] = arc.head
    for index in range(1, n_tokens + 1):
        if index not in head_of:
            raise ValueError(f"token {index} has no head, sentence {sentence_id}")
    for index in range(1, n_tokens + 1):
        seen = set()
        node = index
        while node != 0:
            if node in seen:
                raise ValueError(f"dependency cycle at token {node}, sentence {sentence_id}")
            seen.add(node)
            node = head_of[node]


@dataclass(frozen=True)
class ParsedSentence:
    """A dependency-parsed sentence; the substrate for all rule extraction."""

    id: str
    raw_text: str
    tokens: tuple[Token, ...]
    arcs: tuple[DependencyArc, ...]
    origin: Origin = Origin()

    def __post_init__(self) -> None:
        check_arc_tree(len(self.tokens), self.arcs, self.id)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def incoming(self, index: int) -> DependencyArc | None:
        for arc in self.arcs:
            if arc.dependent == index:
                return arc
        return None

    def dependents(self, index: int, labels: set[str] | None = None) -> list[int]:
        out = [a.dependent for a in self.arcs if a.head == index]
        if labels is not None:
            out = [
                a.dependent
                for a in self.arcs
                if a.head == index and a.label in labels
            ]
        return sorted(out)


class ArtifactKind(enum.Enum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class Artifact:
    """A unit of project documentation with its parsed sentences.

    ``sentence_offsets[i]`` is the character offset of ``sentences[i].raw_text``
    within ``text``; offsets are aligned at load time.
    """

    id: str
    project_id: str
    kind: ArtifactKind
    text: str
    sentences: tuple[ParsedSentence, ...] = ()
    sentence_offsets: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.sentence_offsets) not in (0, len(self.sentences)):
            raise ValueError(f"artifact {self.id}: offsets/sentences length mismatch")
        for off, sent in zip(self.sentence_offsets, self.sentences):
            if off < 0 or off + len(sent.raw_text) > len(self.text):
                raise ValueError(
                    f"artifact {self.id}: sentence {sent.id} offset {off} out of bounds"
                )


@dataclass(frozen=True)
class TraceLink:
    id: str
    source_artifact_id: str
    target_artifact_id: str
    gold_label: str | None = None  # "correct" | "incorrect" | None

    def __post_init__(self) -> None:
        if self.gold_label not in (None, "correct", "incorrect"):
            raise ValueError(f"link {self.id}: bad gold_label {self.gold_label!r}")


@dataclass(frozen=True)
class Glossary:
    """Project-supplied explanations.

    ``acronyms`` maps cased short forms to long names; ``definitions`` and
    ``contexts`` map canonical concept keys to text.
    """

    acronyms: Mapping[str, str] = field(default_factory=dict)
    definitions: Mapping[str, str] = field(default_factory=dict)
    contexts: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Project:
    id: str
    domain_name: str
    artifacts: tuple[Artifact, ...] = ()
    links: tuple[TraceLink, ...] = ()
    glossary: Glossary | None = None

    def __post_init__(self) -> None:
        if not self.domain_name.strip():
            raise ValueError(f"project {self.id}: domain_name must be non-empty")
        ids = {a.id for a in self.artifacts}
        for link in self.links:
            if link.source_artifact_id not in ids or link.target_artifact_id not in ids:
                raise ValueError(f"link {link.id} references unknown artifact")

    def artifact(self, artifact_id: str) -> Artifact:
        for a in self.artifacts:
            if a.id == artifact_id:
                return a
        raise KeyError(artifact_id)

    def link(self, link_id: str) -> TraceLink:
        for l in self.links:
            if l.id == link_id:
                return l
        raise KeyError(link_id)
