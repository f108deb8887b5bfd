"""Merge mined elements with project glossaries and assemble per-link
explanation bundles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .concepts import Concept, canonical_key
from .graph import Equivalence, KnowledgeGraph, shortest_relation_path
from .model import Glossary, Project, TraceLink

CATEGORIES = ("acronym", "definition", "context")

PROVENANCE_MINED = "mined"
PROVENANCE_GLOSSARY = "glossary"
PROVENANCE_BOTH = "both"


@dataclass(frozen=True)
class ElementValue:
    value: str
    provenance: str


class MergedElements:
    """Per concept key, per category: the chosen element and its provenance."""

    def __init__(self):
        self._data: dict[str, dict[str, ElementValue]] = {}

    def set(self, key: str, category: str, value: str, provenance: str) -> None:
        if category not in CATEGORIES:
            raise ValueError(f"unknown category {category!r}")
        self._data.setdefault(key, {})[category] = ElementValue(value, provenance)

    def get(self, key: str, category: str) -> ElementValue | None:
        return self._data.get(key, {}).get(category)

    def for_key(self, key: str) -> dict[str, ElementValue]:
        return dict(self._data.get(key, {}))

    def keys(self) -> list[str]:
        return sorted(self._data)

    def items(self):
        for key in self.keys():
            yield key, dict(self._data[key])


@dataclass(frozen=True)
class CategoryCoverage:
    glossary_only: int = 0
    mined_only: int = 0
    both: int = 0

    @property
    def total(self) -> int:
        return self.glossary_only + self.mined_only + self.both


@dataclass(frozen=True)
class CoverageReport:
    per_category: Mapping[str, CategoryCoverage]

    def as_rows(self) -> list[tuple[str, int, int, int]]:
        return [
            (cat, cov.glossary_only, cov.mined_only, cov.both)
            for cat, cov in sorted(self.per_category.items())
        ]


def merge_glossary(mined: MergedElements, glossary: Glossary | None) -> tuple[MergedElements, CoverageReport]:
    """Overlay glossary entries on mined elements; the glossary text wins.

    The coverage report counts, per category, how many concepts were explained
    by the glossary alone, by mining alone, or by both.
    """
    glossary = glossary or Glossary()
    merged = MergedElements()
    for key, per_category in mined.items():
        for category, element in per_category.items():
            merged.set(key, category, element.value, element.provenance)
    by_category: dict[str, Mapping[str, str]] = {
        "acronym": {canonical_key(short): long for short, long in glossary.acronyms.items()},
        "definition": {canonical_key(k): v for k, v in glossary.definitions.items()},
        "context": {canonical_key(k): v for k, v in (glossary.contexts or {}).items()},
    }
    for category, entries in by_category.items():
        for key, value in entries.items():
            existing = merged.get(key, category)
            provenance = PROVENANCE_BOTH if existing is not None else PROVENANCE_GLOSSARY
            merged.set(key, category, value, provenance)
    counts = {}
    for category in CATEGORIES:
        glossary_only = mined_only = both = 0
        for key in merged.keys():
            element = merged.get(key, category)
            if element is None:
                continue
            if element.provenance == PROVENANCE_GLOSSARY:
                glossary_only += 1
            elif element.provenance == PROVENANCE_MINED:
                mined_only += 1
            else:
                both += 1
        counts[category] = CategoryCoverage(glossary_only, mined_only, both)
    return merged, CoverageReport(per_category=counts)


@dataclass(frozen=True)
class Annotation:
    key: str
    span: tuple[int, int]
    importance: float
    color: int
    underlined: bool
    elements: Mapping[str, str]
    provenance: Mapping[str, str]


@dataclass(frozen=True)
class ArtifactView:
    artifact_id: str
    text: str
    annotations: tuple[Annotation, ...]


@dataclass(frozen=True)
class Relation:
    left: str
    right: str
    kind: str  # "equivalence" | "triplet_path"
    label: str
    path: tuple[str, ...] | None = None


@dataclass(frozen=True)
class LinkExplanation:
    link_id: str
    source: ArtifactView
    target: ArtifactView
    relations: tuple[Relation, ...]

    def to_json_dict(self) -> dict:
        def view(side: ArtifactView) -> dict:
            return {
                "artifact_id": side.artifact_id,
                "text": side.text,
                "annotations": [
                    {
                        "key": a.key,
                        "span": [a.span[0], a.span[1]],
                        "importance": float(f"{a.importance:.4f}"),
                        "color": a.color,
                        "underlined": a.underlined,
                        "elements": dict(sorted(a.elements.items())),
                        "provenance": dict(sorted(a.provenance.items())),
                    }
                    for a in side.annotations
                ],
            }

        relations = []
        for r in self.relations:
            row: dict = {"left": r.left, "right": r.right, "kind": r.kind, "label": r.label}
            if r.path is not None:
                row["path"] = list(r.path)
            relations.append(row)
        return {
            "link_id": self.link_id,
            "source": view(self.source),
            "target": view(self.target),
            "relations": relations,
        }


def explanation_to_json(explanation: LinkExplanation) -> str:
    return json.dumps(
        explanation.to_json_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":")
    )


def _drop_overlaps(concepts: Sequence[Concept]) -> list[Concept]:
    # spans must not overlap within one artifact; earlier, longer spans win
    ordered = sorted(concepts, key=lambda c: (c.char_span[0], -(c.char_span[1] - c.char_span[0])))
    kept: list[Concept] = []
    cursor = -1
    for concept in ordered:
        start, end = concept.char_span
        if start >= cursor:
            kept.append(concept)
            cursor = end
    return kept


def assemble_explanation(
    link: TraceLink,
    project: Project,
    side_concepts: Mapping[str, Sequence[Concept]],
    merged: MergedElements,
    graph: KnowledgeGraph | None,
    equivalences: Iterable[Equivalence],
    importances: Mapping[tuple[str, str], float],
    max_hops: int = 1,
) -> LinkExplanation:
    """Bundle both artifacts' annotated concepts and their cross relations.

    ``side_concepts`` maps each artifact id to its located, filtered concepts;
    ``importances`` is keyed by (artifact_id, key) and already normalized over
    the pair. Color indices follow first appearance, source side first, so a
    key shared across sides keeps one stable color.
    """
    try:
        source = project.artifact(link.source_artifact_id)
        target = project.artifact(link.target_artifact_id)
    except KeyError as exc:
        raise ValueError(f"link {link.id} references unknown artifact {exc}") from exc

    located = {
        source.id: _drop_overlaps(side_concepts.get(source.id, ())),
        target.id: _drop_overlaps(side_concepts.get(target.id, ())),
    }
    colors: dict[str, int] = {}
    for artifact_id in (source.id, target.id):
        for concept in located[artifact_id]:
            if concept.id not in colors:
                colors[concept.id] = len(colors)

    def side_view(artifact) -> ArtifactView:
        annotations = []
        for concept in located[artifact.id]:
            elements = {
                category: element.value
                for category, element in merged.for_key(concept.id).items()
            }
            provenance = {
                category: element.provenance
                for category, element in merged.for_key(concept.id).items()
            }
            annotations.append(
                Annotation(
                    key=concept.id,
                    span=concept.char_span,
                    importance=importances.get((artifact.id, concept.id), 1.0),
                    color=colors[concept.id],
                    underlined=bool(elements),
                    elements=elements,
                    provenance=provenance,
                )
            )
        return ArtifactView(artifact_id=artifact.id, text=artifact.text, annotations=tuple(annotations))

    relations: list[Relation] = []
    seen_relations: set[tuple] = set()
    for eq in sorted(equivalences, key=lambda e: (e.left, e.right, e.kind)):
        label = "equivalent" if eq.kind == "lemma_identical" else "abstraction"
        marker = (eq.left, eq.right, "equivalence", label)
        if marker not in seen_relations:
            seen_relations.add(marker)
            relations.append(Relation(left=eq.left, right=eq.right, kind="equivalence", label=label))
    if graph is not None:
        source_keys = sorted({c.id for c in located[source.id]})
        target_keys = sorted({c.id for c in located[target.id]})
        for left in source_keys:
            for right in target_keys:
                if left == right or left not in graph.nodes or right not in graph.nodes:
                    continue
                path = shortest_relation_path(graph, left, right, max_hops=max_hops)
                if path is None:
                    continue
                marker = (left, right, "triplet_path", path.nodes)
                if marker in seen_relations:
                    continue
                seen_relations.add(marker)
                relations.append(
                    Relation(
                        left=left,
                        right=right,
                        kind="triplet_path",
                        label=" / ".join(path.labels),
                        path=path.nodes,
                    )
                )
    return LinkExplanation(
        link_id=link.id,
        source=side_view(source),
        target=side_view(target),
        relations=tuple(relations),
    )
