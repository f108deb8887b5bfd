"""End-to-end orchestration: concepts -> corpus -> elements -> filter ->
graph -> per-link explanations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .acronyms import extract_acronym_pairs
from .concepts import (
    Blacklist,
    Concept,
    artifact_concepts,
    filter_general,
    importance_scores,
    is_acronym,
)
from .conllu import ParseIndex
from .corpus import CollectionReport, DomainCorpus, SearchProvider, bottomup_collect
from .explain import (
    CoverageReport,
    LinkExplanation,
    MergedElements,
    PROVENANCE_MINED,
    assemble_explanation,
    merge_glossary,
)
from .graph import KnowledgeGraph, build_graph, find_equivalences
from .model import Project
from .quality import (
    FilterConfig,
    ProjectProfile,
    ScoredElement,
    Scorer,
    filter_rank_select,
    make_scorer,
)
from .rules import (
    HierarchicalVerbLexicon,
    extract_contexts,
    extract_definitions,
    extract_triplets,
)


@dataclass
class PipelineConfig:
    blacklist: Blacklist | None = None
    provider: SearchProvider | None = None
    parse_index: ParseIndex | None = None
    background_texts: tuple[str, ...] = ()
    filter_config: FilterConfig = field(default_factory=FilterConfig)
    scorer: Scorer | None = None
    lexicon: HierarchicalVerbLexicon | None = None
    max_hops: int = 1


@dataclass
class PipelineResult:
    project: Project
    concepts_by_artifact: dict[str, list[Concept]]
    corpus: DomainCorpus
    collection_report: CollectionReport | None
    merged: MergedElements
    coverage: CoverageReport
    graph: KnowledgeGraph
    explanations: dict[str, LinkExplanation]


def detect_project_concepts(
    project: Project, blacklist: Blacklist | None = None
) -> dict[str, list[Concept]]:
    out: dict[str, list[Concept]] = {}
    for artifact in project.artifacts:
        concepts = artifact_concepts(artifact)
        if blacklist is not None:
            concepts = filter_general(concepts, blacklist)
        out[artifact.id] = concepts
    return out


def _representative_surfaces(concepts_by_artifact: Mapping[str, Sequence[Concept]]) -> dict[str, str]:
    surfaces: dict[str, str] = {}
    for artifact_id in sorted(concepts_by_artifact):
        for concept in concepts_by_artifact[artifact_id]:
            surfaces.setdefault(concept.id, concept.surface)
    return surfaces


def mine_elements(
    corpus: DomainCorpus,
    concept_keys: Sequence[str],
    scorer: Scorer,
    filter_config: FilterConfig,
    acronym_keys: set[str] | None = None,
) -> MergedElements:
    """Mine candidates per concept per category, score, filter, keep the best."""
    batches: dict[tuple[str, str], list[ScoredElement]] = {}
    pairs = extract_acronym_pairs(corpus)
    keys = set(concept_keys)
    expandable = keys if acronym_keys is None else acronym_keys
    for pair in pairs:
        key = pair.short.lower()
        if key in keys and key in expandable:
            batches.setdefault((key, "acronym"), []).append(
                ScoredElement(element=pair, text=pair.long, score=scorer(pair.long))
            )
    for key in sorted(keys):
        if not corpus.sentences_for(key):
            continue
        for candidate in extract_definitions(key, corpus):
            batches.setdefault((key, "definition"), []).append(
                ScoredElement(
                    element=candidate,
                    text=candidate.sentence.text,
                    score=scorer(candidate.sentence.text),
                )
            )
        for candidate in extract_contexts(key, corpus):
            batches.setdefault((key, "context"), []).append(
                ScoredElement(
                    element=candidate,
                    text=candidate.sentence.text,
                    score=scorer(candidate.sentence.text),
                )
            )
    result = filter_rank_select(batches, filter_config)
    mined = MergedElements()
    for (key, category), best in sorted(result.best.items()):
        if best is not None:
            mined.set(key, category, best.text, PROVENANCE_MINED)
    return mined


def run_pipeline(project: Project, config: PipelineConfig | None = None) -> PipelineResult:
    config = config or PipelineConfig()
    concepts_by_artifact = detect_project_concepts(project, config.blacklist)
    surfaces = _representative_surfaces(concepts_by_artifact)

    collection_report = None
    if config.provider is not None and surfaces:
        corpus, collection_report = bottomup_collect(
            list(surfaces.values()), config.provider, project.domain_name
        )
    else:
        corpus = DomainCorpus()
    if config.parse_index is not None:
        corpus = corpus.with_parses(config.parse_index)

    scorer = config.scorer or make_scorer(
        ProjectProfile.build(project, config.background_texts)
    )
    # acronym expansions only make sense for acronym-shaped concepts
    acronym_keys = {key for key, surface in surfaces.items() if is_acronym(surface)}
    mined = mine_elements(
        corpus, sorted(surfaces), scorer, config.filter_config, acronym_keys=acronym_keys
    )

    merged, coverage = merge_glossary(mined, project.glossary)
    triplets = extract_triplets(corpus, config.lexicon or HierarchicalVerbLexicon.default())
    graph = build_graph(triplets)

    explanations: dict[str, LinkExplanation] = {}
    for link in project.links:
        side_ids = (link.source_artifact_id, link.target_artifact_id)
        side_concepts = {aid: concepts_by_artifact.get(aid, []) for aid in side_ids}
        importances = importance_scores(
            {aid: [c.id for c in cs] for aid, cs in side_concepts.items()}, project
        )
        equivalences = find_equivalences(
            [c.id for c in side_concepts[side_ids[0]]],
            [c.id for c in side_concepts[side_ids[1]]],
        )
        explanations[link.id] = assemble_explanation(
            link,
            project,
            side_concepts,
            merged,
            graph,
            equivalences,
            importances,
            max_hops=config.max_hops,
        )
    return PipelineResult(
        project=project,
        concepts_by_artifact=concepts_by_artifact,
        corpus=corpus,
        collection_report=collection_report,
        merged=merged,
        coverage=coverage,
        graph=graph,
        explanations=explanations,
    )
