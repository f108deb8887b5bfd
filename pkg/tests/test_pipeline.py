from pathlib import Path

import pytest

from trace_explain.bundle import BundleError, load_project
from trace_explain.corpus import FixtureSearchProvider
from trace_explain.explain import explanation_to_json
from trace_explain.model import ArtifactKind, OriginKind
from trace_explain.pipeline import PipelineConfig, detect_project_concepts, run_pipeline

FIXTURE = Path(__file__).parent / "fixtures" / "miniproject"


@pytest.fixture(scope="module")
def project():
    return load_project(FIXTURE)


@pytest.fixture(scope="module")
def pipeline_result(project):
    provider = FixtureSearchProvider(FIXTURE / "provider")
    config = PipelineConfig(provider=provider, parse_index=provider.parse_index())
    return run_pipeline(project, config)


def test_bundle_loads(project):
    assert project.id == "ptc-mini"
    assert project.domain_name == "Positive Train Control"
    assert len(project.artifacts) == 12
    assert len(project.links) == 9
    assert project.glossary is not None
    assert project.artifact("s1").kind is ArtifactKind.SOURCE
    assert project.artifact("t1").kind is ArtifactKind.TARGET
    for artifact in project.artifacts:
        assert artifact.sentences
        assert artifact.sentences[0].origin.kind is OriginKind.PROJECT_ARTIFACT
        for offset, sentence in zip(artifact.sentence_offsets, artifact.sentences):
            assert artifact.text[offset : offset + len(sentence.raw_text)] == sentence.raw_text


def test_bundle_missing_parse_errors(tmp_path):
    (tmp_path / "project.json").write_text('{"id": "x", "domain_name": "D"}')
    artifacts = tmp_path / "artifacts"
    artifacts.mkdir()
    (artifacts / "a1.txt").write_text("Some text.")
    with pytest.raises(BundleError, match="parse"):
        load_project(tmp_path)


def test_detected_concepts_cover_expected_keys(project):
    concepts = detect_project_concepts(project)
    all_keys = {c.id for cs in concepts.values() for c in cs}
    assert {
        "obu",
        "navigation information",
        "back office",
        "wayside data",
        "tmali csc",
        "train control functions",
        "wiu",
        "operational hazards",
        "rcu",
        "ackermanndrivestamped message",
        "patient health information",
        "ehr",
    } <= all_keys


def test_pipeline_builds_relation_graph(pipeline_result):
    assert pipeline_result.graph.edges() == [
        ("navigation information", "includes", "operational hazards")
    ]


def test_pipeline_surfaces_one_hop_relation(pipeline_result):
    relations = pipeline_result.explanations["L1"].relations
    paths = [r for r in relations if r.kind == "triplet_path"]
    assert len(paths) == 1
    assert paths[0].label == "includes"
    assert paths[0].left == "navigation information"
    assert paths[0].right == "operational hazards"


def test_pipeline_equivalences_on_shared_concepts(pipeline_result):
    relations = pipeline_result.explanations["L3"].relations
    equivalent = {(r.left, r.right) for r in relations if r.label == "equivalent"}
    assert ("navigation information", "navigation information") in equivalent
    assert ("back office", "back office") in equivalent


def test_pipeline_merges_glossary(pipeline_result):
    merged = pipeline_result.merged
    assert merged.get("rcu", "acronym").provenance == "both"
    assert merged.get("rcu", "acronym").value == "Robotic Control Unit"
    assert merged.get("obu", "acronym").provenance == "glossary"
    assert merged.get("wayside data", "definition").provenance == "both"
    counts = pipeline_result.coverage.per_category["acronym"]
    assert (counts.glossary_only, counts.mined_only, counts.both) == (3, 0, 1)


def test_pipeline_annotations_obey_invariants(pipeline_result):
    for explanation in pipeline_result.explanations.values():
        for side in (explanation.source, explanation.target):
            previous_end = 0
            for annotation in side.annotations:
                start, end = annotation.span
                assert 0 <= start < end <= len(side.text)
                assert start >= previous_end
                previous_end = end
                assert annotation.underlined == bool(annotation.elements)
                assert 0.0 <= annotation.importance <= 1.0


def test_pipeline_shared_keys_share_colors(pipeline_result):
    explanation = pipeline_result.explanations["L3"]
    source_colors = {a.key: a.color for a in explanation.source.annotations}
    target_colors = {a.key: a.color for a in explanation.target.annotations}
    for key in set(source_colors) & set(target_colors):
        assert source_colors[key] == target_colors[key]


def test_pipeline_deterministic_output(project):
    provider = FixtureSearchProvider(FIXTURE / "provider")
    config = PipelineConfig(provider=provider, parse_index=provider.parse_index())
    first = run_pipeline(project, config)
    second = run_pipeline(project, config)
    for link_id in first.explanations:
        assert explanation_to_json(first.explanations[link_id]) == explanation_to_json(
            second.explanations[link_id]
        )


def test_pipeline_reports_misses(pipeline_result):
    report = pipeline_result.collection_report
    assert "obu" in report.misses  # no fixture page for this concept
    assert "rcu" in report.hits
    assert not report.failures
