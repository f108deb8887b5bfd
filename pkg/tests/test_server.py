from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from trace_explain.bundle import load_project
from trace_explain.corpus import FixtureSearchProvider
from trace_explain.pipeline import PipelineConfig, run_pipeline
from trace_explain.server import ServiceState, create_app
from trace_explain.study import VerdictLog

FIXTURE = Path(__file__).parent / "fixtures" / "miniproject"


@pytest.fixture()
def client(tmp_path):
    project = load_project(FIXTURE)
    provider = FixtureSearchProvider(FIXTURE / "provider")
    result = run_pipeline(
        project, PipelineConfig(provider=provider, parse_index=provider.parse_index())
    )
    state = ServiceState(
        projects={project.id: project},
        explanations=result.explanations,
        verdict_log=VerdictLog(tmp_path / "verdicts.jsonl", known_links={l.id for l in project.links}),
    )
    return TestClient(create_app(state))


def test_list_projects(client):
    payload = client.get("/projects").json()
    assert payload == [
        {
            "id": "ptc-mini",
            "domain_name": "Positive Train Control",
            "artifact_count": 12,
            "link_count": 9,
        }
    ]


def test_list_links(client):
    rows = client.get("/projects/ptc-mini/links").json()
    assert len(rows) == 9
    assert rows[0]["id"] == "L1"
    assert rows[0]["gold_label"] == "correct"
    missing = client.get("/projects/nope/links")
    assert missing.status_code == 404
    assert missing.json()["error"] == "unknown_project"


def test_get_explanation(client):
    payload = client.get("/links/L1/explanation").json()
    assert payload["link_id"] == "L1"
    assert set(payload) == {"link_id", "source", "target", "relations"}
    assert payload["relations"][0]["label"] == "includes"
    missing = client.get("/links/ghost/explanation")
    assert missing.status_code == 404
    assert missing.json()["error"] == "unknown_link"


def test_session_round_trip(client):
    # 9 links is odd, so a session over all hosted links is rejected;
    # that is the stated contract, checked here
    response = client.post(
        "/sessions", json={"participant_id": "alice", "group": 1, "seed": 7}
    )
    assert response.status_code == 400
    assert response.json()["error"] == "invalid_session"


def test_verdict_round_trip(client):
    body = {"participant_id": "alice", "verdict": "correct", "treatment": "with_explanation"}
    first = client.post("/links/L1/verdict", json=body)
    assert first.status_code == 200
    assert first.json()["sequence"] == 1
    second = client.post("/links/L1/verdict", json=body | {"verdict": "dont_know"})
    assert second.json()["sequence"] == 2
    missing = client.post("/links/ghost/verdict", json=body)
    assert missing.status_code == 404
    invalid = client.post("/links/L1/verdict", json=body | {"verdict": "maybe"})
    assert invalid.status_code == 400
    assert invalid.json()["error"] == "invalid_verdict"
    malformed = client.post("/links/L1/verdict", json={"verdict": "correct"})
    assert malformed.status_code == 400
    assert malformed.json()["error"] == "invalid_request"


def _even_state(tmp_path):
    """Synthetic 4-link, 2-project state for session flow tests."""
    from trace_explain.explain import ArtifactView, LinkExplanation
    from trace_explain.model import Artifact, ArtifactKind, Project, TraceLink

    projects = {}
    explanations = {}
    for pid in ("p1", "p2"):
        artifacts = tuple(
            Artifact(id=f"{pid}-{aid}", project_id=pid, kind=kind, text=f"text {aid}")
            for aid, kind in (("a", ArtifactKind.SOURCE), ("b", ArtifactKind.TARGET))
        )
        links = tuple(
            TraceLink(
                id=f"{pid}-L{i}",
                source_artifact_id=f"{pid}-a",
                target_artifact_id=f"{pid}-b",
            )
            for i in range(2)
        )
        projects[pid] = Project(id=pid, domain_name="D", artifacts=artifacts, links=links)
        for link in links:
            explanations[link.id] = LinkExplanation(
                link_id=link.id,
                source=ArtifactView(artifact_id=f"{pid}-a", text="text a", annotations=()),
                target=ArtifactView(artifact_id=f"{pid}-b", text="text b", annotations=()),
                relations=(),
            )
    log = VerdictLog(tmp_path / "verdicts.jsonl", known_links=set(explanations))
    return ServiceState(projects=projects, explanations=explanations, verdict_log=log)


def test_session_flow_until_completion(tmp_path):
    client = TestClient(create_app(_even_state(tmp_path)))
    created = client.post("/sessions", json={"participant_id": "p", "group": 1, "seed": 3}).json()
    session_id = created["session_id"]
    assert len(created["items"]) == 4
    treatments = {i["link_id"]: i["treatment"] for i in created["items"]}
    assert sorted(treatments.values()).count("with_explanation") == 2

    # identical request is idempotent
    again = client.post("/sessions", json={"participant_id": "p", "group": 1, "seed": 3}).json()
    assert again["session_id"] == session_id
    assert again["items"] == created["items"]
    conflict = client.post("/sessions", json={"participant_id": "p", "group": 2, "seed": 3})
    assert conflict.status_code == 409

    submitted = 0
    while True:
        nxt = client.get(f"/sessions/{session_id}/next").json()
        if nxt["done"]:
            assert nxt["submitted"] == 4
            break
        assert nxt["treatment"] == treatments[nxt["link_id"]]
        response = client.post(
            f"/links/{nxt['link_id']}/verdict",
            json={
                "participant_id": "p",
                "verdict": "correct",
                "treatment": nxt["treatment"],
            },
        )
        assert response.status_code == 200
        submitted += 1
        assert submitted <= 4
    assert submitted == 4


def test_unknown_session_404(tmp_path):
    client = TestClient(create_app(_even_state(tmp_path)))
    response = client.get("/sessions/ghost/next")
    assert response.status_code == 404
    assert response.json()["error"] == "unknown_session"
