"""HTTP JSON API serving assembled explanations and capturing study verdicts."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .explain import LinkExplanation
from .model import Project
from .study import (
    StudySession,
    Treatment,
    Verdict,
    VerdictLog,
    VettingVerdict,
    create_study_session,
)


@dataclass
class ServiceState:
    """Immutable assembled data plus the mutable verdict/session stores."""

    projects: dict[str, Project]
    explanations: dict[str, LinkExplanation]
    verdict_log: VerdictLog
    sessions: dict[str, StudySession] = field(default_factory=dict)

    def tagged_links(self) -> list[tuple[str, str]]:
        out = []
        for project in self.projects.values():
            for link in project.links:
                out.append((link.id, project.id))
        return out

    def link_project(self, link_id: str) -> str | None:
        for project in self.projects.values():
            for link in project.links:
                if link.id == link_id:
                    return project.id
        return None


class SessionRequest(BaseModel):
    participant_id: str
    group: int
    seed: int


class VerdictRequest(BaseModel):
    participant_id: str
    verdict: str
    treatment: str


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"error": code, "message": message})


def _session_id(participant_id: str, seed: int) -> str:
    digest = hashlib.sha256(f"{participant_id}\x1f{seed}".encode("utf-8")).hexdigest()
    return f"s-{digest[:16]}"


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="trace-explain")

    @app.exception_handler(HTTPException)
    async def handle_http_error(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, Mapping):
            detail = {"error": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=dict(detail))

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "invalid_request", "message": str(exc.errors())},
        )

    @app.get("/projects")
    def list_projects():
        return [
            {
                "id": project.id,
                "domain_name": project.domain_name,
                "artifact_count": len(project.artifacts),
                "link_count": len(project.links),
            }
            for project in state.projects.values()
        ]

    @app.get("/projects/{project_id}/links")
    def list_links(project_id: str):
        project = state.projects.get(project_id)
        if project is None:
            raise _error(404, "unknown_project", f"no project {project_id!r}")
        return [
            {
                "id": link.id,
                "source_artifact_id": link.source_artifact_id,
                "target_artifact_id": link.target_artifact_id,
                "gold_label": link.gold_label,
            }
            for link in project.links
        ]

    @app.get("/links/{link_id}/explanation")
    def get_explanation(link_id: str):
        explanation = state.explanations.get(link_id)
        if explanation is None:
            raise _error(404, "unknown_link", f"no explanation for link {link_id!r}")
        return explanation.to_json_dict()

    @app.post("/sessions")
    def create_session(body: SessionRequest):
        session_id = _session_id(body.participant_id, body.seed)
        existing = state.sessions.get(session_id)
        if existing is not None:
            if existing.group != body.group:
                raise _error(
                    409,
                    "session_conflict",
                    f"session exists for this participant/seed with group {existing.group}",
                )
            session = existing
        else:
            try:
                session = create_study_session(
                    body.participant_id, state.tagged_links(), body.group, body.seed
                )
            except ValueError as exc:
                raise _error(400, "invalid_session", str(exc))
            state.sessions[session_id] = session
        return {
            "session_id": session_id,
            "participant_id": session.participant_id,
            "group": session.group,
            "seed": session.seed,
            "items": [
                {"link_id": link_id, "treatment": treatment.value}
                for link_id, treatment in session.items
            ],
        }

    @app.get("/sessions/{session_id}/next")
    def next_item(session_id: str):
        session = state.sessions.get(session_id)
        if session is None:
            raise _error(404, "unknown_session", f"no session {session_id!r}")
        for position, (link_id, treatment) in enumerate(session.items):
            if not state.verdict_log.has_verdict(session.participant_id, link_id):
                return {
                    "done": False,
                    "link_id": link_id,
                    "treatment": treatment.value,
                    "position": position,
                    "total": len(session.items),
                }
        return {
            "done": True,
            "submitted": state.verdict_log.count_for(session.participant_id),
            "total": len(session.items),
        }

    @app.post("/links/{link_id}/verdict")
    def post_verdict(link_id: str, body: VerdictRequest):
        if state.link_project(link_id) is None:
            raise _error(404, "unknown_link", f"no link {link_id!r}")
        try:
            verdict = Verdict(body.verdict)
            treatment = Treatment(body.treatment)
        except ValueError as exc:
            raise _error(400, "invalid_verdict", str(exc))
        sequence = state.verdict_log.record(
            VettingVerdict(
                link_id=link_id,
                participant_id=body.participant_id,
                verdict=verdict,
                treatment=treatment,
            )
        )
        return {"link_id": link_id, "participant_id": body.participant_id, "sequence": sequence}

    return app
