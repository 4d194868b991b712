"""HTTP JSON API over the pipeline engine (FastAPI, versioned under /v1).

The endpoints are thin wrappers: every mutation delegates to the engine,
carries the caller's project revision for optimistic concurrency, and
maps domain errors onto status codes (409 for conflicts and state
violations, 404 for unknown ids, 400 for bad input). When a built
single-page client is available its static assets are served from the
configured public directory.
"""
from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__, errors
from .describe import RenderFormat, render
from .kg import Predicate
from .normalize import CorrectionServiceConfig
from .pipeline import DataBundle, PipelineEngine, Project, ProjectStore, Stage, load_default_bundle
from .survey import Phase

log = logging.getLogger("gdprlens.service")

_ERROR_STATUS = {
    errors.NotFound: 404,
    errors.Conflict: 409,
    errors.WrongState: 409,
    errors.StaleProposal: 409,
    errors.GateViolation: 409,
    errors.DuplicateId: 409,
    errors.VersionMismatch: 409,
    errors.EmptyBatch: 400,
    errors.MalformedFile: 400,
    errors.EmptyNote: 400,
    errors.MissingElements: 400,
    errors.IncompleteResponse: 400,
    errors.OutOfRangeAnswer: 400,
    errors.UnboundPattern: 400,
    errors.BadArticleId: 400,
}


@dataclass
class ServiceConfig:
    port: int = 8400
    data_dir: str | None = None
    kg_path: str | None = None
    cases_path: str | None = None
    lexicon_path: str | None = None
    verbs_path: str | None = None
    spell_path: str | None = None
    questionnaire_path: str | None = None
    correction_endpoint: str | None = None
    correction_timeout_ms: int = 3000
    public_dir: str | None = None
    extra: dict = field(default_factory=dict)

    def correction_config(self) -> CorrectionServiceConfig:
        if self.correction_endpoint:
            return CorrectionServiceConfig(
                endpoint=self.correction_endpoint,
                timeout_ms=self.correction_timeout_ms,
                enabled=True,
            )
        return CorrectionServiceConfig()


class CreateProjectBody(BaseModel):
    name: str = Field(min_length=1)


class StoryIn(BaseModel):
    id: str | None = None
    text: str


class ImportBody(BaseModel):
    stories: list[StoryIn] | None = None
    text: str | None = None
    revision: int | None = None


class AcceptBody(BaseModel):
    accept: bool
    revision: int | None = None


class ResolveBody(BaseModel):
    new_text: str
    revision: int | None = None


class WaiveBody(BaseModel):
    note: str
    revision: int | None = None


class StageBody(BaseModel):
    revision: int | None = None


class SurveyBody(BaseModel):
    respondent_id: str
    phase: Phase
    answers: dict[str, int]
    revision: int | None = None


class KgQueryBody(BaseModel):
    subject: str | None = None
    predicate: str | None = None
    object: str | None = None


def _project_payload(project: Project) -> dict:
    return {
        "id": project.id,
        "name": project.name,
        "kg_version": project.kg_version,
        "revision": project.revision,
        "stories": [s.to_dict() for s in project.stories],
    }


def _story_payload(view: dict) -> dict:
    return {
        "story": view["story"].to_dict(),
        "diagnostics": [d.to_dict() for d in view["diagnostics"]],
        "proposal": view["proposal"].to_dict() if view["proposal"] else None,
        "mapping": view["mapping"].to_dict() if view["mapping"] else None,
        "description": view["description"].to_dict() if view["description"] else None,
        "case_matches": [m.to_dict() for m in view["case_matches"]] if view["case_matches"] else None,
        "revision": view["revision"],
    }


def create_app(config: ServiceConfig | None = None, bundle: DataBundle | None = None) -> FastAPI:
    config = config or ServiceConfig()
    state = {
        "bundle": bundle
        or load_default_bundle(
            kg_path=config.kg_path,
            cases_path=config.cases_path,
            vague_path=config.lexicon_path,
            verbs_path=config.verbs_path,
            spell_path=config.spell_path,
            questionnaire_path=config.questionnaire_path,
            correction=config.correction_config(),
        )
    }
    store = ProjectStore(config.data_dir)
    engine = PipelineEngine(store, state["bundle"])
    app = FastAPI(title="gdprlens", version=__version__)

    def current_bundle() -> DataBundle:
        return state["bundle"]

    @app.exception_handler(errors.GdprLensError)
    async def domain_error_handler(_request: Request, exc: errors.GdprLensError):
        status = 500
        for klass, code in _ERROR_STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        payload = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, errors.Conflict):
            payload["expected_revision"] = exc.expected
            payload["actual_revision"] = exc.actual
        return JSONResponse(status_code=status, content=payload)

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "version": __version__,
            "kg_version": current_bundle().graph.version,
            "cases_version": current_bundle().registry.version,
            "questionnaire_version": current_bundle().questionnaire.version,
        }

    @app.post("/v1/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        return _project_payload(engine.create_project(body.name))

    @app.get("/v1/projects")
    def list_projects():
        return [_project_payload(p) for p in engine.list_projects()]

    @app.get("/v1/projects/{pid}")
    def get_project(pid: str):
        return _project_payload(engine.get_project(pid))

    @app.post("/v1/projects/{pid}/stories/import")
    def import_stories(pid: str, body: ImportBody):
        records: list[dict] = []
        if body.stories:
            records = [{"id": s.id, "text": s.text} for s in body.stories]
        elif body.text:
            from .pipeline import parse_batch

            records = parse_batch(body.text)
        project, reports = engine.import_stories(pid, records, expected_revision=body.revision)
        return {
            "revision": project.revision,
            "stories": [
                {"story": r["story"].to_dict(), "missing": r["missing"]} for r in reports
            ],
        }

    @app.get("/v1/projects/{pid}/stories")
    def list_stories(pid: str):
        project = engine.get_project(pid)
        return {
            "revision": project.revision,
            "stories": [
                {
                    "story": s.to_dict(),
                    "open_diagnostics": sum(
                        1 for d in project.diagnostics.get(s.id, []) if d.state.value == "Open"
                    ),
                    "waived_diagnostics": sum(
                        1 for d in project.diagnostics.get(s.id, []) if d.state.value == "Waived"
                    ),
                }
                for s in project.stories
            ],
        }

    @app.get("/v1/projects/{pid}/stories/{sid}")
    def get_story(pid: str, sid: str):
        return _story_payload(engine.story_view(pid, sid))

    @app.post("/v1/projects/{pid}/stories/{sid}/corrections/propose")
    def propose(pid: str, sid: str, body: StageBody | None = None):
        revision = body.revision if body else None
        project, proposal = engine.propose_correction(pid, sid, expected_revision=revision)
        return {"revision": project.revision, "proposal": proposal.to_dict()}

    @app.post("/v1/projects/{pid}/stories/{sid}/corrections/accept")
    def accept(pid: str, sid: str, body: AcceptBody):
        project, report = engine.accept_correction(pid, sid, body.accept, expected_revision=body.revision)
        return {
            "revision": project.revision,
            "story": report["story"].to_dict(),
            "missing": report["missing"],
        }

    @app.post("/v1/projects/{pid}/stories/{sid}/diagnostics/{diag_id}/resolve")
    def resolve(pid: str, sid: str, diag_id: str, body: ResolveBody):
        project, result = engine.resolve_diagnostic(
            pid, sid, diag_id, body.new_text, expected_revision=body.revision
        )
        return {
            "revision": project.revision,
            "resolved": result.resolved,
            "story": result.story.to_dict(),
            "diagnostics": [d.to_dict() for d in result.diagnostics],
        }

    @app.post("/v1/projects/{pid}/stories/{sid}/diagnostics/{diag_id}/waive")
    def waive(pid: str, sid: str, diag_id: str, body: WaiveBody):
        project, diagnostic = engine.waive_diagnostic(
            pid, sid, diag_id, body.note, expected_revision=body.revision
        )
        return {
            "revision": project.revision,
            "diagnostic": diagnostic.to_dict(),
            "story": project.story(sid).to_dict(),
        }

    @app.post("/v1/projects/{pid}/stories/{sid}/stages/{stage}")
    def run_stage(pid: str, sid: str, stage: Stage, body: StageBody | None = None):
        revision = body.revision if body else None
        project, outcome = engine.run_stage(pid, sid, stage, expected_revision=revision)
        return {"revision": project.revision, "outcome": outcome.to_dict()}

    @app.get("/v1/projects/{pid}/stories/{sid}/description")
    def get_description(pid: str, sid: str, format: str = "annotated"):
        view = engine.story_view(pid, sid)
        description = view["description"]
        if description is None:
            raise errors.NotFound(f"story {sid!r} has no description yet (run the Describe stage)")
        if format == "annotated":
            return description.to_dict()
        fmt = RenderFormat.PLAIN_TEXT if format == "plain" else RenderFormat.MARKDOWN
        return PlainTextResponse(render(description, fmt))

    @app.get("/v1/projects/{pid}/stories/{sid}/cases")
    def get_cases(pid: str, sid: str):
        view = engine.story_view(pid, sid)
        matches = view["case_matches"]
        if matches is None:
            raise errors.NotFound(f"story {sid!r} has no case matches yet (run the MatchCases stage)")
        return {"matches": [m.to_dict() for m in matches]}

    @app.get("/v1/survey/questionnaire")
    def questionnaire():
        return current_bundle().questionnaire.to_dict()

    @app.post("/v1/projects/{pid}/survey/responses")
    def submit_survey(pid: str, body: SurveyBody):
        project, attitude = engine.submit_survey(
            pid, body.respondent_id, body.phase, body.answers, expected_revision=body.revision
        )
        return {"revision": project.revision, "score": attitude.to_dict()}

    @app.get("/v1/projects/{pid}/survey/respondents/{rid}")
    def attitude_history(pid: str, rid: str):
        return engine.attitude_history(pid, rid)

    @app.post("/v1/kg/query")
    def kg_query(body: KgQueryBody):
        predicate = Predicate(body.predicate) if body.predicate else None
        triples = current_bundle().graph.query(
            subject=body.subject, predicate=predicate, object=body.object
        )
        return {"triples": [t.to_dict() for t in triples]}

    @app.post("/v1/admin/reload")
    def reload_data():
        state["bundle"] = load_default_bundle(
            kg_path=config.kg_path,
            cases_path=config.cases_path,
            vague_path=config.lexicon_path,
            verbs_path=config.verbs_path,
            spell_path=config.spell_path,
            questionnaire_path=config.questionnaire_path,
            correction=config.correction_config(),
        )
        engine.data = state["bundle"]
        return {"status": "reloaded", "kg_version": state["bundle"].graph.version}

    public_dir = Path(config.public_dir) if config.public_dir else None
    if public_dir and public_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(public_dir), html=True), name="webui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service under uvicorn; structured logs go to stderr."""
    import uvicorn

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="ts=%(asctime)s level=%(levelname)s logger=%(name)s msg=%(message)s",
    )
    app = create_app(config)
    log.info("serving on port %d", config.port)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_config=None)
