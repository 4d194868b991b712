"""Pipeline orchestration: projects, stages, events, persistence.

A Project is the durable container for stories and everything derived
from them. Mutations go through the engine, which serializes them per
project, enforces optimistic concurrency via a revision counter, and
persists each project as one JSON document written atomically
(write-to-temp then rename). The stage machine is explicit: a stage
only runs from the story status it requires, and description generation
hard-fails while any diagnostic is still Open.
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from . import ambiguity, cases, describe, kg, normalize, stories, survey
from .errors import (
    Conflict,
    DuplicateId,
    EmptyBatch,
    GateViolation,
    MalformedFile,
    NotFound,
    WrongState,
)
from .model import Diagnostic, DiagnosticState, StoryStatus, UserStory
from .spelling import SpellLexicon


class Stage(str, Enum):
    NORMALIZE = "Normalize"
    DETECT = "Detect"
    MAP = "Map"
    DESCRIBE = "Describe"
    MATCH_CASES = "MatchCases"


# Story status each stage starts from.
STAGE_REQUIRES = {
    Stage.NORMALIZE: StoryStatus.DRAFT,
    Stage.DETECT: StoryStatus.NORMALIZED,
    Stage.MAP: StoryStatus.RESOLVED,
    Stage.DESCRIBE: StoryStatus.RESOLVED,
    Stage.MATCH_CASES: StoryStatus.DESCRIBED,
}


class Actor(str, Enum):
    SYSTEM = "System"
    DEVELOPER = "Developer"


@dataclass(frozen=True)
class PipelineEvent:
    timestamp: str
    project_id: str
    story_id: str
    from_status: StoryStatus
    to_status: StoryStatus
    actor: Actor

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "project_id": self.project_id,
            "story_id": self.story_id,
            "from_status": self.from_status.value,
            "to_status": self.to_status.value,
            "actor": self.actor.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineEvent":
        return cls(
            timestamp=d["timestamp"],
            project_id=d["project_id"],
            story_id=d["story_id"],
            from_status=StoryStatus(d["from_status"]),
            to_status=StoryStatus(d["to_status"]),
            actor=Actor(d["actor"]),
        )


@dataclass
class Project:
    id: str
    name: str
    kg_version: str
    revision: int = 0
    stories: list[UserStory] = field(default_factory=list)
    diagnostics: dict[str, list[Diagnostic]] = field(default_factory=dict)
    proposals: dict[str, normalize.CorrectionProposal] = field(default_factory=dict)
    mappings: dict[str, kg.StoryMapping] = field(default_factory=dict)
    descriptions: dict[str, describe.ComplianceDescription] = field(default_factory=dict)
    case_matches: dict[str, list[cases.CaseMatch]] = field(default_factory=dict)
    survey_records: list[dict] = field(default_factory=list)
    events: list[PipelineEvent] = field(default_factory=list)

    def story(self, story_id: str) -> UserStory:
        for s in self.stories:
            if s.id == story_id:
                return s
        raise NotFound(f"no story {story_id!r} in project {self.id!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kg_version": self.kg_version,
            "revision": self.revision,
            "stories": [s.to_dict() for s in self.stories],
            "diagnostics": {sid: [d.to_dict() for d in ds] for sid, ds in self.diagnostics.items()},
            "proposals": {sid: p.to_dict() for sid, p in self.proposals.items()},
            "mappings": {sid: m.to_dict() for sid, m in self.mappings.items()},
            "descriptions": {sid: d.to_dict() for sid, d in self.descriptions.items()},
            "case_matches": {sid: [m.to_dict() for m in ms] for sid, ms in self.case_matches.items()},
            "survey_records": list(self.survey_records),
            "events": [e.to_dict() for e in self.events],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Project":
        return cls(
            id=d["id"],
            name=d["name"],
            kg_version=d["kg_version"],
            revision=d["revision"],
            stories=[UserStory.from_dict(s) for s in d.get("stories", [])],
            diagnostics={
                sid: [Diagnostic.from_dict(x) for x in ds] for sid, ds in d.get("diagnostics", {}).items()
            },
            proposals={
                sid: normalize.CorrectionProposal.from_dict(p) for sid, p in d.get("proposals", {}).items()
            },
            mappings={sid: kg.StoryMapping.from_dict(m) for sid, m in d.get("mappings", {}).items()},
            descriptions={
                sid: describe.ComplianceDescription.from_dict(x)
                for sid, x in d.get("descriptions", {}).items()
            },
            case_matches={
                sid: [cases.CaseMatch.from_dict(m) for m in ms]
                for sid, ms in d.get("case_matches", {}).items()
            },
            survey_records=list(d.get("survey_records", [])),
            events=[PipelineEvent.from_dict(e) for e in d.get("events", [])],
        )


def serialize_project(project: Project) -> str:
    """Canonical JSON form; loading and re-serializing is byte-identical."""
    return json.dumps(project.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


class ProjectStore:
    """One JSON document per project, written atomically.

    With no data directory the store is memory-only, which is what the
    one-shot CLI commands use. Mutations are serialized per project and
    guarded by a compare-and-set on the revision counter.
    """

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Project] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.data_dir:
            for path in sorted(self.data_dir.glob("*.json")):
                project = Project.from_dict(json.loads(path.read_text(encoding="utf-8")))
                self._cache[project.id] = project

    def _lock_for(self, project_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(project_id, threading.Lock())

    def list(self) -> list[Project]:
        return sorted(self._cache.values(), key=lambda p: p.id)

    def get(self, project_id: str) -> Project:
        if project_id not in self._cache:
            raise NotFound(f"no project {project_id!r}")
        return self._cache[project_id]

    def create(self, project: Project) -> Project:
        with self._registry_lock:
            if project.id in self._cache:
                raise DuplicateId(f"project id {project.id!r} already exists")
            self._cache[project.id] = project
        self._write(project)
        return project

    def update(self, project_id: str, expected_revision: int | None, mutator):
        """Apply `mutator(project)` under the project lock.

        The mutation only proceeds when `expected_revision` matches the
        current revision (None skips the check); the revision is bumped
        exactly once per successful mutation.
        """
        with self._lock_for(project_id):
            project = self.get(project_id)
            if expected_revision is not None and expected_revision != project.revision:
                raise Conflict(
                    f"project {project_id!r} is at revision {project.revision}, "
                    f"request was built against {expected_revision}",
                    expected=expected_revision,
                    actual=project.revision,
                )
            result = mutator(project)
            project.revision += 1
            self._write(project)
            return project, result

    def _write(self, project: Project) -> None:
        if not self.data_dir:
            return
        payload = serialize_project(project)
        target = self.data_dir / f"{project.id}.json"
        fd, tmp_path = tempfile.mkstemp(dir=self.data_dir, prefix=f".{project.id}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp_path, target)
        finally:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)


@dataclass
class DataBundle:
    """Everything the engine needs beyond the projects themselves."""

    graph: kg.KnowledgeGraph
    registry: cases.CaseRegistry
    vague_terms: ambiguity.VagueTermLexicon
    verbs: ambiguity.VerbLexicon
    spell: SpellLexicon
    questionnaire: survey.Questionnaire
    correction: normalize.CorrectionServiceConfig = field(
        default_factory=normalize.CorrectionServiceConfig
    )


@dataclass
class StageOutcome:
    stage: Stage
    story_id: str
    ok: bool
    status: StoryStatus
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "stage": self.stage.value,
            "story_id": self.story_id,
            "ok": self.ok,
            "status": self.status.value,
            "detail": self.detail,
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def parse_batch(text: str) -> list[dict]:
    """Parse a story batch: JSON array, JSON lines, or plain text lines.

    Every record normalizes to {"id": optional str, "text": str}.
    """
    stripped = text.strip()
    if not stripped:
        return []
    try:
        payload = json.loads(stripped)
    except json.JSONDecodeError:
        payload = None
    if payload is not None:
        if isinstance(payload, dict):
            payload = payload.get("stories", [payload])
        if not isinstance(payload, list):
            raise MalformedFile("batch JSON must be an array of {id, text} objects")
        records = []
        for item in payload:
            if isinstance(item, str):
                records.append({"text": item})
            elif isinstance(item, dict) and "text" in item:
                records.append({"id": item.get("id"), "text": item["text"]})
            else:
                raise MalformedFile(f"batch record {item!r} has no 'text'")
        return records
    records = []
    for line in stripped.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("{"):
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedFile(f"bad JSON line in batch: {line[:60]}...") from exc
            if "text" not in obj:
                raise MalformedFile(f"batch record {obj!r} has no 'text'")
            records.append({"id": obj.get("id"), "text": obj["text"]})
        else:
            records.append({"text": line})
    return records


class PipelineEngine:
    """Runs the six-stage pipeline over persisted projects."""

    def __init__(self, store: ProjectStore, data: DataBundle):
        self.store = store
        self.data = data

    # -- projects -----------------------------------------------------

    def create_project(self, name: str, project_id: str | None = None) -> Project:
        pid = project_id or f"p{uuid.uuid4().hex[:8]}"
        return self.store.create(Project(id=pid, name=name, kg_version=self.data.graph.version))

    def list_projects(self) -> list[Project]:
        return self.store.list()

    def get_project(self, project_id: str) -> Project:
        return self.store.get(project_id)

    # -- stories ------------------------------------------------------

    def import_stories(self, project_id: str, records: list[dict], expected_revision: int | None = None):
        if not records:
            raise EmptyBatch("no stories in the import batch")

        def mutate(project: Project):
            existing = {s.id for s in project.stories}
            reports = []
            counter = len(project.stories)
            for record in records:
                counter += 1
                sid = record.get("id") or f"s{counter}"
                if sid in existing:
                    raise DuplicateId(f"story id {sid!r} already exists in project {project.id!r}")
                existing.add(sid)
                result = stories.parse_story(record["text"], story_id=sid)
                story = result.story
                stories.apply_parse(story, result)
                project.stories.append(story)
                project.diagnostics[sid] = stories.validate_format(story)
                reports.append({"story": story, "missing": sorted(result.missing)})
            return reports

        project, reports = self.store.update(project_id, expected_revision, mutate)
        return project, reports

    def story_view(self, project_id: str, story_id: str) -> dict:
        project = self.store.get(project_id)
        story = project.story(story_id)
        return {
            "story": story,
            "diagnostics": project.diagnostics.get(story_id, []),
            "proposal": project.proposals.get(story_id),
            "mapping": project.mappings.get(story_id),
            "description": project.descriptions.get(story_id),
            "case_matches": project.case_matches.get(story_id),
            "revision": project.revision,
        }

    # -- corrections --------------------------------------------------

    def propose_correction(self, project_id: str, story_id: str, expected_revision: int | None = None):
        def mutate(project: Project):
            story = project.story(story_id)
            proposal = normalize.propose_corrections(story, self.data.spell, self.data.correction)
            project.proposals[story_id] = proposal
            return proposal

        return self.store.update(project_id, expected_revision, mutate)

    def accept_correction(
        self, project_id: str, story_id: str, accept: bool, expected_revision: int | None = None
    ):
        def mutate(project: Project):
            story = project.story(story_id)
            proposal = project.proposals.get(story_id)
            if proposal is None:
                raise NotFound(f"no pending proposal for story {story_id!r}")
            before = story.status
            normalize.accept_correction(story, proposal, accept)
            result = stories.parse_story(story.raw_text, story_id=story.id)
            project.diagnostics[story_id] = stories.validate_format(story)
            if accept and story.status != before:
                self._record_event(project, story_id, before, story.status, Actor.DEVELOPER)
            return {"story": story, "missing": sorted(result.missing)}

        return self.store.update(project_id, expected_revision, mutate)

    # -- stages -------------------------------------------------------

    def run_stage(self, project_id: str, story_id: str, stage: Stage, expected_revision: int | None = None):
        def mutate(project: Project):
            story = project.story(story_id)
            required = STAGE_REQUIRES[stage]
            if story.status != required:
                raise WrongState(
                    f"stage {stage.value} requires story status {required.value}, "
                    f"story {story_id!r} is {story.status.value}",
                    required=required.value,
                )
            return self._run_stage(project, story, stage)

        return self.store.update(project_id, expected_revision, mutate)

    def _run_stage(self, project: Project, story: UserStory, stage: Stage) -> StageOutcome:
        if stage == Stage.NORMALIZE:
            proposal = normalize.propose_corrections(story, self.data.spell, self.data.correction)
            project.proposals[story.id] = proposal
            before = story.status
            normalize.accept_correction(story, proposal, accept=True)
            result = stories.parse_story(story.raw_text, story_id=story.id)
            project.diagnostics[story.id] = stories.validate_format(story)
            if story.status != before:
                self._record_event(project, story.id, before, story.status, Actor.SYSTEM)
            ok = not result.missing
            return StageOutcome(
                stage=stage,
                story_id=story.id,
                ok=ok,
                status=story.status,
                detail={"missing": sorted(result.missing), "edits": len(proposal.edits)},
            )

        if stage == Stage.DETECT:
            before = story.status
            diagnostics = ambiguity.detect(story, self.data.vague_terms, self.data.verbs)
            project.diagnostics[story.id] = diagnostics
            if story.status != before:
                self._record_event(project, story.id, before, story.status, Actor.SYSTEM)
            open_count = sum(1 for d in diagnostics if d.state == DiagnosticState.OPEN)
            return StageOutcome(
                stage=stage,
                story_id=story.id,
                ok=True,
                status=story.status,
                detail={"diagnostics": len(diagnostics), "open": open_count},
            )

        if stage == Stage.MAP:
            mapping = kg.map_story(story, list(self.data.graph.rules), self.data.graph)
            project.mappings[story.id] = mapping
            return StageOutcome(
                stage=stage,
                story_id=story.id,
                ok=True,
                status=story.status,
                detail={"articles": list(mapping.articles)},
            )

        if stage == Stage.DESCRIBE:
            open_diags = [
                d for d in project.diagnostics.get(story.id, []) if d.state == DiagnosticState.OPEN
            ]
            if open_diags:
                raise GateViolation(
                    f"story {story.id!r} still has {len(open_diags)} open diagnostic(s); "
                    "resolve or waive them before describing"
                )
            mapping = project.mappings.get(story.id)
            if mapping is None:
                mapping = kg.map_story(story, list(self.data.graph.rules), self.data.graph)
                project.mappings[story.id] = mapping
            description = describe.generate(mapping, self.data.graph)
            project.descriptions[story.id] = description
            before = story.status
            story.status = StoryStatus.DESCRIBED
            self._record_event(project, story.id, before, story.status, Actor.SYSTEM)
            return StageOutcome(
                stage=stage,
                story_id=story.id,
                ok=True,
                status=story.status,
                detail={"none_required": description.none_required, "sections": len(description.sections)},
            )

        if stage == Stage.MATCH_CASES:
            mapping = project.mappings.get(story.id)
            articles = list(mapping.articles) if mapping else []
            matches = cases.match(articles, self.data.registry) if articles else []
            project.case_matches[story.id] = matches
            return StageOutcome(
                stage=stage,
                story_id=story.id,
                ok=True,
                status=story.status,
                detail={"matches": len(matches)},
            )

        raise ValueError(f"unknown stage {stage!r}")

    # -- diagnostics --------------------------------------------------

    def resolve_diagnostic(
        self,
        project_id: str,
        story_id: str,
        diag_id: str,
        new_text: str,
        expected_revision: int | None = None,
    ):
        def mutate(project: Project):
            story = project.story(story_id)
            before = story.status
            result = ambiguity.resolve_diagnostic(
                story,
                project.diagnostics.get(story_id, []),
                diag_id,
                new_text,
                self.data.vague_terms,
                self.data.verbs,
            )
            # Editing the text resets the story and invalidates anything derived from it.
            project.diagnostics[story_id] = result.diagnostics
            project.proposals.pop(story_id, None)
            project.mappings.pop(story_id, None)
            project.descriptions.pop(story_id, None)
            project.case_matches.pop(story_id, None)
            self._record_event(project, story_id, before, StoryStatus.DRAFT, Actor.DEVELOPER)
            self._record_event(project, story_id, StoryStatus.DRAFT, StoryStatus.NORMALIZED, Actor.SYSTEM)
            if story.status != StoryStatus.NORMALIZED:
                self._record_event(project, story_id, StoryStatus.NORMALIZED, story.status, Actor.SYSTEM)
            return result

        return self.store.update(project_id, expected_revision, mutate)

    def waive_diagnostic(
        self, project_id: str, story_id: str, diag_id: str, note: str, expected_revision: int | None = None
    ):
        def mutate(project: Project):
            story = project.story(story_id)
            diagnostic = ambiguity.waive_diagnostic(project.diagnostics.get(story_id, []), diag_id, note)
            before = story.status
            ambiguity.refresh_gate(story, project.diagnostics.get(story_id, []))
            if story.status != before:
                self._record_event(project, story_id, before, story.status, Actor.DEVELOPER)
            return diagnostic

        return self.store.update(project_id, expected_revision, mutate)

    # -- survey -------------------------------------------------------

    def submit_survey(
        self,
        project_id: str,
        respondent_id: str,
        phase: survey.Phase,
        answers: dict[str, int],
        expected_revision: int | None = None,
    ):
        response = survey.SurveyResponse(respondent_id=respondent_id, phase=phase, answers=answers)
        attitude = survey.score(response, self.data.questionnaire)

        def mutate(project: Project):
            project.survey_records.append({"response": response.to_dict(), "score": attitude.to_dict()})
            return attitude

        return self.store.update(project_id, expected_revision, mutate)

    def attitude_history(self, project_id: str, respondent_id: str) -> dict:
        project = self.store.get(project_id)
        history = [r for r in project.survey_records if r["response"]["respondent_id"] == respondent_id]
        latest = history[-1] if history else None
        delta = None
        pre = next(
            (r for r in reversed(history) if r["response"]["phase"] == survey.Phase.PRE.value), None
        )
        post = next(
            (r for r in reversed(history) if r["response"]["phase"] == survey.Phase.POST.value), None
        )
        if pre and post:
            delta = survey.compare(
                survey.AttitudeScore.from_dict(pre["score"]),
                survey.AttitudeScore.from_dict(post["score"]),
            ).to_dict()
        return {"respondent_id": respondent_id, "latest": latest, "history": history, "delta": delta}

    # -- internals ----------------------------------------------------

    def _record_event(
        self, project: Project, story_id: str, from_status: StoryStatus, to_status: StoryStatus, actor: Actor
    ) -> None:
        project.events.append(
            PipelineEvent(
                timestamp=_now(),
                project_id=project.id,
                story_id=story_id,
                from_status=from_status,
                to_status=to_status,
                actor=actor,
            )
        )


def load_default_bundle(
    kg_path=None,
    cases_path=None,
    vague_path=None,
    verbs_path=None,
    spell_path=None,
    questionnaire_path=None,
    correction: normalize.CorrectionServiceConfig | None = None,
) -> DataBundle:
    """Load the data bundle, falling back to the files shipped with the package."""
    from . import datafiles

    def pick(override, default_name):
        path = Path(override) if override else datafiles.default_path(default_name)
        if not path.exists():
            from .errors import MissingDataFile

            raise MissingDataFile(f"data file not found: {path}")
        return path

    return DataBundle(
        graph=kg.load_kg(pick(kg_path, datafiles.DEFAULT_KG)),
        registry=cases.ingest(pick(cases_path, datafiles.DEFAULT_CASES)),
        vague_terms=ambiguity.VagueTermLexicon.from_file(pick(vague_path, datafiles.DEFAULT_VAGUE_TERMS)),
        verbs=ambiguity.VerbLexicon.from_file(pick(verbs_path, datafiles.DEFAULT_VERBS)),
        spell=SpellLexicon.from_file(pick(spell_path, datafiles.DEFAULT_SPELL_LEXICON)),
        questionnaire=survey.load_questionnaire(pick(questionnaire_path, datafiles.DEFAULT_QUESTIONNAIRE)),
        correction=correction or normalize.CorrectionServiceConfig(),
    )
