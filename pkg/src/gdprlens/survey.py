"""TPB privacy-attitude questionnaire scoring.

Answers are 1..5 Likert values; reverse-scored items are mapped
v -> 6-v before averaging. All arithmetic is exact (fractions), so a
score is reproducible bit-for-bit and safe to compare pre/post.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .errors import IncompleteResponse, MalformedFile, OutOfRangeAnswer, VersionMismatch

LIKERT_MIN = 1
LIKERT_MAX = 5


class TpbComponent(str, Enum):
    ATTITUDE = "Attitude"
    SUBJECTIVE_NORM = "SubjectiveNorm"
    PERCEIVED_CONTROL = "PerceivedControl"


class Phase(str, Enum):
    PRE = "Pre"
    POST = "Post"


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    component: TpbComponent
    reverse_scored: bool = False

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"question {self.id} has empty text")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "component": self.component.value,
            "reverse_scored": self.reverse_scored,
        }


@dataclass(frozen=True)
class Questionnaire:
    version: str
    questions: tuple[Question, ...]

    def __post_init__(self):
        components = {q.component for q in self.questions}
        if components != set(TpbComponent):
            missing = {c.value for c in TpbComponent} - {c.value for c in components}
            raise ValueError(f"questionnaire must cover all three components; missing {sorted(missing)}")
        ids = [q.id for q in self.questions]
        if len(ids) != len(set(ids)):
            raise ValueError("questionnaire question ids must be unique")

    def to_dict(self) -> dict:
        return {"version": self.version, "questions": [q.to_dict() for q in self.questions]}


def load_questionnaire(path: str | Path) -> Questionnaire:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedFile(f"cannot read questionnaire {path}: {exc}") from exc
    return Questionnaire(
        version=payload["version"],
        questions=tuple(
            Question(
                id=q["id"],
                text=q["text"],
                component=TpbComponent(q["component"]),
                reverse_scored=q.get("reverse_scored", False),
            )
            for q in payload["questions"]
        ),
    )


@dataclass
class SurveyResponse:
    respondent_id: str
    phase: Phase
    answers: dict[str, int]
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_dict(self) -> dict:
        return {
            "respondent_id": self.respondent_id,
            "phase": self.phase.value,
            "answers": dict(self.answers),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SurveyResponse":
        return cls(
            respondent_id=d["respondent_id"],
            phase=Phase(d["phase"]),
            answers={k: int(v) for k, v in d["answers"].items()},
            timestamp=d.get("timestamp") or datetime.now(timezone.utc).isoformat(),
        )


@dataclass
class AttitudeScore:
    questionnaire_version: str
    per_component: dict[TpbComponent, Fraction]
    overall: Fraction

    def to_dict(self) -> dict:
        return {
            "questionnaire_version": self.questionnaire_version,
            "per_component": {c.value: str(v) for c, v in sorted(self.per_component.items(), key=lambda kv: kv[0].value)},
            "per_component_float": {c.value: float(v) for c, v in self.per_component.items()},
            "overall": str(self.overall),
            "overall_float": float(self.overall),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AttitudeScore":
        return cls(
            questionnaire_version=d["questionnaire_version"],
            per_component={TpbComponent(c): Fraction(v) for c, v in d["per_component"].items()},
            overall=Fraction(d["overall"]),
        )


@dataclass
class DeltaReport:
    per_component: dict[TpbComponent, Fraction]
    overall: Fraction

    def to_dict(self) -> dict:
        return {
            "per_component": {c.value: str(v) for c, v in sorted(self.per_component.items(), key=lambda kv: kv[0].value)},
            "overall": str(self.overall),
            "overall_float": float(self.overall),
        }


def adjusted_value(value: int, reverse_scored: bool) -> int:
    if not LIKERT_MIN <= value <= LIKERT_MAX:
        raise OutOfRangeAnswer(f"Likert answers must be in {LIKERT_MIN}..{LIKERT_MAX}, got {value}")
    return (LIKERT_MIN + LIKERT_MAX) - value if reverse_scored else value


def score(response: SurveyResponse, questionnaire: Questionnaire) -> AttitudeScore:
    """Score one complete response against a questionnaire.

    Every question must be answered exactly once; iteration order of the
    answer map never affects the result.
    """
    question_ids = {q.id for q in questionnaire.questions}
    answered = set(response.answers)
    if answered != question_ids:
        missing = sorted(question_ids - answered)
        extra = sorted(answered - question_ids)
        parts = []
        if missing:
            parts.append(f"unanswered: {', '.join(missing)}")
        if extra:
            parts.append(f"not in questionnaire: {', '.join(extra)}")
        raise IncompleteResponse("; ".join(parts))
    totals: dict[TpbComponent, list[int]] = {c: [] for c in TpbComponent}
    for question in questionnaire.questions:
        value = adjusted_value(response.answers[question.id], question.reverse_scored)
        totals[question.component].append(value)
    per_component = {
        component: Fraction(sum(values), len(values)) for component, values in totals.items()
    }
    overall = sum(per_component.values(), Fraction(0)) / len(per_component)
    return AttitudeScore(
        questionnaire_version=questionnaire.version,
        per_component=per_component,
        overall=overall,
    )


def compare(pre: AttitudeScore, post: AttitudeScore) -> DeltaReport:
    """Post minus pre, per component and overall."""
    if pre.questionnaire_version != post.questionnaire_version:
        raise VersionMismatch(
            f"scores come from different questionnaire versions: "
            f"{pre.questionnaire_version!r} vs {post.questionnaire_version!r}"
        )
    return DeltaReport(
        per_component={c: post.per_component[c] - pre.per_component[c] for c in TpbComponent},
        overall=post.overall - pre.overall,
    )
