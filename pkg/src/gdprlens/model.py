"""Core domain types: user stories, element spans, tokens, diagnostics.

Offsets everywhere in this package are 0-based Unicode code-point
offsets into the story's ``raw_text``, half-open ``[start, end)``.
That convention keeps UI highlights stable across the HTTP boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class StoryStatus(str, Enum):
    """Lifecycle of a user story through the pipeline.

    Transitions are monotone along the declared order; editing the raw
    text is the only way back (it resets the story to Draft).
    """

    DRAFT = "Draft"
    NORMALIZED = "Normalized"
    AMBIGUITIES_PENDING = "AmbiguitiesPending"
    RESOLVED = "Resolved"
    DESCRIBED = "Described"

    @property
    def rank(self) -> int:
        return _STATUS_ORDER.index(self)


_STATUS_ORDER = [
    StoryStatus.DRAFT,
    StoryStatus.NORMALIZED,
    StoryStatus.AMBIGUITIES_PENDING,
    StoryStatus.RESOLVED,
    StoryStatus.DESCRIBED,
]

ELEMENT_NAMES = ("who", "what", "why")


class TokenKind(str, Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCTUATION = "Punctuation"


@dataclass(frozen=True)
class Token:
    """A non-whitespace run of the input with its source offsets."""

    text: str
    start: int
    end: int
    kind: TokenKind


@dataclass(frozen=True)
class ElementSpan:
    """One of the who/what/why elements, anchored into raw_text."""

    text: str
    start: int
    end: int

    @classmethod
    def from_raw(cls, raw: str, start: int, end: int) -> "ElementSpan":
        if not (0 <= start < end <= len(raw)):
            raise ValueError(f"span [{start}, {end}) out of bounds for text of length {len(raw)}")
        return cls(text=raw[start:end], start=start, end=end)

    def to_dict(self) -> dict:
        return {"text": self.text, "start": self.start, "end": self.end}

    @classmethod
    def from_dict(cls, d: dict) -> "ElementSpan":
        return cls(text=d["text"], start=d["start"], end=d["end"])


@dataclass
class UserStory:
    """A user story plus whatever structure has been recovered from it."""

    id: str
    raw_text: str
    who: ElementSpan | None = None
    what: ElementSpan | None = None
    why: ElementSpan | None = None
    status: StoryStatus = StoryStatus.DRAFT

    def element(self, name: str) -> ElementSpan | None:
        if name not in ELEMENT_NAMES:
            raise ValueError(f"unknown element {name!r}")
        return getattr(self, name)

    def present_elements(self) -> set[str]:
        return {name for name in ELEMENT_NAMES if self.element(name) is not None}

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "raw_text": self.raw_text,
            "who": self.who.to_dict() if self.who else None,
            "what": self.what.to_dict() if self.what else None,
            "why": self.why.to_dict() if self.why else None,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserStory":
        return cls(
            id=d["id"],
            raw_text=d["raw_text"],
            who=ElementSpan.from_dict(d["who"]) if d.get("who") else None,
            what=ElementSpan.from_dict(d["what"]) if d.get("what") else None,
            why=ElementSpan.from_dict(d["why"]) if d.get("why") else None,
            status=StoryStatus(d["status"]),
        )


class DiagnosticKind(str, Enum):
    LEXICAL = "Lexical"
    SYNTACTIC = "Syntactic"
    PRAGMATIC = "Pragmatic"
    SEMANTIC = "Semantic"  # reserved: never emitted by the built-in detectors
    FORMAT_VIOLATION = "FormatViolation"


class DiagnosticState(str, Enum):
    OPEN = "Open"
    RESOLVED = "Resolved"
    WAIVED = "Waived"


@dataclass
class Diagnostic:
    """A typed, span-anchored finding on one story.

    ``matched_text`` always equals ``raw_text[span[0]:span[1]]`` at the
    time of detection; edits to the story regenerate diagnostics rather
    than patching spans.
    """

    id: str
    story_id: str
    kind: DiagnosticKind
    span: tuple[int, int]
    matched_text: str
    message: str
    state: DiagnosticState = DiagnosticState.OPEN
    waive_note: str | None = None

    def fingerprint(self) -> tuple[DiagnosticKind, str]:
        """Identity used to decide whether an edit actually resolved a finding."""
        return (self.kind, self.matched_text)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "story_id": self.story_id,
            "kind": self.kind.value,
            "span": [self.span[0], self.span[1]],
            "matched_text": self.matched_text,
            "message": self.message,
            "state": self.state.value,
            "waive_note": self.waive_note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Diagnostic":
        return cls(
            id=d["id"],
            story_id=d["story_id"],
            kind=DiagnosticKind(d["kind"]),
            span=(d["span"][0], d["span"][1]),
            matched_text=d["matched_text"],
            message=d["message"],
            state=DiagnosticState(d["state"]),
            waive_note=d.get("waive_note"),
        )


def diagnostic_id(story_id: str, kind: DiagnosticKind, start: int, end: int) -> str:
    """Deterministic id so repeated detection of the same text agrees."""
    return f"{story_id}:{kind.value.lower()}:{start}:{end}"


@dataclass
class ParseResult:
    """Outcome of parsing raw story text: the story plus what was not found."""

    story: UserStory
    missing: set[str] = field(default_factory=set)
