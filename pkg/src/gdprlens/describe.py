"""Three-part compliance descriptions composed from the knowledge graph.

Each mapped article yields one section built from its ArticleInfo: how
to comply (the article's obligation clauses, contextualized with the
entities matched in the story), why compliance is needed, and which
part of the GDPR it comes from. Sections carry semantically tagged
segments so renderers can style the three parts distinctly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import VersionMismatch
from .kg import EntityKind, KnowledgeGraph, StoryMapping

OPENING_TEXT = "This user story involves the processing of personal data."
NONE_REQUIRED_TEXT = "No GDPR privacy requirement identified for this story."
GENERIC_PLACEHOLDER = "the personal data"

_PLACEHOLDERS = ("data_entity", "action", "actor")


class SegmentTag(str, Enum):
    HOW = "How"
    WHY = "Why"
    SOURCE = "Source"
    PLAIN = "Plain"


class RenderFormat(str, Enum):
    PLAIN_TEXT = "PlainText"
    ANNOTATED_JSON = "AnnotatedJSON"
    MARKDOWN = "Markdown"


@dataclass(frozen=True)
class Segment:
    text: str
    tag: SegmentTag

    def to_dict(self) -> dict:
        return {"text": self.text, "tag": self.tag.value}


@dataclass
class ArticleSection:
    article: str
    how: list[str]
    why: str
    source: str
    segments: list[Segment]

    def to_dict(self) -> dict:
        return {
            "article": self.article,
            "how": list(self.how),
            "why": self.why,
            "source": self.source,
            "segments": [s.to_dict() for s in self.segments],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArticleSection":
        return cls(
            article=d["article"],
            how=list(d.get("how", [])),
            why=d.get("why", ""),
            source=d.get("source", ""),
            segments=[Segment(s["text"], SegmentTag(s["tag"])) for s in d["segments"]],
        )


@dataclass
class ComplianceDescription:
    story_id: str
    kg_version: str
    sections: list[ArticleSection] = field(default_factory=list)
    none_required: bool = False
    notices: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.none_required != (len(self.sections) == 0):
            raise ValueError("none_required must hold exactly when there are no sections")

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "kg_version": self.kg_version,
            "none_required": self.none_required,
            "sections": [s.to_dict() for s in self.sections],
            "notices": list(self.notices),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComplianceDescription":
        return cls(
            story_id=d["story_id"],
            kg_version=d["kg_version"],
            sections=[ArticleSection.from_dict(s) for s in d.get("sections", [])],
            none_required=d["none_required"],
            notices=list(d.get("notices", [])),
        )


def generate(mapping: StoryMapping, kg: KnowledgeGraph) -> ComplianceDescription:
    """Compose the description for a mapped story.

    Pure in (mapping, kg): repeated calls are byte-identical. Every how
    clause comes from an ArticleInfo obligation in the KG file; this
    generator only substitutes story context into placeholders, never
    free-composes compliance text.
    """
    if mapping.kg_version != kg.version:
        raise VersionMismatch(
            f"mapping was built against kg_version {mapping.kg_version!r} but the graph is {kg.version!r}"
        )
    notices: list[str] = []
    context = _placeholder_context(mapping)
    sections: list[ArticleSection] = []
    for article_id in mapping.articles:
        info = kg.articles[article_id]
        how = [_substitute(clause, context, article_id, notices) for clause in info.obligations]
        source = f"{info.id} — {info.title}"
        segments = [Segment(OPENING_TEXT, SegmentTag.PLAIN)]
        segments += [Segment(clause, SegmentTag.HOW) for clause in how]
        segments.append(Segment(info.rationale, SegmentTag.WHY))
        segments.append(Segment(source, SegmentTag.SOURCE))
        sections.append(ArticleSection(article=article_id, how=how, why=info.rationale, source=source, segments=segments))
    return ComplianceDescription(
        story_id=mapping.story_id,
        kg_version=kg.version,
        sections=sections,
        none_required=not sections,
        notices=notices,
    )


def _placeholder_context(mapping: StoryMapping) -> dict[str, str | None]:
    data_entity = next((m.matched_text for m in mapping.entities if m.entity.kind == EntityKind.DATA_ENTITY), None)
    action = next((m.matched_text for m in mapping.entities if m.entity.kind == EntityKind.ACTION), None)
    return {"data_entity": data_entity, "action": action, "actor": mapping.actor}


def _substitute(clause: str, context: dict[str, str | None], article_id: str, notices: list[str]) -> str:
    out = clause
    for name in _PLACEHOLDERS:
        marker = "{" + name + "}"
        if marker not in out:
            continue
        value = context.get(name)
        if value is None:
            value = GENERIC_PLACEHOLDER
            notice = f"{article_id}: no matched {name}; used generic wording"
            if notice not in notices:
                notices.append(notice)
        out = out.replace(marker, value)
    return out


def render(desc: ComplianceDescription, format: RenderFormat | str = RenderFormat.PLAIN_TEXT) -> str:
    fmt = RenderFormat(format)
    if fmt == RenderFormat.ANNOTATED_JSON:
        return json.dumps(desc.to_dict(), ensure_ascii=False, sort_keys=True)
    if desc.none_required:
        if fmt == RenderFormat.MARKDOWN:
            return NONE_REQUIRED_TEXT
        return NONE_REQUIRED_TEXT
    lines: list[str] = []
    for section in desc.sections:
        if fmt == RenderFormat.MARKDOWN:
            lines.append(f"### {section.article}")
            for seg in section.segments:
                if seg.tag == SegmentTag.HOW:
                    lines.append(f"**{seg.text}**")
                elif seg.tag == SegmentTag.WHY:
                    lines.append(f"*{seg.text}*")
                elif seg.tag == SegmentTag.SOURCE:
                    lines.append(f"<u>{seg.text}</u>")
                else:
                    lines.append(seg.text)
        else:
            lines.append(f"[{section.article}]")
            lines.extend(seg.text for seg in section.segments)
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


def parse_annotated(payload: str) -> ComplianceDescription:
    """Inverse of render(..., AnnotatedJSON), used by clients and tests."""
    return ComplianceDescription.from_dict(json.loads(payload))
