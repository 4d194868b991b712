"""Spelling and format normalization of draft stories.

Two paths produce a CorrectionProposal: an optional external correction
service (a single JSON POST, reply diffed locally into edits), and a
deterministic built-in rule engine (dictionary spell check capped at
edit distance 1, plus re-assembly into the canonical story format).
Either way the proposal is surfaced for developer confirmation; nothing
is applied until it is accepted, and a missing who/what/why is never
invented by the normalizer.
"""
from __future__ import annotations

import difflib
import logging
from dataclasses import dataclass, field
from enum import Enum

import httpx

from .errors import LexiconEmpty, StaleProposal, WrongState
from .model import StoryStatus, TokenKind, UserStory
from .spelling import SpellLexicon
from .stories import apply_parse, is_canonical, parse_story, parse_with_form, render_canonical, tokenize

log = logging.getLogger(__name__)


class EditReason(str, Enum):
    SPELLING = "Spelling"
    FORMAT = "Format"


class ProposalSource(str, Enum):
    RULE_ENGINE = "RuleEngine"
    EXTERNAL_SERVICE = "ExternalService"


@dataclass(frozen=True)
class Edit:
    """A single replacement of original[start:end] by `replacement`."""

    start: int
    end: int
    replacement: str
    reason: EditReason

    def to_dict(self) -> dict:
        return {
            "span": [self.start, self.end],
            "replacement": self.replacement,
            "reason": self.reason.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Edit":
        return cls(start=d["span"][0], end=d["span"][1], replacement=d["replacement"], reason=EditReason(d["reason"]))


@dataclass
class CorrectionProposal:
    story_id: str
    original: str
    corrected: str
    edits: list[Edit] = field(default_factory=list)
    source: ProposalSource = ProposalSource.RULE_ENGINE
    accepted: bool = False
    notes: list[str] = field(default_factory=list)

    def apply_edits(self) -> str:
        """Replay the edit list over the original (used to check the invariant)."""
        out = []
        cursor = 0
        for e in self.edits:
            out.append(self.original[cursor : e.start])
            out.append(e.replacement)
            cursor = e.end
        out.append(self.original[cursor:])
        return "".join(out)

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "original": self.original,
            "corrected": self.corrected,
            "edits": [e.to_dict() for e in self.edits],
            "source": self.source.value,
            "accepted": self.accepted,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CorrectionProposal":
        return cls(
            story_id=d["story_id"],
            original=d["original"],
            corrected=d["corrected"],
            edits=[Edit.from_dict(e) for e in d["edits"]],
            source=ProposalSource(d["source"]),
            accepted=d.get("accepted", False),
            notes=list(d.get("notes", [])),
        )


@dataclass
class CorrectionServiceConfig:
    endpoint: str = ""
    timeout_ms: int = 3000
    enabled: bool = False

    def __post_init__(self):
        if self.enabled and not self.endpoint:
            raise ValueError("correction service enabled but no endpoint configured")


def call_correction_service(cfg: CorrectionServiceConfig, text: str) -> str:
    """POST {text} to the configured endpoint and return its corrected text.

    Raises on any transport or protocol problem; the caller treats that
    as non-fatal and falls back to the rule engine.
    """
    response = httpx.post(cfg.endpoint, json={"text": text}, timeout=cfg.timeout_ms / 1000.0)
    response.raise_for_status()
    payload = response.json()
    corrected = payload.get("corrected")
    if not isinstance(corrected, str):
        raise ValueError("correction service reply has no 'corrected' string")
    return corrected


def propose_corrections(
    story: UserStory, lexicon: SpellLexicon, cfg: CorrectionServiceConfig
) -> CorrectionProposal:
    """Build a correction proposal for a Draft story.

    The external service is tried first when enabled; a reply that
    invents a who/what/why the original did not have is rejected and
    the deterministic rule engine takes over, as it does on any
    transport failure.
    """
    if story.status != StoryStatus.DRAFT:
        raise WrongState(
            f"corrections can only be proposed for Draft stories, story is {story.status.value}",
            required=StoryStatus.DRAFT.value,
        )
    original = story.raw_text
    notes: list[str] = []

    if cfg.enabled:
        try:
            corrected = call_correction_service(cfg, original)
            if _invents_elements(original, corrected):
                notes.append("external correction invented a missing element; reply discarded")
            else:
                edits = _diff_edits(original, corrected)
                return CorrectionProposal(
                    story_id=story.id,
                    original=original,
                    corrected=corrected,
                    edits=edits,
                    source=ProposalSource.EXTERNAL_SERVICE,
                    notes=notes,
                )
        except Exception as exc:  # noqa: BLE001 - any failure falls back to the rule engine
            log.warning("correction service unreachable, using rule engine: %s", exc)
            notes.append(f"correction service unreachable: {exc}")

    corrected, spell_edits, rule_notes = _rule_engine(original, lexicon)
    notes.extend(rule_notes)
    if corrected == original:
        edits: list[Edit] = []
    elif _only_spelling(original, corrected, spell_edits):
        edits = spell_edits
    else:
        edits = _diff_edits(original, corrected, spell_edits)
    return CorrectionProposal(
        story_id=story.id,
        original=original,
        corrected=corrected,
        edits=edits,
        source=ProposalSource.RULE_ENGINE,
        notes=notes,
    )


def accept_correction(story: UserStory, proposal: CorrectionProposal, accept: bool) -> UserStory:
    """Apply (or discard) a proposal with developer confirmation.

    Accepting replaces the story text and promotes it to Normalized only
    when all three elements parse; otherwise it stays Draft and the
    parser keeps reporting what is missing.
    """
    if story.status != StoryStatus.DRAFT:
        raise WrongState(
            f"corrections apply to Draft stories, story is {story.status.value}",
            required=StoryStatus.DRAFT.value,
        )
    if proposal.story_id != story.id or proposal.original != story.raw_text:
        raise StaleProposal("story text changed since this proposal was made")
    if not accept:
        proposal.accepted = False
        return story
    proposal.accepted = True
    story.raw_text = proposal.corrected
    result = parse_story(story.raw_text, story_id=story.id)
    apply_parse(story, result)
    if not result.missing:
        story.status = StoryStatus.NORMALIZED
    return story


def _rule_engine(original: str, lexicon: SpellLexicon) -> tuple[str, list[Edit], list[str]]:
    if len(lexicon) == 0:
        raise LexiconEmpty("spell lexicon has no entries")
    notes: list[str] = []
    spell_edits: list[Edit] = []
    pieces: list[str] = []
    cursor = 0
    for token in tokenize(original):
        if token.kind != TokenKind.WORD or len(token.text) < 3 or token.text in lexicon:
            continue
        suggestion = lexicon.suggest(token.text)
        if suggestion is None:
            notes.append(f"unknown word '{token.text}' left unchanged (no close dictionary entry)")
            continue
        replacement = _match_case(token.text, suggestion)
        if replacement == token.text:
            continue
        spell_edits.append(Edit(start=token.start, end=token.end, replacement=replacement, reason=EditReason.SPELLING))
        pieces.append(original[cursor : token.start])
        pieces.append(replacement)
        cursor = token.end
    pieces.append(original[cursor:])
    spelled = "".join(pieces)

    result, form = parse_with_form(spelled)
    if not result.missing and not is_canonical(spelled):
        story = result.story
        corrected = render_canonical(story.who.text, story.what.text, story.why.text, form)
    else:
        corrected = spelled
    return corrected, spell_edits, notes


def _match_case(original: str, suggestion: str) -> str:
    if original.isupper() and len(original) > 1:
        return suggestion.upper()
    if original[:1].isupper():
        return suggestion.capitalize()
    return suggestion


def _invents_elements(original: str, corrected: str) -> bool:
    before = parse_story(original)
    after = parse_story(corrected)
    found_before = {"who", "what", "why"} - before.missing
    found_after = {"who", "what", "why"} - after.missing
    return not found_after <= found_before


def _only_spelling(original: str, corrected: str, spell_edits: list[Edit]) -> bool:
    """True when the spell edits alone already produce the corrected text."""
    probe = CorrectionProposal(story_id="", original=original, corrected=corrected, edits=spell_edits)
    return probe.apply_edits() == corrected


def _diff_edits(original: str, corrected: str, spell_edits: list[Edit] = ()) -> list[Edit]:
    """Character diff of original vs corrected, as ordered non-overlapping edits.

    Blocks that exactly reproduce a known spell replacement keep the
    Spelling reason; single-word swaps from the external service are
    also labelled Spelling; everything else is Format.
    """
    spell_pairs = {(original[e.start : e.end], e.replacement) for e in spell_edits}
    matcher = difflib.SequenceMatcher(a=original, b=corrected, autojunk=False)
    edits: list[Edit] = []
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        removed = original[i1:i2]
        added = corrected[j1:j2]
        if (removed, added) in spell_pairs:
            reason = EditReason.SPELLING
        elif removed.lower() == added.lower():
            reason = EditReason.FORMAT  # capitalization only
        elif removed.strip().isalpha() and added.strip().isalpha():
            reason = EditReason.SPELLING
        else:
            reason = EditReason.FORMAT
        edits.append(Edit(start=i1, end=i2, replacement=added, reason=reason))
    return edits
