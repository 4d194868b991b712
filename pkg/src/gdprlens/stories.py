"""User-story parsing: who/what/why extraction, tokenization, format checks.

The recognized skeleton is the standard one:

    As a <who>, I want to <what> so that <why>.

accepted case-insensitively with the articles a/an/the, the verbs
want/need, an optional "be able to", the connector "so that" or
"in order to", and optional commas. Anything the pattern cannot find is
reported as missing; the parser never guesses an absent element.
"""
from __future__ import annotations

import re
import uuid

from .model import (
    Diagnostic,
    DiagnosticKind,
    ElementSpan,
    ParseResult,
    Token,
    TokenKind,
    UserStory,
    diagnostic_id,
)

WHO_RE = re.compile(r"\bas\s+(a|an|the)\s+", re.IGNORECASE)
VERB_RE = re.compile(r"\bi\s+(want|need)\s+to\s+(be\s+able\s+to\s+)?", re.IGNORECASE)
# A verb keyword without the required "to <action>" tail: reported as a
# malformed `what`, not silently accepted.
PARTIAL_VERB_RE = re.compile(r"\bi\s+(want|need)\b", re.IGNORECASE)
CONNECTOR_RE = re.compile(r"\b(so\s+that|in\s+order\s+to)\b", re.IGNORECASE)

_TRAILING_JUNK = " \t\r\n,.;:!?"
_LEADING_JUNK = " \t\r\n,"


def tokenize(text: str) -> list[Token]:
    """Split text into Word/Number/Punctuation tokens with offsets.

    Maximal runs of letters become one Word, runs of digits one Number,
    and every other non-whitespace character is its own Punctuation
    token. Offsets are code-point offsets; the token slices plus the
    skipped whitespace reconstruct the input exactly.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha():
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            kind = TokenKind.WORD
        elif ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            kind = TokenKind.NUMBER
        else:
            j = i + 1
            kind = TokenKind.PUNCTUATION
        tokens.append(Token(text=text[i:j], start=i, end=j, kind=kind))
        i = j
    return tokens


def _trim(raw: str, start: int, end: int) -> tuple[int, int]:
    while start < end and raw[start] in _LEADING_JUNK:
        start += 1
    while end > start and raw[end - 1] in _TRAILING_JUNK:
        end -= 1
    return start, end


def _span_or_none(raw: str, start: int, end: int) -> ElementSpan | None:
    start, end = _trim(raw, start, end)
    if start >= end:
        return None
    return ElementSpan.from_raw(raw, start, end)


class ParsedForm:
    """Surface details of a successful parse, used by the normalizer to
    decide whether a story already sits in the canonical format."""

    def __init__(self, article: str, verb: str, be_able: bool, connector: str, comma_before_connector: bool):
        self.article = article
        self.verb = verb
        self.be_able = be_able
        self.connector = connector
        self.comma_before_connector = comma_before_connector


def parse_story(raw: str, story_id: str | None = None) -> ParseResult:
    """Parse raw text into a UserStory, reporting absent elements.

    Total and deterministic: any string is accepted, and every element
    that the canonical pattern cannot locate lands in ``missing``.
    """
    result = _parse(raw, story_id=story_id)
    return result[0]


def parse_with_form(raw: str, story_id: str | None = None) -> tuple[ParseResult, ParsedForm | None]:
    """Like parse_story, but also reports which surface variant matched."""
    return _parse(raw, story_id=story_id)


def _parse(raw: str, story_id: str | None = None) -> tuple[ParseResult, ParsedForm | None]:
    sid = story_id or f"story-{uuid.uuid4().hex[:12]}"
    story = UserStory(id=sid, raw_text=raw)
    missing = {"who", "what", "why"}

    verb_m = VERB_RE.search(raw)
    who_region_end = verb_m.start() if verb_m else len(raw)
    who_m = WHO_RE.search(raw, 0, who_region_end)

    connector_region_start = verb_m.end() if verb_m else (who_m.end() if who_m else 0)
    connector_m = None
    for m in CONNECTOR_RE.finditer(raw, connector_region_start):
        connector_m = m  # last occurrence wins: "so that" nested in `what` binds to `what`

    if who_m:
        who_end = verb_m.start() if verb_m else (connector_m.start() if connector_m else len(raw))
        span = _span_or_none(raw, who_m.end(), who_end)
        if span:
            story.who = span
            missing.discard("who")

    if verb_m:
        what_end = connector_m.start() if connector_m else len(raw)
        span = _span_or_none(raw, verb_m.end(), what_end)
        if span:
            story.what = span
            missing.discard("what")

    if connector_m:
        span = _span_or_none(raw, connector_m.end(), len(raw))
        if span:
            story.why = span
            missing.discard("why")

    form = None
    if verb_m and who_m and connector_m:
        comma = raw[: connector_m.start()].rstrip().endswith(",")
        form = ParsedForm(
            article=who_m.group(1).lower(),
            verb=verb_m.group(1).lower(),
            be_able=bool(verb_m.group(2)),
            connector=re.sub(r"\s+", " ", connector_m.group(1).lower()),
            comma_before_connector=comma,
        )
    return ParseResult(story=story, missing=missing), form


def render_canonical(who: str, what: str, why: str, form: ParsedForm | None = None) -> str:
    """Re-assemble elements into the standard story format.

    The observed article, verb, "be able to" and connector are kept when
    known, so re-assembly fixes mechanics (capitalization, the comma
    after the actor, the final period) without rewording the story.
    """
    article = form.article if form else "a"
    verb = form.verb if form else "want"
    be_able = "be able to " if form and form.be_able else ""
    connector = form.connector if form else "so that"
    comma = "," if form and form.comma_before_connector else ""
    return f"As {article} {who}, I {verb} to {be_able}{what}{comma} {connector} {why}."


def is_canonical(raw: str) -> bool:
    """True when the text already equals its own canonical re-assembly."""
    result, form = parse_with_form(raw)
    if result.missing or form is None:
        return False
    story = result.story
    return raw == render_canonical(story.who.text, story.what.text, story.why.text, form)


def validate_format(story: UserStory) -> list[Diagnostic]:
    """One FormatViolation per element the canonical pattern cannot find."""
    result = parse_story(story.raw_text, story_id=story.id)
    diagnostics = []
    for name in ("who", "what", "why"):
        if name not in result.missing:
            continue
        message = f"user story is missing its '{name}' element"
        if name == "what" and PARTIAL_VERB_RE.search(story.raw_text) and not VERB_RE.search(story.raw_text):
            message = "user story has a malformed 'what' element: found 'I want/need' without a 'to <action>' clause"
        diagnostics.append(
            Diagnostic(
                id=diagnostic_id(story.id, DiagnosticKind.FORMAT_VIOLATION, 0, 0) + f":{name}",
                story_id=story.id,
                kind=DiagnosticKind.FORMAT_VIOLATION,
                span=(0, 0),
                matched_text="",
                message=message,
            )
        )
    return diagnostics


def apply_parse(story: UserStory, result: ParseResult) -> UserStory:
    """Copy parsed spans onto a story (status is managed by the caller)."""
    story.who = result.story.who
    story.what = result.story.what
    story.why = result.story.why
    return story
