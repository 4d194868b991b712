"""Ambiguity detection over normalized stories, tuned recall-first.

Three rule-based detectors run per story:

* Lexical: longest-match scan of a vague-term lexicon over the tokens.
* Syntactic: a coordination (", and" / " and " / ", or") inside the
  `what` whose following clause contains another action verb, i.e. two
  requirements welded into one story.
* Pragmatic: an access-style head verb applied to a data noun with no
  stated mechanism or channel (no via/through/using/within/by).

False positives are cheap (a finding can be waived with a note); false
negatives are the failure mode these detectors are tuned against. The
Semantic kind exists in the data model but is never emitted here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyNote, MissingElements, NotFound, WrongState
from .model import (
    Diagnostic,
    DiagnosticKind,
    DiagnosticState,
    StoryStatus,
    Token,
    UserStory,
    diagnostic_id,
)
from .stories import apply_parse, parse_story, tokenize
from .text import stem, word_tokens

# Spec-fixed vocabulary of the pragmatic detector.
ACCESS_VERBS = frozenset({"view", "see", "access", "get", "manage", "process", "share", "store"})
CHANNEL_QUALIFIERS = frozenset({"via", "through", "using", "within", "by"})


@dataclass(frozen=True)
class VagueTerm:
    phrase: str
    note: str = ""
    example_refinement: str | None = None


class VagueTermLexicon:
    """Lowercase 1-4 token phrases considered too vague to implement from."""

    def __init__(self, entries):
        self.entries: dict[str, VagueTerm] = {}
        for entry in entries:
            phrase = entry.phrase.strip().lower()
            if not phrase:
                continue
            n_tokens = len(tokenize(phrase))
            if not 1 <= n_tokens <= 4:
                raise ValueError(f"vague phrase {phrase!r} must be 1-4 tokens, got {n_tokens}")
            self.entries[phrase] = VagueTerm(phrase, entry.note, entry.example_refinement)
        # Precomputed token sequences, longest first, for longest-match scanning.
        self._token_seqs: list[tuple[tuple[str, ...], VagueTerm]] = sorted(
            (
                (tuple(t.text for t in tokenize(phrase)), term)
                for phrase, term in self.entries.items()
            ),
            key=lambda pair: -len(pair[0]),
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, phrase: str) -> bool:
        return phrase.strip().lower() in self.entries

    @classmethod
    def from_file(cls, path: str | Path) -> "VagueTermLexicon":
        records = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            VagueTerm(r["phrase"], r.get("note", ""), r.get("example_refinement")) for r in records
        )


@dataclass(frozen=True)
class VerbLexicon:
    """Action verbs (for the syntactic detector) and data nouns (pragmatic)."""

    verbs: frozenset[str]
    data_nouns: frozenset[str]

    @classmethod
    def from_file(cls, path: str | Path) -> "VerbLexicon":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            verbs=frozenset(w.lower() for w in payload["verbs"]),
            data_nouns=frozenset(w.lower() for w in payload["data_nouns"]),
        )

    def verb_stems(self) -> frozenset[str]:
        return frozenset(stem(v) for v in self.verbs)

    def noun_stems(self) -> frozenset[str]:
        return frozenset(stem(n) for n in self.data_nouns)


def detect(story: UserStory, lexicon: VagueTermLexicon, verbs: VerbLexicon) -> list[Diagnostic]:
    """Run all detectors over a Normalized story and update its gate status.

    Pure in its inputs: the same (raw_text, lexicon, verbs) always yields
    the same diagnostics, ordered by span start then kind.
    """
    if story.status != StoryStatus.NORMALIZED:
        raise WrongState(
            f"ambiguity detection requires a Normalized story, story is {story.status.value}",
            required=StoryStatus.NORMALIZED.value,
        )
    tokens = tokenize(story.raw_text)
    diagnostics = _detect_lexical(story, tokens, lexicon)
    diagnostics += _detect_syntactic(story, tokens, verbs)
    diagnostics += _detect_pragmatic(story, tokens, verbs)
    diagnostics.sort(key=lambda d: (d.span[0], d.span[1], d.kind.value))
    if any(d.state == DiagnosticState.OPEN for d in diagnostics):
        story.status = StoryStatus.AMBIGUITIES_PENDING
    else:
        story.status = StoryStatus.RESOLVED
    return diagnostics


def _detect_lexical(story: UserStory, tokens: list[Token], lexicon: VagueTermLexicon) -> list[Diagnostic]:
    found: list[Diagnostic] = []
    lowered = [t.text.lower() for t in tokens]
    i = 0
    while i < len(tokens):
        hit = None
        for seq, term in lexicon._token_seqs:  # longest first
            if lowered[i : i + len(seq)] == list(seq):
                hit = (len(seq), term)
                break
        if hit is None:
            i += 1
            continue
        length, term = hit
        start, end = tokens[i].start, tokens[i + length - 1].end
        message = f"'{story.raw_text[start:end]}' is a vague term"
        if term.note:
            message += f": {term.note}"
        if term.example_refinement:
            message += f" (e.g. {term.example_refinement})"
        found.append(
            Diagnostic(
                id=diagnostic_id(story.id, DiagnosticKind.LEXICAL, start, end),
                story_id=story.id,
                kind=DiagnosticKind.LEXICAL,
                span=(start, end),
                matched_text=story.raw_text[start:end],
                message=message,
            )
        )
        i += length
    return found


def _what_tokens(story: UserStory, tokens: list[Token]) -> list[Token]:
    if story.what is None:
        return []
    return [t for t in tokens if story.what.start <= t.start and t.end <= story.what.end]


def _detect_syntactic(story: UserStory, tokens: list[Token], verbs: VerbLexicon) -> list[Diagnostic]:
    what = _what_tokens(story, tokens)
    if not what:
        return []
    verb_stems = verbs.verb_stems()
    raw = story.raw_text
    conjunctions = []
    for idx, tok in enumerate(what):
        word = tok.text.lower()
        if word == "and":
            after_comma = idx > 0 and what[idx - 1].text == ","
            spaced = (
                tok.start > 0
                and raw[tok.start - 1].isspace()
                and tok.end < len(raw)
                and raw[tok.end].isspace()
            )
            if after_comma or spaced:
                conjunctions.append(idx)
        elif word == "or":
            if idx > 0 and what[idx - 1].text == ",":
                conjunctions.append(idx)
    found = []
    for n, idx in enumerate(conjunctions):
        clause_end_idx = conjunctions[n + 1] if n + 1 < len(conjunctions) else len(what)
        clause = what[idx + 1 : clause_end_idx]
        clause_words = [t for t in clause if t.kind.value == "Word"]
        if not any(stem(t.text) in verb_stems for t in clause_words):
            continue
        start = what[idx].start
        end = clause[-1].end if clause else what[idx].end
        found.append(
            Diagnostic(
                id=diagnostic_id(story.id, DiagnosticKind.SYNTACTIC, start, end),
                story_id=story.id,
                kind=DiagnosticKind.SYNTACTIC,
                span=(start, end),
                matched_text=raw[start:end],
                message="coordination joins two actions; split the story or make one action explicit",
            )
        )
    return found


def _detect_pragmatic(story: UserStory, tokens: list[Token], verbs: VerbLexicon) -> list[Diagnostic]:
    what = _what_tokens(story, tokens)
    words = word_tokens(what)
    if not words:
        return []
    head = words[0]
    if stem(head.text) not in {stem(v) for v in ACCESS_VERBS}:
        return []
    noun_stems = verbs.noun_stems()
    data_noun = next((t for t in words[1:] if stem(t.text) in noun_stems), None)
    if data_noun is None:
        return []
    if any(t.text.lower() in CHANNEL_QUALIFIERS for t in words):
        return []
    span = (story.what.start, story.what.end)
    return [
        Diagnostic(
            id=diagnostic_id(story.id, DiagnosticKind.PRAGMATIC, span[0], span[1]),
            story_id=story.id,
            kind=DiagnosticKind.PRAGMATIC,
            span=span,
            matched_text=story.what.text,
            message=(
                f"'{head.text} {data_noun.text}' does not state a mechanism or channel "
                "(for example via which interface the data is accessed)"
            ),
        )
    ]


@dataclass
class ResolveResult:
    """Outcome of an edit made to resolve one diagnostic."""

    story: UserStory
    diagnostics: list[Diagnostic]
    resolved: bool
    # When False the edit was still applied; the same finding simply
    # reappeared in the regenerated set (UnresolvedAfterEdit).
    target: Diagnostic | None = None


def resolve_diagnostic(
    story: UserStory,
    diagnostics: list[Diagnostic],
    diag_id: str,
    new_story_text: str,
    lexicon: VagueTermLexicon,
    verbs: VerbLexicon,
) -> ResolveResult:
    """Apply replacement text for a story and re-run detection.

    All prior diagnostics (including waived ones) are discarded and
    regenerated from scratch; the targeted finding counts as resolved
    only when no regenerated finding shares its (kind, matched_text).
    """
    target = _find(diagnostics, diag_id)
    if target.state != DiagnosticState.OPEN:
        raise WrongState(f"diagnostic {diag_id} is {target.state.value}, not Open")
    result = parse_story(new_story_text, story_id=story.id)
    if result.missing:
        raise MissingElements(result.missing)
    story.raw_text = new_story_text
    apply_parse(story, result)
    story.status = StoryStatus.NORMALIZED
    regenerated = detect(story, lexicon, verbs)
    resolved = target.fingerprint() not in {d.fingerprint() for d in regenerated}
    target.state = DiagnosticState.RESOLVED if resolved else target.state
    return ResolveResult(story=story, diagnostics=regenerated, resolved=resolved, target=target)


def waive_diagnostic(diagnostics: list[Diagnostic], diag_id: str, note: str) -> Diagnostic:
    """Mark a finding as accepted-with-justification; it stops blocking the gate."""
    if not note or not note.strip():
        raise EmptyNote("a waiver requires a non-empty justification note")
    target = _find(diagnostics, diag_id)
    if target.state != DiagnosticState.OPEN:
        raise WrongState(f"diagnostic {diag_id} is {target.state.value}, not Open")
    target.state = DiagnosticState.WAIVED
    target.waive_note = note
    return target


def refresh_gate(story: UserStory, diagnostics: list[Diagnostic]) -> UserStory:
    """Move a story to Resolved once no diagnostic is left Open."""
    if story.status == StoryStatus.AMBIGUITIES_PENDING and not any(
        d.state == DiagnosticState.OPEN for d in diagnostics
    ):
        story.status = StoryStatus.RESOLVED
    return story


def _find(diagnostics: list[Diagnostic], diag_id: str) -> Diagnostic:
    for d in diagnostics:
        if d.id == diag_id:
            return d
    raise NotFound(f"no diagnostic with id {diag_id}")
