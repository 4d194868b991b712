"""Small text helpers shared by the detectors and the mapping rules."""
from __future__ import annotations

from .model import Token, TokenKind

# Articles/possessives skipped when matching multi-word phrases, so that
# a rule phrase "delete account" still matches "delete my account".
STOPWORDS = frozenset({"a", "an", "the", "my", "our", "your", "their", "his", "her", "its"})

_SUFFIXES = ("ings", "ing", "ies", "ied", "es", "ed", "s")


def stem(word: str) -> str:
    """Conservative suffix-stripping stem: delete/deletes/deleting agree.

    Not a linguistic stemmer; just enough to make hand-authored rule
    phrases insensitive to common inflections. Never shortens a word
    below three characters.
    """
    w = word.lower()
    for suffix in _SUFFIXES:
        if w.endswith(suffix):
            candidate = w[: -len(suffix)]
            if suffix in ("ies", "ied"):
                candidate += "y"
            if len(candidate) >= 3:
                w = candidate
                break
    if len(w) >= 5 and w.endswith("e"):
        w = w[:-1]
    return w


def word_tokens(tokens: list[Token]) -> list[Token]:
    return [t for t in tokens if t.kind == TokenKind.WORD]


def find_stemmed_phrase(
    tokens: list[Token], phrase_words: list[str], *, skip_stopwords: bool = True
) -> list[tuple[int, int]]:
    """Find every occurrence of a phrase in a token stream, by stem.

    Matching walks word tokens only; stopwords inside the stream may be
    skipped so possessives do not break multi-word phrases. Returns
    [start, end) character spans covering each match.
    """
    targets = [stem(w) for w in phrase_words]
    if not targets:
        return []
    words = word_tokens(tokens)
    spans: list[tuple[int, int]] = []
    i = 0
    while i < len(words):
        j = i
        matched: list[Token] = []
        for target in targets:
            # skip filler stopwords, but never one the phrase itself expects next
            while (
                j < len(words)
                and skip_stopwords
                and matched
                and words[j].text.lower() in STOPWORDS
                and stem(words[j].text) != target
            ):
                j += 1
            if j < len(words) and stem(words[j].text) == target:
                matched.append(words[j])
                j += 1
            else:
                matched = []
                break
        if matched:
            spans.append((matched[0].start, matched[-1].end))
            i = words.index(matched[-1]) + 1
        else:
            i += 1
    return spans
