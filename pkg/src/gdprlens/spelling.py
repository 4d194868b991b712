"""Dictionary spell checking with a conservative edit-distance-1 cap."""
from __future__ import annotations

from pathlib import Path

from .errors import LexiconEmpty

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


class SpellLexicon:
    """A set of known lowercase words loaded from a plain text file."""

    def __init__(self, words):
        self.words = frozenset(w.strip().lower() for w in words if w.strip())

    @classmethod
    def from_file(cls, path: str | Path) -> "SpellLexicon":
        text = Path(path).read_text(encoding="utf-8")
        return cls(line for line in text.splitlines() if not line.startswith("#"))

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    def suggest(self, word: str) -> str | None:
        """Closest lexicon entry within Levenshtein distance 1, or None.

        Ties are broken lexicographically so corrections are stable.
        Raises LexiconEmpty when there is nothing to match against.
        """
        if not self.words:
            raise LexiconEmpty("spell lexicon has no entries")
        w = word.lower()
        if w in self.words:
            return w
        candidates = edits1(w) & self.words
        if not candidates:
            return None
        return min(candidates)


def edits1(word: str) -> set[str]:
    """All strings at Levenshtein distance exactly 1 from `word`.

    Insertions, deletions, and substitutions over a-z; transpositions
    are distance 2 here on purpose (plain Levenshtein, matching the
    reference oracle used in the tests).
    """
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = {left + right[1:] for left, right in splits if right}
    replaces = {left + c + right[1:] for left, right in splits if right for c in _ALPHABET}
    inserts = {left + c + right for left, right in splits for c in _ALPHABET}
    return (deletes | replaces | inserts) - {word}
