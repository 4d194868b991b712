"""Registry of real-world GDPR enforcement cases, matched by article.

Cases are ingested from a curated JSON export (the repository ships a
starter dataset teams extend). Matching is purely article-id based: a
story article matches a case that cites the same article or any parent
of it, so a story mapped to Art.5(1)(c) surfaces fines issued under
Art.5, but a story mapped to Art.5 does not inherit sub-part-specific
fines.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .errors import BadArticleId, BadDate, BadFine, DuplicateId, MalformedFile
from .kg import ARTICLE_ID_RE

_ARTICLE_PARTS_RE = re.compile(r"^Art\.([1-9][0-9]*)(?:\(([1-9][0-9]*)\))?(?:\(([a-z])\))?$")


@lru_cache(maxsize=4096)
def article_parts(article_id: str) -> tuple[int, int | None, str | None]:
    m = _ARTICLE_PARTS_RE.match(article_id)
    if not m:
        raise BadArticleId(f"{article_id!r} does not match the canonical article grammar")
    n, p, letter = m.groups()
    return int(n), int(p) if p else None, letter


def subsumes(case_article: str, story_article: str) -> bool:
    """True when the case citation covers the story article.

    Art.5 covers Art.5(1)(c); Art.5(1) covers Art.5(1)(c); the reverse
    never holds (a sub-part citation does not cover the whole article).
    """
    cn, cp, cl = article_parts(case_article)
    sn, sp, sl = article_parts(story_article)
    if cn != sn:
        return False
    if cp is None:
        return True
    if cp != sp:
        return False
    if cl is None:
        return True
    return cl == sl


@dataclass(frozen=True)
class EnforcementCase:
    id: str
    controller: str
    authority: str
    country: str
    date: date
    fine_eur: int
    violated_articles: tuple[str, ...]
    summary: str
    source_url: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "controller": self.controller,
            "authority": self.authority,
            "country": self.country,
            "date": self.date.isoformat(),
            "fine_eur": self.fine_eur,
            "violated_articles": list(self.violated_articles),
            "summary": self.summary,
            "source_url": self.source_url,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnforcementCase":
        return make_case(d)


@dataclass(frozen=True)
class CaseMatch:
    case: EnforcementCase
    overlap: tuple[str, ...]
    score: Fraction

    def to_dict(self) -> dict:
        return {"case": self.case.to_dict(), "overlap": list(self.overlap), "score": str(self.score)}

    @classmethod
    def from_dict(cls, d: dict) -> "CaseMatch":
        return cls(
            case=EnforcementCase.from_dict(d["case"]),
            overlap=tuple(d["overlap"]),
            score=Fraction(d["score"]),
        )


class CaseRegistry:
    """Immutable set of cases with an index from cited article ids."""

    def __init__(self, cases: list[EnforcementCase], version: str = "unversioned"):
        self.version = version
        self.cases: tuple[EnforcementCase, ...] = tuple(cases)
        self.by_id: dict[str, EnforcementCase] = {}
        self._by_article: dict[str, list[str]] = {}
        for case in self.cases:
            if case.id in self.by_id:
                raise DuplicateId(f"duplicate case id {case.id!r}")
            self.by_id[case.id] = case
            for article_id in case.violated_articles:
                self._by_article.setdefault(article_id, []).append(case.id)

    def __len__(self) -> int:
        return len(self.cases)

    def candidates_for(self, story_article: str) -> set[str]:
        """Case ids citing the article or any parent of it."""
        n, p, letter = article_parts(story_article)
        lookups = [f"Art.{n}"]
        if p is not None:
            lookups.append(f"Art.{n}({p})")
            if letter is not None:
                lookups.append(f"Art.{n}({p})({letter})")
        ids: set[str] = set()
        for key in lookups:
            ids.update(self._by_article.get(key, ()))
        return ids


def make_case(record: dict) -> EnforcementCase:
    """Validate one raw record into an EnforcementCase."""
    fine = record.get("fine_eur")
    if not isinstance(fine, int) or isinstance(fine, bool) or fine < 0:
        raise BadFine(f"case {record.get('id')!r}: fine_eur must be a non-negative integer, got {fine!r}")
    try:
        parsed_date = date.fromisoformat(record["date"])
    except (KeyError, ValueError) as exc:
        raise BadDate(f"case {record.get('id')!r}: bad date {record.get('date')!r}") from exc
    articles = tuple(record.get("violated_articles", ()))
    if not articles:
        raise BadArticleId(f"case {record.get('id')!r}: violated_articles must be non-empty")
    for article_id in articles:
        if not ARTICLE_ID_RE.match(article_id):
            raise BadArticleId(f"case {record.get('id')!r}: {article_id!r} is not a canonical article id")
    return EnforcementCase(
        id=record["id"],
        controller=record["controller"],
        authority=record["authority"],
        country=record["country"],
        date=parsed_date,
        fine_eur=fine,
        violated_articles=articles,
        summary=record.get("summary", ""),
        source_url=record.get("source_url", ""),
    )


def ingest(path: str | Path) -> CaseRegistry:
    raw = Path(path).read_bytes()
    try:
        records = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedFile(f"cannot parse case file {path}: {exc}") from exc
    if not isinstance(records, list):
        raise MalformedFile(f"case file {path} must be a JSON array of case objects")
    version = hashlib.sha256(raw).hexdigest()[:12]
    return CaseRegistry([make_case(r) for r in records], version=version)


def rank_key(match: CaseMatch) -> tuple:
    """Total order: larger overlap, then larger fine, then newer, then id."""
    case = match.case
    return (-len(match.overlap), -case.fine_eur, -case.date.toordinal(), case.id)


def match(articles: list[str], registry: CaseRegistry, limit: int = 5) -> list[CaseMatch]:
    """Cases overlapping the story's articles, best matches first.

    `overlap` lists the story articles covered by the case (subsumption
    included), preserving the story mapping's order. An empty result is
    a valid outcome.
    """
    if not articles:
        raise ValueError("match requires a non-empty article list")
    if limit < 1:
        raise ValueError("limit must be positive")
    candidate_ids: set[str] = set()
    for article_id in articles:
        candidate_ids.update(registry.candidates_for(article_id))
    matches: list[CaseMatch] = []
    for case_id in candidate_ids:
        case = registry.by_id[case_id]
        overlap = tuple(
            story_article
            for story_article in articles
            if any(subsumes(cited, story_article) for cited in case.violated_articles)
        )
        if overlap:
            matches.append(CaseMatch(case=case, overlap=overlap, score=Fraction(len(overlap))))
    matches.sort(key=rank_key)
    return matches[:limit]
