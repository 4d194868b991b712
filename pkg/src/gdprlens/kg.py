"""GDPR knowledge graph: triples, pattern queries, story-to-article mapping.

The graph is loaded once from a JSON file with three sections
(`entities`, `triples`, `rules`) plus a `kg_version` string that is
echoed into every downstream output for provenance. After loading it is
immutable; updates happen by loading a new file version and swapping.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import BadArticleId, DanglingRef, MalformedFile, SchemaError, UnboundPattern, WrongState
from .model import StoryStatus, UserStory
from .stories import tokenize
from .text import find_stemmed_phrase

ARTICLE_ID_RE = re.compile(r"^Art\.[1-9][0-9]*(\([1-9][0-9]*\)(\([a-z]\))?)?$")
SNAKE_ID_RE = re.compile(r"^[a-z][a-z0-9_]*$")


class EntityKind(str, Enum):
    ACTION = "Action"
    DATA_ENTITY = "DataEntity"
    CONCEPT = "Concept"
    ARTICLE = "Article"


class Predicate(str, Enum):
    PERFORMS = "performs"
    REQUIRES_COMPLIANCE = "requires_compliance"
    IS_ABOUT = "is_about"
    IS = "is"
    DEFINED_IN = "defined_in"
    DESCRIBED_IN = "described_in"


# Predicates whose object must be an article; is_about constrains the subject.
_ARTICLE_OBJECT = {Predicate.REQUIRES_COMPLIANCE, Predicate.DEFINED_IN, Predicate.DESCRIBED_IN}


def is_article_id(entity_id: str) -> bool:
    return bool(ARTICLE_ID_RE.match(entity_id))


@dataclass(frozen=True)
class EntityRef:
    kind: EntityKind
    id: str

    def __post_init__(self):
        if self.kind == EntityKind.ARTICLE:
            if not is_article_id(self.id):
                raise BadArticleId(f"{self.id!r} does not match Art.<n>, Art.<n>(<p>) or Art.<n>(<p>)(<l>)")
        elif not SNAKE_ID_RE.match(self.id):
            raise ValueError(f"entity id {self.id!r} must be lowercase snake-case")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "id": self.id}


@dataclass(frozen=True)
class Triple:
    subject: EntityRef
    predicate: Predicate
    object: EntityRef

    def __post_init__(self):
        if self.predicate in _ARTICLE_OBJECT and self.object.kind != EntityKind.ARTICLE:
            raise SchemaError(f"{self.predicate.value} requires an Article object, got {self.object.id!r}")
        if self.predicate == Predicate.IS_ABOUT and self.subject.kind != EntityKind.ARTICLE:
            raise SchemaError(f"is_about requires an Article subject, got {self.subject.id!r}")

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject.id, self.predicate.value, self.object.id)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject.to_dict(),
            "predicate": self.predicate.value,
            "object": self.object.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Triple":
        return cls(
            subject=EntityRef(kind=EntityKind(d["subject"]["kind"]), id=d["subject"]["id"]),
            predicate=Predicate(d["predicate"]),
            object=EntityRef(kind=EntityKind(d["object"]["kind"]), id=d["object"]["id"]),
        )


@dataclass(frozen=True)
class ArticleInfo:
    id: str
    title: str
    summary: str
    obligations: tuple[str, ...]
    rationale: str

    def __post_init__(self):
        if not self.title or not self.summary:
            raise ValueError(f"article {self.id} needs a non-empty title and summary")
        if not self.obligations:
            raise ValueError(f"article {self.id} needs at least one obligation")


@dataclass(frozen=True)
class MappingRule:
    """Hand-authored trigger: phrases/lemmas in a story element imply articles."""

    element: str  # "what" or "who"
    phrases: tuple[str, ...]
    lemmas: tuple[str, ...]
    articles: tuple[str, ...]
    note: str = ""

    def __post_init__(self):
        if self.element not in ("what", "who"):
            raise ValueError(f"rule element must be 'what' or 'who', got {self.element!r}")
        if not self.articles:
            raise ValueError("a mapping rule must name at least one article")
        if not self.phrases and not self.lemmas:
            raise ValueError("a mapping rule needs phrases or lemmas to trigger on")


class KnowledgeGraph:
    """Immutable triple store with subject/predicate/object indexes."""

    def __init__(self, version: str, entities: list[EntityRef], articles: list[ArticleInfo],
                 triples: list[Triple], rules: list[MappingRule]):
        self.version = version
        self.entities: dict[str, EntityRef] = {e.id: e for e in entities}
        self.articles: dict[str, ArticleInfo] = {a.id: a for a in articles}
        self.triples: tuple[Triple, ...] = tuple(sorted(triples, key=Triple.sort_key))
        self.rules: tuple[MappingRule, ...] = tuple(rules)
        self._by_subject: dict[str, tuple[int, ...]] = {}
        self._by_predicate: dict[str, tuple[int, ...]] = {}
        self._by_object: dict[str, tuple[int, ...]] = {}
        by_s: dict[str, list[int]] = {}
        by_p: dict[str, list[int]] = {}
        by_o: dict[str, list[int]] = {}
        for i, t in enumerate(self.triples):
            by_s.setdefault(t.subject.id, []).append(i)
            by_p.setdefault(t.predicate.value, []).append(i)
            by_o.setdefault(t.object.id, []).append(i)
        self._by_subject = {k: tuple(v) for k, v in by_s.items()}
        self._by_predicate = {k: tuple(v) for k, v in by_p.items()}
        self._by_object = {k: tuple(v) for k, v in by_o.items()}

    def entity(self, entity_id: str) -> EntityRef:
        if entity_id not in self.entities:
            raise DanglingRef(f"entity {entity_id!r} is not declared in the knowledge graph")
        return self.entities[entity_id]

    def query(
        self,
        subject: str | EntityRef | None = None,
        predicate: str | Predicate | None = None,
        object: str | EntityRef | None = None,
    ) -> list[Triple]:
        """All triples matching every bound slot, in (subject, predicate, object) order.

        At least one slot must be bound; an unbound-all scan is a
        precondition violation, not a supported query.
        """
        s_id = subject.id if isinstance(subject, EntityRef) else subject
        o_id = object.id if isinstance(object, EntityRef) else object
        p_val = predicate.value if isinstance(predicate, Predicate) else predicate
        if s_id is None and p_val is None and o_id is None:
            raise UnboundPattern("query pattern must bind at least one of subject, predicate, object")
        if p_val is not None:
            Predicate(p_val)  # reject unknown predicate names early

        # Filter from the most selective bound index; triples are stored
        # sorted, so index order is already output order.
        if s_id is not None:
            candidates = self._by_subject.get(s_id, ())
        elif o_id is not None:
            candidates = self._by_object.get(o_id, ())
        else:
            candidates = self._by_predicate.get(p_val, ())
        out = []
        for i in candidates:
            t = self.triples[i]
            if p_val is not None and t.predicate.value != p_val:
                continue
            if o_id is not None and t.object.id != o_id:
                continue
            if s_id is not None and t.subject.id != s_id:
                continue
            out.append(t)
        return out

    def neighborhood(self, entity_id: str, hops: int = 2) -> list[Triple]:
        """Every edge reachable within `hops` of an entity (undirected)."""
        frontier = {entity_id}
        seen_edges: set[Triple] = set()
        for _ in range(hops):
            next_frontier: set[str] = set()
            for node in frontier:
                for t in self.query(subject=node) + self.query(object=node):
                    if t not in seen_edges:
                        seen_edges.add(t)
                    next_frontier.add(t.subject.id)
                    next_frontier.add(t.object.id)
            frontier = next_frontier
        return sorted(seen_edges, key=Triple.sort_key)


def load_kg(path: str | Path) -> KnowledgeGraph:
    """Parse and validate a knowledge-graph file.

    Raises SchemaError for predicate domain/range violations and
    DanglingRef when triples or rules mention undeclared entities.
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedFile(f"cannot read knowledge graph file {path}: {exc}") from exc

    version = payload.get("kg_version", "unversioned")
    entities: list[EntityRef] = []
    articles: list[ArticleInfo] = []
    for record in payload.get("entities", []):
        kind = EntityKind(record["kind"])
        ref = EntityRef(kind=kind, id=record["id"])
        entities.append(ref)
        if kind == EntityKind.ARTICLE:
            articles.append(
                ArticleInfo(
                    id=record["id"],
                    title=record["title"],
                    summary=record["summary"],
                    obligations=tuple(record["obligations"]),
                    rationale=record["rationale"],
                )
            )
    declared = {e.id for e in entities}

    by_id = {e.id: e for e in entities}
    triples: list[Triple] = []
    for record in payload.get("triples", []):
        for key in ("subject", "object"):
            if record[key] not in declared:
                raise DanglingRef(f"triple references undeclared entity {record[key]!r}")
        triples.append(
            Triple(
                subject=by_id[record["subject"]],
                predicate=Predicate(record["predicate"]),
                object=by_id[record["object"]],
            )
        )

    rules: list[MappingRule] = []
    for record in payload.get("rules", []):
        rule = MappingRule(
            element=record.get("element", "what"),
            phrases=tuple(record.get("phrases", [])),
            lemmas=tuple(record.get("lemmas", [])),
            articles=tuple(record["articles"]),
            note=record.get("note", ""),
        )
        for article_id in rule.articles:
            if article_id not in {a.id for a in articles}:
                raise DanglingRef(f"rule references article {article_id!r} with no ArticleInfo in the file")
        rules.append(rule)

    return KnowledgeGraph(version=version, entities=entities, articles=articles, triples=triples, rules=rules)


@dataclass(frozen=True)
class MatchEvidence:
    rule_note: str
    articles: tuple[str, ...]
    span: tuple[int, int]
    matched_text: str

    def to_dict(self) -> dict:
        return {
            "rule_note": self.rule_note,
            "articles": list(self.articles),
            "span": list(self.span),
            "matched_text": self.matched_text,
        }


@dataclass(frozen=True)
class EntityMatch:
    entity: EntityRef
    span: tuple[int, int]
    matched_text: str

    def to_dict(self) -> dict:
        return {"entity": self.entity.to_dict(), "span": list(self.span), "matched_text": self.matched_text}


@dataclass
class StoryMapping:
    """Articles relevant to one story, with the evidence that triggered them."""

    story_id: str
    kg_version: str
    articles: list[str] = field(default_factory=list)
    evidence: list[MatchEvidence] = field(default_factory=list)
    entities: list[EntityMatch] = field(default_factory=list)
    triples: list[Triple] = field(default_factory=list)
    actor: str | None = None

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "kg_version": self.kg_version,
            "articles": list(self.articles),
            "evidence": [e.to_dict() for e in self.evidence],
            "entities": [e.to_dict() for e in self.entities],
            "triples": [t.to_dict() for t in self.triples],
            "actor": self.actor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StoryMapping":
        entities = []
        for e in d.get("entities", []):
            entities.append(
                EntityMatch(
                    entity=EntityRef(kind=EntityKind(e["entity"]["kind"]), id=e["entity"]["id"]),
                    span=(e["span"][0], e["span"][1]),
                    matched_text=e["matched_text"],
                )
            )
        return cls(
            story_id=d["story_id"],
            kg_version=d["kg_version"],
            articles=list(d.get("articles", [])),
            evidence=[
                MatchEvidence(
                    rule_note=e["rule_note"],
                    articles=tuple(e["articles"]),
                    span=(e["span"][0], e["span"][1]),
                    matched_text=e["matched_text"],
                )
                for e in d.get("evidence", [])
            ],
            entities=entities,
            triples=[Triple.from_dict(t) for t in d.get("triples", [])],
            actor=d.get("actor"),
        )


def map_story(story: UserStory, rules: list[MappingRule], kg: KnowledgeGraph) -> StoryMapping:
    """Map a Resolved story's elements to GDPR articles.

    Rule triggers match phrases/lemmas stem-insensitively against the
    story's `what` (or `who`); matched articles are de-duplicated and
    ordered by the offset of their first evidence. KG entities whose
    snake-case ids appear in the `what` contribute their 2-hop triple
    neighborhood as description context. An empty article set is a valid
    outcome: the story simply has no GDPR-relevant processing.
    """
    if story.status != StoryStatus.RESOLVED:
        raise WrongState(
            f"mapping requires a Resolved story, story is {story.status.value}",
            required=StoryStatus.RESOLVED.value,
        )
    mapping = StoryMapping(story_id=story.id, kg_version=kg.version, actor=story.who.text if story.who else None)
    raw = story.raw_text
    tokens = tokenize(raw)
    element_tokens = {
        "what": [t for t in tokens if story.what and story.what.start <= t.start and t.end <= story.what.end],
        "who": [t for t in tokens if story.who and story.who.start <= t.start and t.end <= story.who.end],
    }

    hits: list[tuple[int, MatchEvidence]] = []
    for rule in rules:
        toks = element_tokens[rule.element]
        spans: list[tuple[int, int]] = []
        for phrase in rule.phrases:
            spans.extend(find_stemmed_phrase(toks, phrase.split()))
        for lemma in rule.lemmas:
            spans.extend(find_stemmed_phrase(toks, [lemma]))
        for span in sorted(set(spans)):
            hits.append(
                (
                    span[0],
                    MatchEvidence(
                        rule_note=rule.note,
                        articles=rule.articles,
                        span=span,
                        matched_text=raw[span[0] : span[1]],
                    ),
                )
            )
    hits.sort(key=lambda pair: (pair[0], pair[1].span[1]))
    seen = set()
    for _, evidence in hits:
        mapping.evidence.append(evidence)
        for article_id in evidence.articles:
            if article_id not in seen:
                seen.add(article_id)
                mapping.articles.append(article_id)

    matched_entities: list[EntityMatch] = []
    for entity in kg.entities.values():
        if entity.kind not in (EntityKind.ACTION, EntityKind.DATA_ENTITY):
            continue
        spans = find_stemmed_phrase(element_tokens["what"], entity.id.split("_"))
        for span in spans:
            matched_entities.append(EntityMatch(entity=entity, span=span, matched_text=raw[span[0] : span[1]]))
    matched_entities.sort(key=lambda m: (m.span[0], m.entity.id))
    mapping.entities = matched_entities

    edge_set: set[Triple] = set()
    for match in matched_entities:
        edge_set.update(kg.neighborhood(match.entity.id, hops=2))
    mapping.triples = sorted(edge_set, key=Triple.sort_key)
    return mapping
