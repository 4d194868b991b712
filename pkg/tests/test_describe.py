"""Description composition and rendering contracts."""
import json

import pytest

from gdprlens.describe import (
    NONE_REQUIRED_TEXT,
    OPENING_TEXT,
    ComplianceDescription,
    RenderFormat,
    SegmentTag,
    generate,
    parse_annotated,
    render,
)
from gdprlens.errors import VersionMismatch
from gdprlens.kg import map_story
from tests.conftest import make_resolved

PASSPORT = "As a user, I want to upload my passport for identity verification so that I can prove my identity."
DELETE = "As a user, I want to delete my account so that my data is removed."
THEME = "As a user, I want to change my UI theme so that the app looks better."


@pytest.fixture()
def passport_description(bundle):
    story = make_resolved(PASSPORT, bundle)
    mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
    return generate(mapping, bundle.graph)


class TestGenerate:
    def test_passport_sections(self, bundle, passport_description):
        desc = passport_description
        assert [s.article for s in desc.sections] == ["Art.4(1)", "Art.5(1)(b)"]
        first = desc.sections[0]
        assert first.segments[0].text == OPENING_TEXT
        source_segments = [s for s in first.segments if s.tag == SegmentTag.SOURCE]
        assert len(source_segments) == 1
        assert "Art.4(1)" in source_segments[0].text
        assert "definition of personal data" in source_segments[0].text.lower()
        assert any("passport" in s.text for s in first.segments if s.tag == SegmentTag.HOW)

    def test_all_three_tags_present_per_section(self, bundle, passport_description):
        for section in passport_description.sections:
            tags = {s.tag for s in section.segments}
            assert {SegmentTag.HOW, SegmentTag.WHY, SegmentTag.SOURCE} <= tags

    def test_delete_account_section(self, bundle):
        story = make_resolved(DELETE, bundle)
        mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
        desc = generate(mapping, bundle.graph)
        assert len(desc.sections) == 1
        assert desc.sections[0].article == "Art.17"
        source = next(s for s in desc.sections[0].segments if s.tag == SegmentTag.SOURCE)
        assert "right to erasure" in source.text.lower()

    def test_empty_mapping_is_none_required(self, bundle):
        story = make_resolved(THEME, bundle)
        mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
        desc = generate(mapping, bundle.graph)
        assert desc.none_required
        assert desc.sections == []

    def test_unmatched_placeholder_uses_generic(self, bundle):
        story = make_resolved(DELETE, bundle)
        mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
        desc = generate(mapping, bundle.graph)
        how_text = " ".join(desc.sections[0].how)
        assert "the personal data" in how_text
        assert any("generic wording" in n for n in desc.notices)
        assert "{data_entity}" not in how_text

    def test_version_mismatch(self, bundle):
        story = make_resolved(PASSPORT, bundle)
        mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
        mapping.kg_version = "stale-0.0"
        with pytest.raises(VersionMismatch):
            generate(mapping, bundle.graph)

    def test_deterministic(self, bundle):
        story = make_resolved(PASSPORT, bundle)
        mapping = map_story(story, list(bundle.graph.rules), bundle.graph)
        first = render(generate(mapping, bundle.graph), RenderFormat.ANNOTATED_JSON)
        second = render(generate(mapping, bundle.graph), RenderFormat.ANNOTATED_JSON)
        assert first == second

    def test_how_clauses_traceable_to_kg(self, bundle, passport_description):
        # every how clause must be one of the article's obligations modulo
        # placeholder substitution
        for section in passport_description.sections:
            info = bundle.graph.articles[section.article]
            assert len(section.how) == len(info.obligations)


class TestRender:
    def test_none_required_plain_text(self, bundle):
        desc = ComplianceDescription(story_id="s", kg_version=bundle.graph.version, none_required=True)
        assert render(desc, RenderFormat.PLAIN_TEXT).strip() == NONE_REQUIRED_TEXT

    def test_markdown_bold_runs_match_how_count(self, bundle, passport_description):
        markdown = render(passport_description, RenderFormat.MARKDOWN)
        annotated = json.loads(render(passport_description, RenderFormat.ANNOTATED_JSON))
        how_count = sum(
            1 for section in annotated["sections"] for seg in section["segments"] if seg["tag"] == "How"
        )
        assert markdown.count("**") == 2 * how_count

    def test_markdown_styles_all_three_tags(self, bundle, passport_description):
        markdown = render(passport_description, RenderFormat.MARKDOWN)
        assert "**" in markdown and "*" in markdown and "<u>" in markdown

    def test_annotated_json_round_trip(self, bundle, passport_description):
        payload = render(passport_description, RenderFormat.ANNOTATED_JSON)
        again = parse_annotated(payload)
        assert [s.to_dict() for s in again.sections] == [s.to_dict() for s in passport_description.sections]
        assert again.none_required == passport_description.none_required
        assert again.story_id == passport_description.story_id

    def test_annotated_schema_fields(self, bundle, passport_description):
        payload = json.loads(render(passport_description, RenderFormat.ANNOTATED_JSON))
        assert set(payload) >= {"story_id", "kg_version", "none_required", "sections"}
        for section in payload["sections"]:
            assert set(section) >= {"article", "segments"}
            for seg in section["segments"]:
                assert set(seg) == {"text", "tag"}

    def test_plain_text_flattens_segments(self, bundle, passport_description):
        plain = render(passport_description, RenderFormat.PLAIN_TEXT)
        for section in passport_description.sections:
            for seg in section.segments:
                assert seg.text in plain

    def test_invariant_none_required_iff_empty(self):
        with pytest.raises(ValueError):
            ComplianceDescription(story_id="s", kg_version="v", sections=[], none_required=False)
