import pytest

from gdprlens.model import StoryStatus
from gdprlens.pipeline import load_default_bundle
from gdprlens.stories import apply_parse, parse_story


@pytest.fixture(scope="session")
def bundle():
    return load_default_bundle()


def make_normalized(text: str, story_id: str = "s1"):
    """Parse a complete story and put it in the Normalized state."""
    result = parse_story(text, story_id=story_id)
    assert not result.missing, f"fixture story is incomplete: {result.missing}"
    story = result.story
    apply_parse(story, result)
    story.status = StoryStatus.NORMALIZED
    return story


def make_resolved(text: str, bundle, story_id: str = "s1"):
    """Parse, detect, and require the story to come out clean (Resolved)."""
    from gdprlens.ambiguity import detect

    story = make_normalized(text, story_id)
    diagnostics = detect(story, bundle.vague_terms, bundle.verbs)
    assert story.status == StoryStatus.RESOLVED, [
        (d.kind.value, d.matched_text) for d in diagnostics
    ]
    return story
