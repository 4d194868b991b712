"""Locations of the data files shipped with the package."""
from importlib import resources
from pathlib import Path


def default_path(name: str) -> Path:
    """Filesystem path of a shipped data file (the package is not zipped)."""
    return Path(str(resources.files("gdprlens").joinpath("data", name)))


DEFAULT_KG = "gdpr_kg.json"
DEFAULT_CASES = "enforcement_cases.json"
DEFAULT_VAGUE_TERMS = "vague_terms.json"
DEFAULT_VERBS = "verbs.json"
DEFAULT_SPELL_LEXICON = "spell_lexicon.txt"
DEFAULT_QUESTIONNAIRE = "questionnaire.json"
