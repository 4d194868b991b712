"""gdprlens: user-story linting and GDPR compliance guidance.

Parses "As a ..., I want to ... so that ..." stories, repairs format and
spelling, flags privacy-relevant ambiguities, maps resolved stories to
GDPR articles through a knowledge graph, composes three-part compliance
descriptions, surfaces matching real-world enforcement cases, and
scores developer privacy attitudes with a TPB questionnaire.
"""

__version__ = "0.1.0"

from .ambiguity import VagueTermLexicon, VerbLexicon, detect, resolve_diagnostic, waive_diagnostic
from .cases import CaseRegistry, EnforcementCase, ingest
from .cases import match as match_cases
from .describe import ComplianceDescription, RenderFormat, generate, render
from .kg import KnowledgeGraph, MappingRule, StoryMapping, load_kg, map_story
from .model import (
    Diagnostic,
    DiagnosticKind,
    DiagnosticState,
    ElementSpan,
    ParseResult,
    StoryStatus,
    Token,
    TokenKind,
    UserStory,
)
from .normalize import CorrectionProposal, CorrectionServiceConfig, accept_correction, propose_corrections
from .spelling import SpellLexicon
from .stories import parse_story, tokenize, validate_format
from .survey import Phase, Question, Questionnaire, SurveyResponse, compare, load_questionnaire, score

__all__ = [
    "CaseRegistry",
    "ComplianceDescription",
    "CorrectionProposal",
    "CorrectionServiceConfig",
    "Diagnostic",
    "DiagnosticKind",
    "DiagnosticState",
    "ElementSpan",
    "EnforcementCase",
    "KnowledgeGraph",
    "MappingRule",
    "ParseResult",
    "Phase",
    "Question",
    "Questionnaire",
    "RenderFormat",
    "SpellLexicon",
    "StoryMapping",
    "StoryStatus",
    "SurveyResponse",
    "Token",
    "TokenKind",
    "UserStory",
    "VagueTermLexicon",
    "VerbLexicon",
    "accept_correction",
    "compare",
    "detect",
    "generate",
    "ingest",
    "load_kg",
    "load_questionnaire",
    "map_story",
    "match_cases",
    "parse_story",
    "propose_corrections",
    "render",
    "resolve_diagnostic",
    "score",
    "tokenize",
    "validate_format",
    "waive_diagnostic",
]
