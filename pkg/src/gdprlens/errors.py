"""Exception types shared across the pipeline.

Every deliberate failure raised by this package derives from
:class:`GdprLensError`, so callers (CLI, HTTP layer) can map domain
errors to exit codes / status codes in one place.
"""


class GdprLensError(Exception):
    """Base class for all domain errors raised by this package."""


class WrongState(GdprLensError):
    """An operation was attempted on a story in the wrong lifecycle state."""

    def __init__(self, message: str, required: str | None = None):
        super().__init__(message)
        self.required = required


class StaleProposal(GdprLensError):
    """The story text changed after the correction proposal was made."""


class ServiceUnreachable(GdprLensError):
    """The external correction endpoint could not be used (non-fatal)."""


class LexiconEmpty(GdprLensError):
    """The spell lexicon has no entries; the rule engine cannot run."""


class EmptyNote(GdprLensError):
    """A waiver was attempted without a justification note."""


class MissingElements(GdprLensError):
    """Replacement story text does not parse into all three elements."""

    def __init__(self, missing: set[str]):
        super().__init__(f"story text is missing elements: {', '.join(sorted(missing))}")
        self.missing = set(missing)


class SchemaError(GdprLensError):
    """A knowledge-graph triple violates a predicate domain/range rule."""


class DanglingRef(GdprLensError):
    """A knowledge-graph file references an undeclared entity or article."""


class UnboundPattern(GdprLensError):
    """A triple query bound none of subject, predicate, object."""


class BadArticleId(GdprLensError):
    """An article id does not match the canonical Art.<n>(<p>)(<l>) grammar."""


class BadDate(GdprLensError):
    """An enforcement case carries a malformed date."""


class BadFine(GdprLensError):
    """An enforcement case carries a negative or non-integer fine."""


class DuplicateId(GdprLensError):
    """Two records in one dataset or batch share an id."""


class VersionMismatch(GdprLensError):
    """Two artifacts built against different data versions were combined."""


class IncompleteResponse(GdprLensError):
    """A survey response does not answer the questionnaire exactly once each."""


class OutOfRangeAnswer(GdprLensError):
    """A Likert answer falls outside 1..5."""


class EmptyBatch(GdprLensError):
    """A story import contained no stories."""


class MalformedFile(GdprLensError):
    """An input data file could not be parsed."""


class MissingDataFile(GdprLensError):
    """A configured data file does not exist."""


class NotFound(GdprLensError):
    """A referenced project, story, or diagnostic does not exist."""


class Conflict(GdprLensError):
    """Optimistic-concurrency check failed: the revision is stale."""

    def __init__(self, message: str, expected: int | None = None, actual: int | None = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class GateViolation(GdprLensError):
    """Description generation was attempted with open diagnostics."""
