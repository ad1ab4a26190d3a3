"""Domain errors. Every error carries a stable machine-readable code."""

from __future__ import annotations


class SuifError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "ERROR"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


# semantic model
class InvalidPath(SuifError):
    code = "INVALID_PATH"


class EmptyText(SuifError):
    code = "EMPTY_TEXT"


class DuplicateName(SuifError):
    code = "DUPLICATE_NAME"


class EmptyName(SuifError):
    code = "EMPTY_NAME"


class MalformedDocument(SuifError):
    code = "MALFORMED_DOCUMENT"


# provider gateway
class ProviderUnavailable(SuifError):
    code = "PROVIDER_UNAVAILABLE"


class FixtureMissing(SuifError):
    code = "FIXTURE_MISSING"


class SchemaViolation(SuifError):
    code = "SCHEMA_VIOLATION"

    def __init__(self, message: str, violations: list[str] | None = None, **details):
        super().__init__(message, **details)
        self.violations = violations or []


class EmptyGeneration(SuifError):
    code = "EMPTY_GENERATION"


class IoFailure(SuifError):
    code = "IO_FAILURE"


# parsing / generation / analysis
class EmptyPrompt(SuifError):
    code = "EMPTY_PROMPT"


class EmptyState(SuifError):
    code = "EMPTY_STATE"


class EmptyDiff(SuifError):
    code = "EMPTY_DIFF"


class EmptyArtifact(SuifError):
    code = "EMPTY_ARTIFACT"


# relations
class NothingToAnalyze(SuifError):
    code = "NOTHING_TO_ANALYZE"


class SuggestionMissing(SuifError):
    code = "SUGGESTION_MISSING"


class SlotOccupied(SuifError):
    code = "SLOT_OCCUPIED"


# diff engine
class DiffConflict(SuifError):
    code = "DIFF_CONFLICT"


# session store
class NoChange(SuifError):
    code = "NO_CHANGE"


class UnknownVersion(SuifError):
    code = "UNKNOWN_VERSION"


class UnknownSession(SuifError):
    code = "UNKNOWN_SESSION"


# service
class ConfigInvalid(SuifError):
    code = "CONFIG_INVALID"


class BindFailure(SuifError):
    code = "BIND_FAILURE"
