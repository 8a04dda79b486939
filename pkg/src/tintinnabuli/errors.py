"""Exception hierarchy shared by the whole package."""

from __future__ import annotations


class TintinnabuliError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TintinnabuliError, ValueError):
    """Malformed input: bad scale, bad pitch string, bad pattern, ..."""


class MembershipError(TintinnabuliError, ValueError):
    """A pitch was expected to belong to a pitch space but does not."""


class PitchRangeError(TintinnabuliError, ValueError):
    """An operation would leave the gamut."""


class ConfigurationError(TintinnabuliError, ValueError):
    """A process or config is missing something it needs (e.g. a seed)."""


class AssemblyError(TintinnabuliError):
    """The score pipeline failed; ``stage`` names the failing step."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class ScoreImportError(TintinnabuliError):
    """A score document could not be read into the score model."""


class AlignmentError(TintinnabuliError):
    """Two scores do not share a compatible bar structure."""
