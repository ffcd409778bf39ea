"""
Exception hierarchy shared by every pipeline stage.
"""

from typing import Optional


class LiteNgramError(Exception):
    """Base class for all errors raised by lite_ngram."""


class PreprocessingError(LiteNgramError):
    """Raised when corpus text cannot be turned into sentences."""


class ArpaParseError(LiteNgramError):
    """Raised when an ARPA file is malformed."""

    def __init__(self, message: str, line_no: Optional[int] = None,
                 section: Optional[str] = None):
        self.line_no = line_no
        self.section = section
        location = []
        if section:
            location.append(f"section {section}")
        if line_no is not None:
            location.append(f"line {line_no}")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class SerializationError(LiteNgramError):
    """Raised when a model does not fit the binary field widths."""

    def __init__(self, message: str, context: Optional[str] = None):
        self.context = context
        super().__init__(f"{message} (context: {context})" if context else message)


class ModelFormatError(LiteNgramError):
    """Raised when a model file is corrupted, truncated or inconsistent."""

    def __init__(self, file_kind: str, section: str, message: str):
        self.file_kind = file_kind
        self.section = section
        super().__init__(f"{file_kind} file, section '{section}': {message}")


class QuantizationError(LiteNgramError, ValueError):
    """Raised when a value lies outside the quantiser domain."""


class EvaluationError(LiteNgramError):
    """Raised when an evaluation cannot be computed."""


class BuildError(LiteNgramError):
    """Raised when a model build stage fails."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"Build stage '{stage}' failed: {message}")


class ManifestError(LiteNgramError):
    """Raised for invalid build manifests."""
