"""Exception types shared across the package."""


class CatfishError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(CatfishError):
    """Malformed or invalid corpus file.

    Carries the 1-based line number when the failure is tied to a line.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(CatfishError):
    """A domain object violates one of its invariants."""


class ConfigError(CatfishError):
    """Invalid configuration or a missing required asset."""


class DataError(CatfishError):
    """Input is structurally valid but unusable for the requested operation."""


class DegenerateInputError(DataError):
    """A statistic is undefined on this input (for example zero variance)."""


class FingerprintMismatchError(CatfishError):
    """Model artifacts were fitted against different feature specs."""
