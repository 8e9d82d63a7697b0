from __future__ import annotations


class DatasetError(ValueError):
    """Input data cannot be used (missing file/column, broken join, no samples)."""


class ConfigError(ValueError):
    """Invalid run configuration or command-line usage."""


class PlayRejected(ValueError):
    """A single play fails validation; carries a short reason code."""

    def __init__(self, reason: str, message: str = "") -> None:
        super().__init__(message or reason)
        self.reason = reason


class TrackError(PlayRejected):
    """Ball-carrier sequence cannot be built for a play."""

    def __init__(self, message: str) -> None:
        super().__init__("carrier_missing", message)


class WindowValueError(ValueError):
    """Contact window with non-finite velocity landmarks."""


class UndefinedCorrelationError(ValueError):
    """Pearson correlation undefined (too few pairs or zero variance)."""


class InvariantViolation(RuntimeError):
    pass


class GenerationError(ValueError):
    """Synthetic play spec that does not realize its own planned windows."""


__all__ = [
    "DatasetError",
    "ConfigError",
    "PlayRejected",
    "TrackError",
    "WindowValueError",
    "UndefinedCorrelationError",
    "InvariantViolation",
    "GenerationError",
]
