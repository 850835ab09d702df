"""Domain errors and warnings.

Every error carries a ``kind`` tag; the service maps kinds to HTTP status
codes and the CLI maps them to exit codes, so raising the right class here
is what makes those contracts hold.
"""

from __future__ import annotations


class QsparseError(Exception):
    """Base class for all domain errors."""

    kind = "internal"


class ParameterError(QsparseError):
    """Invalid argument values: bad ranges, dimension mismatches, bad config."""

    kind = "parameter"


class CircuitFormatError(ParameterError):
    """A circuit document failed to parse or validate."""

    kind = "format"


class CapacityError(QsparseError):
    """The requested dense representation exceeds the configured qubit cap."""

    kind = "capacity"


class StateError(QsparseError):
    """A state became degenerate: zero norm, empty projection, no support."""

    kind = "state"


class ResetDiscardWarning(UserWarning):
    """A reset projected away a non-negligible amount of probability mass."""
