from typing import Optional


class DomainError(ValueError):
    """An argument lies outside the domain of the operation it was passed to."""


class MediumError(ValueError):
    """
    A piecewise-constant medium violates one of its construction rules. `index` is the 1-based number of the
    offending segment, when the error concerns a single segment.
    """

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        super().__init__(message)


class MediumParseError(MediumError):
    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message, index=row)


class FieldEvaluationError(ValueError):
    """A field returned a negative or non-finite density, or a color outside [0, 1]."""


class SceneError(ValueError):
    """Unknown scene name or unusable scene parameters."""
