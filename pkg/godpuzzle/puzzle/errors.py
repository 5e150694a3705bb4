"""Exceptions raised by the puzzle engine."""
from typing import Optional


class PuzzleError(Exception):
    """Base class for every engine error."""


class QuestionSyntaxError(PuzzleError, ValueError):
    """Malformed question text."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.text = text


class MissingCandidateError(PuzzleError):
    """A self-referential atom was evaluated without a candidate answer."""


class NatureViolationError(PuzzleError):
    """A god was asked something it cannot answer without violating its nature."""


class ImpossibleObservationError(PuzzleError):
    """An answer has zero probability under the current belief."""


class InvalidPriorError(PuzzleError, ValueError):
    """Weights are negative, incomplete or do not sum to one."""


class StrategyFormatError(PuzzleError, ValueError):
    """A strategy file could not be decoded."""


class StrategyValidationError(PuzzleError):
    """A strategy asks a question that is not askable where it is asked."""

    def __init__(self, report):
        super().__init__(report.message)
        self.report = report


class SearchResourceError(PuzzleError):
    """The search memo table outgrew its configured cap."""

    def __init__(self, message: str, explored_classes: int = 0,
                 memo_states: int = 0, depth: Optional[int] = None):
        super().__init__(message)
        self.explored_classes = explored_classes
        self.memo_states = memo_states
        self.depth = depth
