"""Exception types shared across the toolkit.

Every error raised on user input derives from ToolkitError so callers can
distinguish validation failures (exit code 1 in the CLI) from genuine I/O
failures (exit code 2).
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all validation and usage errors raised by mcqgeval."""


class MalformedRecord(ToolkitError):
    """A line in an input file does not match the expected schema."""

    def __init__(self, path: str, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


class UnknownAnswerLetter(MalformedRecord):
    """Dataset record carries an answer letter outside A-D."""


class DuplicateExampleId(MalformedRecord):
    """Two dataset records share an example_id."""


class DuplicateQuestionId(MalformedRecord):
    """Two prediction records share a question_id."""


class DuplicateWord(MalformedRecord):
    """Two lexicon records define the same (lower-cased) word."""


class RowNotNormalized(ToolkitError):
    """An ensemble member row does not sum to 1 within tolerance."""

    def __init__(self, question_id: str, row_index: int, row_sum: float):
        self.question_id = question_id
        self.row_index = row_index
        self.row_sum = row_sum
        super().__init__(
            f"prediction {question_id!r} member row {row_index} sums to "
            f"{row_sum!r}, expected 1 within 1e-6"
        )


class LabelSpaceMismatch(ToolkitError):
    """Labels do not match the label space required for the operation."""


class EnsembleSizeMismatch(ToolkitError):
    """A record's member count disagrees with the file header's ensemble_size."""


class MissingPrediction(ToolkitError):
    """A required question_id has no prediction in the set."""

    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"no prediction for question_id {question_id!r}")


class NotParsed(ToolkitError):
    """Operation requires a successfully parsed generated output."""


class InvalidDistribution(ToolkitError):
    """A probability vector has entries outside [0, 1] or does not sum to 1."""


class EmptyQuestion(ToolkitError):
    """Question text is empty after trimming."""


class EmptyQuestionSet(ToolkitError):
    """An aggregate metric was asked for zero questions."""


class LengthMismatch(ToolkitError):
    """Paired sequences have different lengths."""


class MissingDifficultyLabels(ToolkitError):
    """Threshold tuning or baselines need difficulty labels on every example."""


class DomainError(ToolkitError):
    """A numeric argument is outside its mathematical domain."""


class PosteriorKindMismatch(ToolkitError):
    """Simulator operation received the wrong posterior kind."""


class WriteFailure(ToolkitError):
    """An output file could not be written."""
