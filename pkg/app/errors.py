"""Exception types raised by the IMAGINET toolkit.

Every error carries the process exit code the CLI reports for it:
0 success, 1 I/O, 2 config or input, 3 numerical, 4 gradient check failure,
5 artifact mismatch.
"""


class ImaginetError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class ConfigError(ImaginetError, ValueError):
    """Invalid run configuration or CLI arguments."""

    exit_code = 2


class ShapeError(ImaginetError, ValueError):
    """Operand shapes do not agree."""

    exit_code = 2

    def __init__(self, message: str, *shapes):
        if shapes:
            message = f"{message}: " + " vs ".join(str(s) for s in shapes)
        super().__init__(message)
        self.shapes = shapes


class InputError(ImaginetError, ValueError):
    """Malformed model input (empty sentence, mismatched trace)."""

    exit_code = 2


class VocabularyError(ImaginetError, ValueError):
    """Token index or word outside the vocabulary."""

    exit_code = 2


class DataError(ImaginetError, ValueError):
    """Dataset cannot be used (empty corpus, no complete groups)."""

    exit_code = 2


class ParseError(DataError):
    """A line of an input file could not be parsed."""

    def __init__(self, path, line_number: int, message: str):
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number


class FormatError(DataError):
    """A binary file does not follow its declared layout."""


class RankDeficiencyError(ImaginetError, ValueError):
    """Normal equations are singular."""

    exit_code = 2


class UndefinedSimilarityError(ImaginetError, ValueError):
    """Cosine similarity requested for a zero-norm vector."""

    exit_code = 2


class UndefinedCorrelationError(ImaginetError, ValueError):
    """Correlation requested for a constant series."""

    exit_code = 2


class InsufficientCoverageError(ImaginetError, ValueError):
    """Too few benchmark pairs are covered by the vocabulary."""

    exit_code = 2


class NumericalError(ImaginetError, ArithmeticError):
    """A loss or tensor became non-finite."""

    exit_code = 3


class OptimizationError(NumericalError):
    """A gradient handed to the optimizer is not finite."""


class GradCheckFailure(ImaginetError):
    """Analytic gradients disagree with finite differences."""

    exit_code = 4


class ArtifactMismatchError(ImaginetError):
    """A checkpoint does not fit the configuration or data it is used with."""

    exit_code = 5
