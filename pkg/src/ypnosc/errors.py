"""Exception hierarchy for the ypnosc toolkit."""


class YpnoscError(Exception):
    """Base class for every error raised by this package."""


class ParseError(YpnoscError):
    """Problem found while parsing or loading a program file.

    Carries a 1-based source position when one is known.
    """

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f"{self.line}:{self.col}: {self.message}"


class UndeclaredDimensionError(ParseError):
    pass


class DuplicateNameError(ParseError):
    pass


class MissingCursorError(ParseError):
    pass


class MultipleCursorsError(ParseError):
    pass


class RaggedRowsError(ParseError):
    pass


class EmptyRangeError(ParseError):
    pass


class MalformedRangeError(ParseError):
    pass


class DuplicateRegionError(ParseError):
    pass


class MixedRankError(ParseError):
    pass


class ScopeError(ParseError):
    pass


class EvalError(YpnoscError):
    """Raised while evaluating a stencil or boundary body."""


class TypeMismatchError(EvalError):
    pass


class DivisionByZeroError(EvalError):
    pass


class OutOfBoundsAccessError(EvalError):
    """Checked absolute indexing hit a cell outside the stored region."""


class GridError(YpnoscError):
    """Problem constructing or using a grid."""


class RankMismatchError(GridError):
    pass


class SizeMismatchError(GridError):
    pass


class ElemTypeMismatchError(GridError):
    pass


class MissingCellError(GridError):
    pass


class DuplicateCellError(GridError):
    pass


class IndexOutsideExtentError(GridError):
    pass


class InvalidExtentError(GridError):
    pass


class SafetyViolationError(YpnoscError):
    """A stencil application was rejected by the static safety check."""

    def __init__(self, report):
        self.report = report
        lines = ", ".join(
            f"offset {off} missing region {reg}" for off, reg in report.violations
        )
        super().__init__(f"unsafe stencil application: {lines}")
