"""Exception hierarchy.

Every error raised for a bad argument or an infeasible computation derives
from :class:`RichLinesError`.  Input-file problems raise :class:`ParseError`
instead, which the CLI maps to a usage failure.
"""


class RichLinesError(ValueError):
    """Base class for computation errors."""


class EmptySetError(RichLinesError):
    def __init__(self, msg="empty set"):
        super().__init__(msg)


class DegenerateGeneratorError(RichLinesError):
    def __init__(self, detail=""):
        super().__init__("degenerate generator" + (f": {detail}" if detail else ""))


class NonInvertibleMapError(RichLinesError):
    def __init__(self, msg="non-invertible map"):
        super().__init__(msg)


class SlopeMismatchError(RichLinesError):
    def __init__(self, msg="slopes differ"):
        super().__init__(msg)


class ThresholdTooSmallError(RichLinesError):
    def __init__(self, msg="threshold too small"):
        super().__init__(msg)


class NotSquareError(RichLinesError):
    def __init__(self, msg="symmetrize first"):
        super().__init__(msg)


class SizeMismatchError(RichLinesError):
    def __init__(self, msg="sizes differ"):
        super().__init__(msg)


class SupportBlowupError(RichLinesError):
    """Raised when a projected support or work count exceeds its cap."""

    def __init__(self, projected, cap, what="support"):
        self.projected = projected
        self.cap = cap
        super().__init__(f"support blowup: projected {what} {projected} exceeds cap {cap}")


class DegenerateMeasureError(RichLinesError):
    def __init__(self, msg="log of 1"):
        super().__init__(msg)


class InvalidMeasureError(RichLinesError):
    pass


class ParseError(ValueError):
    """Malformed input text.  ``lineno`` is 1-based when known."""

    def __init__(self, msg, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {msg}".strip() if where else msg)
