"""Exception and warning types raised across the package."""


class HrvError(ValueError):
    """Base class for data and argument errors."""


class ZeroPoint(HrvError):
    pass


class OutOfRangeAngle(HrvError):
    pass


class InvalidWedge(HrvError):
    pass


class OutOfDomain(HrvError):
    """A point has a negative coordinate where the first quadrant is required."""


class InsideForbiddenZone(HrvError):
    pass


class InsufficientData(HrvError):
    pass


class NonPositiveTail(InsufficientData):
    pass


class DegenerateFit(HrvError):
    pass


class LengthMismatch(HrvError):
    pass


class EmptyAngles(HrvError):
    pass


class InsufficientExceedances(HrvError):
    pass


class EmptyBranch(InsufficientExceedances):
    pass


class WedgeConflict(HrvError):
    pass


class NonPositiveThreshold(HrvError):
    pass


class NonPositiveAlpha(HrvError):
    pass


class NonPositivePrice(HrvError):
    pass


class TooShort(HrvError):
    pass


class EmptyFile(HrvError):
    pass


class ParseError(HrvError):
    """Malformed input row. ``row`` and ``column`` are 1-based."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DegenerateWedgeWarning(UserWarning):
    """Fitted wedge collapsed to a single ray."""


class WedgeValidityWarning(UserWarning):
    """Wedge violates a_l <= 1 <= a_u."""


class WedgeConflictWarning(UserWarning):
    pass
