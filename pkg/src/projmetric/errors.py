"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`InputError` -> 2,
:class:`PreconditionError` -> 3, :class:`InvariantViolation` -> 4.
"""


class ProjmetricError(Exception):
    """Base class for every error raised by this package."""


class InputError(ProjmetricError, ValueError):
    """Malformed input: bad expression text, bad structure file, bad flag value."""


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownIdentifierError(ParseError):
    pass


class ExponentError(ParseError):
    pass


class MissingAssignmentError(ProjmetricError, ValueError):
    pass


class VarianceError(ProjmetricError, ValueError):
    """Slots combined with the wrong up/down variance."""


class SlotError(ProjmetricError, IndexError):
    pass


class PreconditionError(ProjmetricError, ValueError):
    """Well-formed input that the requested operation cannot accept."""


class SymmetryError(PreconditionError):
    pass


class DegenerateMetricError(PreconditionError):
    pass


class InexactDivisionError(PreconditionError):
    pass


class DegenerateSigmaError(PreconditionError):
    pass


class UnsupportedDeterminantError(PreconditionError):
    pass


class FelsError(PreconditionError):
    pass


class ShapeError(PreconditionError):
    pass


class InconsistentCubicError(PreconditionError):
    pass


class ResourceLimitError(PreconditionError):
    pass


class UnknownCovariantError(InputError):
    pass


class InvariantViolation(ProjmetricError, AssertionError):
    """An identity the engine checks on its own output did not hold."""
