from __future__ import annotations


class TorusLiftsError(ValueError):
    """Root of every error raised by the library."""


class DimensionMismatch(TorusLiftsError):
    pass


class NotAlternating(TorusLiftsError):
    pass


class NotSymmetric(TorusLiftsError):
    pass


class NotNilpotent(TorusLiftsError):
    pass


class NonUnitDeterminant(TorusLiftsError):
    pass


class NotComplexStructure(TorusLiftsError):
    pass


class NotOneOne(TorusLiftsError):
    """The alternating form is not of type (1,1) for the complex structure."""


class TorusMismatch(TorusLiftsError):
    pass


class SingularOmega(TorusLiftsError):
    pass


class NotPositiveDefinite(TorusLiftsError):
    pass


class NotGCS(TorusLiftsError):
    pass


class InconsistentBlocks(TorusLiftsError):
    """The matrix is not of generalized-metric block form."""


class UnequalChernClass(TorusLiftsError):
    pass


class InvalidParameter(TorusLiftsError):
    pass


class SessionError(TorusLiftsError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line:
            return f'line {self.line}, column {self.column}: {self.message}'
        return self.message


class SessionSyntaxError(SessionError):
    pass


class SessionSemanticError(SessionError):
    pass
