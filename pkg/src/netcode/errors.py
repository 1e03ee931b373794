"""Exception hierarchy shared by every module."""


class NetcodeError(Exception):
    """Base class for library errors."""


class InvalidNetwork(NetcodeError):
    pass


class CycleDetected(InvalidNetwork):
    pass


class UnknownEdge(NetcodeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PathCapExceeded(NetcodeError):
    pass


class PreconditionViolated(NetcodeError):
    pass


class FieldMismatch(NetcodeError):
    pass


class ZeroPolynomial(NetcodeError):
    pass


class UnboundVariable(NetcodeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SymbolicOverflow(NetcodeError):
    """A polynomial grew past the monomial cap."""


class NotTopologicallySorted(NetcodeError):
    pass


class NotAGnsCut(NetcodeError):
    pass


class DecompositionMismatch(NetcodeError):
    pass


class InternalContradiction(NetcodeError):
    """Raised when a case the theory rules out shows up anyway."""


class CodeSearchFailed(NetcodeError):
    pass


class SearchSpaceTooLarge(NetcodeError):
    pass


class DimensionMismatch(NetcodeError):
    pass


class StateSpaceTooLarge(NetcodeError):
    pass


class ParseError(NetcodeError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
