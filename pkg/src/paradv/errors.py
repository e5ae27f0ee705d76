"""Exception types shared across the package.

Every error that stems from bad user-supplied parameters derives from
:class:`ParameterError`; the command line front end maps those to exit
code 2 and prints the class name.
"""


class ParadvError(Exception):
    """Base class for all package errors."""


class ParameterError(ParadvError, ValueError):
    """Invalid parameters supplied by the caller."""


class NotSymmetric(ParameterError):
    pass


class ZeroMatrix(ParameterError):
    pass


class DimMismatch(ParameterError):
    pass


class NonIntegerParameters(ParameterError):
    pass


class Overflow(ParameterError):
    """Requested Hamming weight exceeds the input length."""


class ValueOverlap(ParameterError):
    """The acceptance windows of the two weight classes share a value."""


class IndexOutOfRange(ParameterError):
    pass


class EmptyRowOrColumn(ParameterError):
    pass


class IndivisibleParameters(ParameterError):
    pass


class NonUnitary(ParameterError):
    pass
