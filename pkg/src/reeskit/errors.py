"""Exception hierarchy shared by every module."""


class ReesError(Exception):
    """Base class. The CLI maps these to exit code 1."""


class ParseError(ReesError):
    """Malformed input text. The CLI maps this to exit code 2."""


class CompositionError(ReesError):
    pass


class AssociativityError(ReesError):
    pass


class MissingInverseError(ReesError):
    pass


class PartialActionError(ReesError):
    pass


class UnsupportedError(ReesError):
    pass


class CapExceeded(ReesError):
    pass


class DecompositionError(ReesError):
    pass


class NotCancellativeError(ReesError):
    pass


class OrthogonalityError(ReesError):
    pass


class MoveError(ReesError):
    pass


class NotCompleteError(ReesError):
    pass


class DomainError(ReesError):
    pass
