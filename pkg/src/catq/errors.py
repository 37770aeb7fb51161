"""Exception hierarchy shared by every module."""


class CatqError(Exception):
    """Base class for all input and search errors raised by catq."""


class MalformedInput(CatqError):
    pass


class PathMismatch(CatqError):
    pass


class EndpointMismatch(CatqError):
    pass


class NotFound(CatqError):
    """No universal arrow (or other searched-for structure) exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeCapExceeded(CatqError):
    pass


class SearchCapExceeded(SizeCapExceeded):
    pass


class ShapeCapExceeded(SizeCapExceeded):
    pass


class ContextMismatch(CatqError):
    pass


class BaseMismatch(CatqError):
    pass


class NotSubpresheaf(CatqError):
    pass


class MissingComparisonCell(CatqError):
    pass


class NotAPullback(CatqError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FeetMismatch(CatqError):
    pass


class GridMismatch(CatqError):
    pass


class ParseError(CatqError):
    pass


class ValidationError(CatqError):
    pass
