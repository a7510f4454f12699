"""Exception hierarchy shared by all gpdkit modules."""


class GpdkitError(Exception):
    """Base class for domain failures (CLI exit status 1)."""


class BlockOutOfRange(GpdkitError):
    """A Neumann block index lies beyond the known prefix."""


class RecognitionFailure(GpdkitError):
    """A block closure failed alternating-group recognition."""


class InvalidPrefix(GpdkitError, ValueError):
    pass


class CapExceeded(GpdkitError):
    def __init__(self, cap, what="closure"):
        super().__init__(f"{what} exceeds cap {cap}")
        self.cap = cap


class IndexMismatch(GpdkitError):
    pass


class NotTransitive(GpdkitError):
    pass


class ActionLawViolation(GpdkitError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidAction(GpdkitError):
    pass


class CoverageFailure(GpdkitError):
    pass


class NotInjective(GpdkitError):
    pass


class MissingProvenance(GpdkitError):
    pass


class FormatError(GpdkitError, ValueError):
    """Malformed serialized input."""


class InvalidPoint(GpdkitError, ValueError):
    pass
