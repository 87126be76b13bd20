"""Exception hierarchy shared by all modules."""


class FockProveError(Exception):
    """Base class for domain errors raised by this package."""


class ParseError(FockProveError, ValueError):
    """Malformed set expression or polynomial text.

    ``offset`` is the byte offset (UTF-8) of the offending token.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class ArityError(FockProveError, ValueError):
    pass


class StateError(FockProveError, ValueError):
    """Invalid state specification or unnormalized state."""


class ConvergenceError(FockProveError, ArithmeticError):
    pass


class ConsistencyError(FockProveError, AssertionError):
    """An extracted proof failed to re-verify. Indicates a bug."""
