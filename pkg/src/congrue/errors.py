"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class CongrueError(Exception):
    """Base class for every error raised by the library."""


class InvalidInput(CongrueError, ValueError):
    pass


class InternalError(CongrueError):
    """A tripwire fired: the code reached a state the theory rules out."""


class NotIntegerValued(InvalidInput):
    pass


class Unsolvable(CongrueError):
    """Two constraints of a congruence system are incompatible."""

    def __init__(self, i: int, j: int):
        super().__init__(f"constraints {i} and {j} are incompatible")
        self.pair = (i, j)


class NotPreserving(InvalidInput):
    """A partial map fails (x - y) | (f(x) - f(y)) for some pair."""

    def __init__(self, x: int, y: int):
        super().__init__(f"pair ({x}, {y}) violates divisibility")
        self.pair = (x, y)


class DomainExceedsTower(InvalidInput):
    pass


class InternalUnsolvable(InternalError):
    pass


class CertificateViolation(InternalError):
    pass


class NotIsometric(InternalError):
    pass


class CarrierTooLarge(InvalidInput):
    pass


class IndexTooLarge(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    pass


class NotResiduated(CongrueError):
    def __init__(self, x: int, y: int):
        super().__init__(f"residual of {x} and {y} does not exist")
        self.pair = (x, y)


class NotDistributive(InvalidInput):
    pass
