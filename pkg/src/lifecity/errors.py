"""Exception types raised by lifecity.

Every domain error derives from :class:`LifeError`, which is what the CLI
catches to map failures onto exit code 2.
"""


class LifeError(Exception):
    """Base class for all domain errors."""


class EmptyGrid(LifeError, ValueError):
    pass


class RaggedRows(LifeError, ValueError):
    pass


class OutOfBounds(LifeError, IndexError):
    pass


class DimensionMismatch(LifeError, ValueError):
    pass


class EmptyMask(LifeError, ValueError):
    pass


class InvalidProbability(LifeError, ValueError):
    pass


class RingOutOfRange(LifeError, IndexError):
    pass


class ScheduleLengthMismatch(LifeError, ValueError):
    pass


class GeometryMismatch(LifeError, ValueError):
    pass


class InvalidConfig(LifeError, ValueError):
    pass


class EmptyPattern(LifeError, ValueError):
    pass


class IllegalCharacter(LifeError, ValueError):
    pass


class InvalidScale(LifeError, ValueError):
    pass
