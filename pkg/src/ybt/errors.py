"""Exception and warning types shared across the package."""

from __future__ import annotations


class YbtError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(YbtError):
    """Operands use different scalar backends, or an unsupported one."""


class ShapeMismatchError(YbtError):
    """Leg counts, site dimensions or matrix shapes are inconsistent."""


class SingularOperatorError(YbtError):
    """An operator that must be invertible is not.

    Carries the rank actually found during elimination.
    """

    def __init__(self, side: int, rank: int):
        self.side = side
        self.rank = rank
        super().__init__(f"operator is not invertible: rank {rank} < {side}")


class SizeCapError(YbtError):
    """A requested computation exceeds the configured size cap."""


class MissingComponentError(YbtError):
    """A required (m, n) twist component or omega entry is absent."""


class FormatError(YbtError):
    """A serialized object is malformed.  `where` locates the offender."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{message} (at {where})" if where else message)


class CatalogError(YbtError):
    """Unknown catalog entry, bad parameter, or failed self-validation."""


class ConditionWarning(UserWarning):
    """A stated precondition does not hold; the result is still returned."""
