"""Exception hierarchy shared by every module."""


class EntsplitError(Exception):
    """Base class for all library errors."""


class DimensionError(EntsplitError, ValueError):
    """An object whose shape does not fit the tensor-product space."""


class NormalizationError(EntsplitError, ValueError):
    """An operation that needs a unit vector received something else."""


class ContractViolation(EntsplitError, ValueError):
    """Inputs break an operation's precondition (wrong shape, mode, hermiticity, ...)."""


class RankDeficiencyError(EntsplitError, ValueError):
    """A spanning set is linearly dependent."""


class ZeroProbabilityError(EntsplitError, ValueError):
    """A forced measurement outcome has (numerically) zero probability."""


class PreconditionError(EntsplitError, ValueError):
    """A generator was asked for something it cannot build (odd dimension, infeasible profile)."""


class ProblemFileError(EntsplitError, ValueError):
    """A problem file could not be parsed or validated."""
