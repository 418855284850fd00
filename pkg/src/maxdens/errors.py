"""Exception types shared across the package."""


class MaxdensError(Exception):
    """Base class for all package errors."""


class NonDivisibleBlock(MaxdensError):
    """Block size does not divide the sample size."""


class FitDiverged(MaxdensError):
    """GEV maximum-likelihood fit failed from every start."""


class InsufficientBlocks(MaxdensError):
    """Too few block maxima for the requested operation."""


class FisherSingular(MaxdensError):
    """Fisher information is not finite for this shape parameter."""


class AllReplicatesFailed(MaxdensError):
    """Every replicate of a benchmark cell failed."""


class SchemaError(MaxdensError):
    """An input file does not have the expected layout."""
