"""Exception types shared across the toolkit."""


class BecDesignError(Exception):
    """Base class for all toolkit errors."""


class DistributionError(BecDesignError):
    """Invalid degree distribution (bad coefficients, degree < 2, bad sum)."""


class DegenerateDistributionError(BecDesignError):
    """Check side concentrated on degree 2: the inverse expansion collapses
    to a single term and none of the design machinery applies."""


class NumericalDegradationError(BecDesignError):
    """Series inversion lost positivity in floating point."""

    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(
            f"inverse-series coefficient at index {index} is {value:.3e}; "
            f"positivity lost, reduce the truncation order"
        )


class InfeasibleChannelError(BecDesignError):
    """Channel parameter below the stability limit of the check side."""


class InfeasibleRateError(BecDesignError):
    """Target rate too large for the check side."""


class InfeasibleSearchError(BecDesignError):
    """Constrained rate optimization has no feasible point."""
