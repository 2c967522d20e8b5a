"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside an operation's supported domain (alphabet, measure, range)."""


class InvalidKernelError(ValueError):
    """Single-coordinate Markov kernel is not row-stochastic."""


class PartitionError(ValueError):
    """Step sets passed to a correlation query overlap or are empty."""


class DegenerateDistributionError(ValueError):
    """Operation requires spectral gap rho < 1 but the distribution is degenerate."""


class BudgetExceededError(RuntimeError):
    """Exact enumeration would exceed the configured work budget."""


class BoundViolation(RuntimeError):
    """A guaranteed inequality failed numerically; indicates an implementation bug."""
