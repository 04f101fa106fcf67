"""Shared exception types."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation.

    Raised for things like probabilities outside [0, 1], graph orders that
    are too small for an asymptotic formula, or edge counts that do not fit
    the graph. The CLI maps this to exit code 3.
    """


class BudgetExhausted(RuntimeError):
    """Every trial of a Monte Carlo run timed out, so no rate is defined.

    The CLI maps this to exit code 4.
    """
