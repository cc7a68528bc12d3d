"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """An iterative routine ran out of iterations; indicates a bug."""
