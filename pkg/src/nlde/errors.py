"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    The best available estimate and its error bound are kept so callers can
    decide whether the partial result is still useful.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
