class InvalidOrderSpecError(Exception):
    pass


class InvalidRunConfigError(Exception):
    pass


class InvalidFreeBoxError(Exception):
    pass


class InvalidCheckNameError(Exception):
    pass


class ConeViolationError(Exception):
    pass


class NotAnalyticError(Exception):
    def __init__(self) -> None:
        super().__init__(
            "Hankel operators act on polynomials of analytic type; "
            "the argument has coefficients on the negative cone"
        )


class NoMinimalPositiveError(Exception):
    """Raise when an operation needs the least positive character of the order.

    Every operation built on the index map χ ↦ −χ − χ₁ (Hankel matrix realization on
    the positive cone, the Hankel seminorm) is gated by this error.
    """

    def __init__(self, order_kind: str) -> None:
        super().__init__(
            f"Order of kind '{order_kind}' has no minimal positive element"
        )


class DimensionMismatchError(Exception):
    def __init__(self, expected: int, actual: int) -> None:
        super().__init__(f"Expected dimension {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class SymbolParseError(Exception):
    """Raise when a symbol file cannot be parsed into a trigonometric polynomial."""


class SolverError(Exception):
    """Raise when the subgradient solver produces non-finite values."""


class NoConvergenceError(Exception):
    """Raise when power iteration does not reach the requested tolerance.

    The last iterate is kept on the exception so callers can still use it as a
    lower bound.
    """

    def __init__(self, last_value: float, gap: float, iterations: int) -> None:
        super().__init__(
            f"Power iteration did not converge after {iterations} iterations "
            f"(last value={last_value!r}, relative gap={gap!r})"
        )
        self.last_value = last_value
        self.gap = gap
        self.iterations = iterations


class InequalityViolationError(Exception):
    def __init__(self, failures: list[str]) -> None:
        super().__init__(f"Violated inequalities: {', '.join(failures)}")
        self.failures = failures
