"""Exception types shared across the engine."""


class ConfigurationError(ValueError):
    """Unknown Cartan type or unsupported rank."""


class DomainError(ValueError):
    """Arguments outside an operation's mathematical domain."""


class PoleError(ArithmeticError):
    """A rational function was evaluated at a zero of its denominator."""


class UnsupportedEvaluationError(ArithmeticError):
    """Substitution would require a fractional power of the evaluation point."""


class DepthError(ValueError):
    """A truncated module is too shallow for the requested computation."""


class GenericityError(RuntimeError):
    """A Verma-module solve was not unique (or had no solution), so a
    quantity defined only at generic arguments could not be read off."""


class NoIntertwinerError(ValueError):
    """The requested expectation value admits no intertwining operator."""


class ConditionError(ValueError):
    """Input function fails the membership conditions; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"input fails conditions: {report.first_failure()}")


class TheoremViolationError(AssertionError):
    """An internal invariant guaranteed by the theory failed.  This must
    never fire on exact condition-satisfying input; if it does, it is either
    an implementation bug or a genuine counterexample and has to be
    investigated."""
