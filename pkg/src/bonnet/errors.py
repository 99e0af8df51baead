"""
Exception hierarchy for bonnet.

Library code raises these; the CLI decides which ones are usage errors
(exit 2) and which ones are numerical failures (exit 1).
"""


class BonnetError(Exception):
    """Base class for every error raised by bonnet."""


class ContractViolation(BonnetError, ValueError):
    """A precondition of an operation does not hold."""


class ParameterError(ContractViolation):
    """Shape parameters outside their documented valid range."""


class DomainError(BonnetError, ValueError):
    """A parameter point lies outside the chart domain."""


class EvaluationError(BonnetError, ArithmeticError):
    """A chart map or an integrand produced non-finite values."""


class DegenerateImmersionError(BonnetError, ArithmeticError):
    """The tangent vectors of a chart are (numerically) linearly dependent."""


class NumericalError(BonnetError, ArithmeticError):
    """A linear-algebra step failed or was too ill-conditioned to trust."""


class NumericalDegeneracyError(NumericalError):
    """The normal solve exceeded the condition-number limit."""


class BudgetError(BonnetError, ValueError):
    """A quadrature grid would exceed the configured node cap."""


class ConfigurationError(BonnetError, ValueError):
    """Missing or malformed run configuration (constants file, threads, ...)."""


class CalibrationError(BonnetError, ArithmeticError):
    """The Gauss-Bonnet calibration system is ill-conditioned."""
