"""Exception hierarchy shared by all fockmetric modules."""


class FockMetricError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimensionError(FockMetricError, ValueError):
    pass


class OutOfRangeError(FockMetricError, ValueError):
    pass


class DomainError(FockMetricError, ValueError):
    """A physical parameter lies outside its domain (e.g. non-positive frequency)."""


class ContractViolation(FockMetricError):
    """A numerical invariant of an input or output does not hold."""


class TruncationLeakageError(ContractViolation):
    """Population reached the top level of a truncated Fock space."""


class UnboundedVarianceError(ContractViolation, ZeroDivisionError):
    """Zero Fisher information: the estimator variance has no finite bound."""


class NumericalError(ContractViolation):
    """A numerical routine (quadrature, refinement) failed its own diagnostics."""
