"""Exception hierarchy shared across the toolkit."""


class EmpcircError(Exception):
    """Base class for all toolkit errors."""


class ContractError(EmpcircError, ValueError):
    """An argument violates a documented precondition."""


class DataError(EmpcircError):
    """A data file is malformed or inconsistent."""


class NumericalError(EmpcircError):
    """An iterative numerical procedure failed to converge."""


class SingularMatrixError(NumericalError):
    """Linear system is singular to working precision."""


class PoleError(NumericalError):
    """Transmission denominator vanished; inputs are unphysical."""
