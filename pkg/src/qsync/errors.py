"""Exception types shared across the package."""


class QsyncError(Exception):
    """Base class for all package errors."""


class DimensionError(QsyncError, ValueError):
    """Operands have missing, invalid or incompatible dimensions."""


class ContractViolationError(QsyncError, ValueError):
    """An input violates a documented precondition (non-Hermitian, bad trace, ...)."""


class PSDViolationError(QsyncError, ValueError):
    """A matrix that must be positive semidefinite has a clearly negative eigenvalue."""


class DegenerateSteadyStateError(QsyncError, RuntimeError):
    """The steady-state equation does not have a unique normalized solution."""


class IntegrationError(QsyncError, RuntimeError):
    """Fixed-step time integration became unstable."""


class ConfigError(QsyncError, ValueError):
    """Invalid sweep configuration; carries every violation found, not just the first."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))
