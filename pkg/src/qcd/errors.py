"""Exception types raised across the package."""


class QCDError(Exception):
    """Base class for all package errors."""


class DimensionError(QCDError, ValueError):
    """Operand shapes or subsystem dimensions do not fit together."""


class NotHermitianError(QCDError, ValueError):
    pass


class NotUnitaryError(QCDError, ValueError):
    pass


class InvalidChannelError(QCDError, ValueError):
    pass


class NoWitness(QCDError):
    """The partially transposed Choi matrix has no eigenvalue below -tol."""

    def __init__(self, lambda_min: float, tol: float):
        self.lambda_min = lambda_min
        self.tol = tol
        super().__init__(
            f"Choi is PPT: lambda_min={lambda_min:.3e} is not below -{tol:.1e}"
        )
