class EtalecobError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(EtalecobError, ValueError):
    """A simplicial object, map or subobject violates its structural contract."""


class ComplexError(EtalecobError, ValueError):
    """Consecutive differentials do not compose to zero."""


class BudgetExceeded(EtalecobError):
    """An exhaustive enumeration would exceed its element budget."""


class ParameterError(EtalecobError, ValueError):
    """Invalid numeric parameters (non-prime l, l dividing q, ...)."""


class CertificateError(EtalecobError):
    """A spectral-sequence step was requested without the certificate it needs."""
