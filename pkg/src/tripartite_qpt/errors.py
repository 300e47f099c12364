"""Exception types shared by all modules.

The command line maps these onto exit codes (1 validation, 2 numerical, 3 property).
"""


class ValidationError(ValueError):
    """Input violates a documented precondition (shape, norm, hermiticity, ...)."""


class NumericalError(ArithmeticError):
    """A computation produced a result outside its provable range, or did not converge."""


class PropertyFailure(AssertionError):
    """A verification property exceeded its tolerance."""
