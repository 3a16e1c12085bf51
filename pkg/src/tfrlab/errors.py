"""Exception types shared by all modules.

Every error carries a module-qualified ``code`` (e.g. ``"gabor.not_a_frame"``)
so the command-line front end can map it to an exit status without parsing
messages.
"""


class TFError(Exception):
    """Base class for all toolkit errors."""

    code = "tfrlab.error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(TFError, ValueError):
    """Inputs violate a precondition (shape, divisibility, admissibility)."""

    code = "tfrlab.validation"


class NumericalError(TFError, ArithmeticError):
    """A numerical procedure failed (non-convergence, ill-conditioning)."""

    code = "tfrlab.numerical"
