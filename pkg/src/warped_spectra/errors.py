"""Exception hierarchy.

The CLI maps these onto exit codes: ``ModelError`` is a failed check (1),
``ProfileSyntaxError`` is a usage error (2), everything else numeric (3).
"""


class WarpedSpectraError(Exception):
    """Base class for all package errors."""


class ProfileSyntaxError(WarpedSpectraError, ValueError):
    """Malformed curvature expression. ``offset`` is the byte offset of the problem."""

    def __init__(self, message, text, offset):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at offset {offset}: {text!r}")


class ProfileEvaluationError(WarpedSpectraError, ArithmeticError):
    """A profile produced a non-finite value (pole, bad power, overflow)."""


class DomainError(WarpedSpectraError, ValueError):
    """Argument outside the domain of a profile, warp or ball."""


class IntegrationError(WarpedSpectraError, RuntimeError):
    """The ODE integrator failed (step-size underflow or similar)."""


class BracketError(WarpedSpectraError, RuntimeError):
    """Eigenvalue bracketing or bisection did not converge."""


class OracleDisagreement(WarpedSpectraError, RuntimeError):
    """Shooting and finite-difference eigenvalues disagree beyond tolerance."""


class ModelError(WarpedSpectraError, ValueError):
    """A profile does not yield an admissible closed model."""
