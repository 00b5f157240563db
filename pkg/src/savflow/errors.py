"""Error taxonomy shared across the package.

Every failure a caller can act on is raised as a subclass of SavflowError;
internal misuse (wrong argument types etc.) stays with the builtin exceptions.
"""


class SavflowError(Exception):
    """Base class for all library errors."""


class DomainError(SavflowError):
    """Input outside the mathematical domain of an operation.

    Raised, for example, when an energy shift fails to make the radicand of an
    auxiliary variable positive.  Radicands are never clamped.
    """


class DimensionMismatch(SavflowError):
    """Vector or matrix sizes are inconsistent."""


class SingularOperator(SavflowError):
    """An implicit-step operator I - alpha*D*L is not invertible."""


class SingularMatrix(SavflowError):
    """A dense linear solve hit a pivot below the breakdown threshold."""


class MissingHistory(SavflowError):
    """A multistep predictor was asked to run without its required history."""


class SplittingUnavailable(SavflowError):
    """An exponential integrator needs a semilinear splitting u' = Au + g(u),
    but the problem does not provide one."""


class ConvergenceError(SavflowError):
    """An iteration failed to converge within its fixed cap."""


class ConfigError(SavflowError):
    """Invalid run configuration (maps to exit code 2 in the CLI)."""


class StepError(SavflowError):
    """Wraps an error raised while advancing a time step.

    Carries the step index and the original error so the CLI can report a
    machine-readable line.
    """

    def __init__(self, step: int, cause: SavflowError):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step}: {cause.__class__.__name__}: {cause}")

    @property
    def kind(self) -> str:
        return self.cause.__class__.__name__
