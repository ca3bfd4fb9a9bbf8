"""Exception types shared across the package."""


class FramevarError(Exception):
    """Base class for package-specific errors."""


class DegenerateStencilError(FramevarError, ValueError):
    """A stencil violates a geometric precondition (zero edge, zero ordinate, ...)."""


class SingularActionError(FramevarError, ValueError):
    """A group element is applied at a point where its action is undefined."""


class PreconditionError(FramevarError, ValueError):
    """Input data violates a documented scheme precondition."""


class InitializationError(FramevarError, RuntimeError):
    """Seed construction failed (no root in the arc-step bracket, ...)."""


class SolverFailure(FramevarError, RuntimeError):
    """Newton iteration did not converge.

    Carries the last residual norm and iteration count; ``run`` adds the
    failing lattice index.
    """

    def __init__(self, message: str, residual_norm: float, iterations: int,
                 index: int | None = None):
        super().__init__(message)
        self.residual_norm = residual_norm
        self.iterations = iterations
        self.index = index

    def at_index(self, index: int) -> "SolverFailure":
        err = SolverFailure(f"{self.args[0]} (at step index {index})",
                            self.residual_norm, self.iterations, index)
        return err
