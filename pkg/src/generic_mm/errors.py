"""Exception hierarchy shared by all modules."""


class GenericMMError(Exception):
    """Base class for errors raised by this package."""


class InvalidStateError(GenericMMError, ValueError):
    """A state lies outside the domain of the entropy (e.g. theta <= 0)."""


class EmptySampleError(GenericMMError, ValueError):
    """A validator was called without sample states."""


class StencilError(GenericMMError, ValueError):
    """A finite-difference stencil would leave the model domain."""


class SolverFailure(GenericMMError, RuntimeError):
    """A time step could not be computed.

    Attributes
    ----------
    diagnostics
        Whatever the stepper knew when it gave up (may be ``None``).
    step_index
        Index ``i`` of the failed step ``y_{i-1} -> y_i`` when raised from
        :func:`generic_mm.schemes.run`.
    trajectory
        Partial trajectory ``y_0 .. y_{i-1}`` when raised from ``run``.
    """

    def __init__(self, message, diagnostics=None, step_index=None, trajectory=None):
        super().__init__(message)
        self.diagnostics = diagnostics
        self.step_index = step_index
        self.trajectory = trajectory


class IntegrationError(GenericMMError, RuntimeError):
    """The reference integrator left the physical domain or stalled."""
