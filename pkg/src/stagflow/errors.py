"""Exception types raised by the solvers and operators."""


class StagflowError(Exception):
    """Base class for all package errors."""


class NonZeroMean(StagflowError, ValueError):
    """An inverse derivative was requested for a field whose mean is not zero."""

    def __init__(self, mean, tol):
        super().__init__(f"field mean {mean:.3e} exceeds tolerance {tol:.1e}")
        self.mean = mean
        self.tol = tol


class DimensionUnsupported(StagflowError, ValueError):
    """The requested operation has no meaning for this dimension parameter."""


class BlowUp(StagflowError):
    """The gradient diverged (or became non-finite) during time stepping.

    ``state`` is the last finite state, ``history`` holds ``(t, min_dxu, max_dxu)``
    samples collected while stepping, so the approach to the singularity can
    be inspected after the fact.
    """

    def __init__(self, t, state=None, history=None, reason=""):
        msg = f"blow-up detected at t={t:.6g}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
        self.t = t
        self.state = state
        self.history = history if history is not None else []
        self.reason = reason


class FlowDegenerate(StagflowError):
    """The flow map lost its diffeomorphism property (Jacobian too small)."""

    def __init__(self, t, min_jacobian):
        super().__init__(f"flow Jacobian {min_jacobian:.3e} below threshold at t={t:.6g}")
        self.t = t
        self.min_jacobian = min_jacobian


class PhaseCollapse(StagflowError):
    """A phase of the two-phase solution shrank to zero width."""

    def __init__(self, t, center, outer):
        super().__init__(f"phase collapse at t={t:.6g}: center={center:.3e}, outer={outer:.3e}")
        self.t = t
