"""Exception hierarchy shared across the framework.

Module-specific errors subclass :class:`LocokitError` so callers (and the
CLI exit-code mapping) can catch everything from one root.
"""


class LocokitError(Exception):
    """Base class for every error raised by locokit."""


class DimensionMismatch(LocokitError):
    """A vector or matrix argument has the wrong length/shape."""


class NonFiniteInput(LocokitError):
    """An input contains NaN or infinity."""


# --- model / parsing ----------------------------------------------------


class ModelError(LocokitError):
    pass


class MalformedXml(ModelError):
    """XML that does not parse; carries the (line, column) position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (line {position[0]}, column {position[1]})"
        super().__init__(message)
        self.position = position


class UnsupportedJointType(ModelError):
    pass


class DanglingReference(ModelError):
    pass


class DuplicateName(ModelError):
    pass


class TreeStructureError(ModelError):
    """The link/joint graph is not a single connected tree."""


class ModelValidationError(ModelError):
    """A parsed model violates a hard invariant; carries the diagnostics."""

    def __init__(self, diagnostics):
        super().__init__(
            "; ".join(f"{d.element}: {d.message}" for d in diagnostics)
        )
        self.diagnostics = list(diagnostics)


class MissingJoint(ModelError):
    pass


class UnknownJoint(ModelError):
    pass


class NegativeGain(ModelError):
    pass


class HomeOutOfLimits(ModelError):
    pass


class UnknownRobot(ModelError):
    pass


# --- kinematics / dynamics ----------------------------------------------


class KinDynError(LocokitError):
    pass


class UnknownFrame(KinDynError):
    pass


class SingularMassMatrix(KinDynError):
    def __init__(self, condition):
        super().__init__(f"mass matrix condition estimate {condition:.3e} > 1e12")
        self.condition = condition


class ZeroMass(KinDynError):
    pass


class EulerSingularity(KinDynError):
    """Roll-pitch-yaw rate map is singular (pitch within 1e-6 of +/-pi/2)."""


# --- bus ------------------------------------------------------------------


class BusError(LocokitError):
    pass


class UnknownTopic(BusError):
    pass


class KindMismatch(BusError):
    pass


class DeadHandle(BusError):
    pass


# --- low-level controller / backends --------------------------------------


class ControlError(LocokitError):
    pass


class NonPositiveDuration(ControlError):
    pass


class UnsupportedMode(ControlError):
    pass


class BackendFault(ControlError):
    """The plant raised during the control loop; wraps the cause."""


class NonFiniteState(ControlError):
    """Simulation state went non-finite; carries the last good state."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


# --- high-level controller -------------------------------------------------


class NoStateYet(ControlError):
    pass


class NotFloatingBase(ControlError):
    pass


class SingularLegJacobian(ControlError):
    def __init__(self, frame, condition):
        super().__init__(f"leg jacobian for {frame} has condition {condition:.3e} > 1e6")
        self.frame = frame
        self.condition = condition


class NotApplicable(ControlError):
    """Requested estimate is undefined for this robot morphology."""


class IkError(ControlError):
    def __init__(self, message, best_q=None, best_residual=None):
        super().__init__(message)
        self.best_q = best_q
        self.best_residual = best_residual


class NoConvergence(IkError):
    pass


class Unreachable(IkError):
    pass


class ChannelSchemaFrozen(ControlError):
    pass
