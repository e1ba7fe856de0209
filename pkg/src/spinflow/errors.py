"""
Exceptions raised by SpinFlow. The CLI maps each family to an exit code.
"""


class SpinFlowError(Exception):
    exit_code = 1


class ConfigError(SpinFlowError, ValueError):
    exit_code = 2


class CurveInputError(SpinFlowError):
    exit_code = 2


class BadFormat(CurveInputError):
    pass


class NotClosed(CurveInputError):
    pass


class OffSphere(CurveInputError):
    pass


class NumericalError(SpinFlowError):
    exit_code = 3


class NotInAlgebra(NumericalError):
    pass


class SingularPoint(NumericalError):
    pass


class NoSafeRotation(NumericalError):
    pass


class GaugeResidual(NumericalError):
    pass


class NonDiagonalMonodromy(NumericalError):
    pass


class FixedPointDiverged(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class UnitaryDrift(NumericalError):
    pass


class PoleHit(NumericalError):
    pass


class Overflow(NumericalError):
    pass


class DegenerateLine(NumericalError):
    pass


class DegenerateSpeed(NumericalError):
    pass


class FrameDegenerate(NumericalError):
    pass


class DerivativeNoise(NumericalError):
    pass


class ExportError(SpinFlowError):
    exit_code = 4


class NonClosedWarning(UserWarning):
    """The filament built from a curve with nonzero mean is not x-periodic."""


class ArclengthDriftWarning(UserWarning):
    """A reconstructed filament is no longer parametrized by arclength to tolerance."""
